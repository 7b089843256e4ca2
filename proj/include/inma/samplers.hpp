#pragma once

#include <cstdint>

#include "inma/rng.hpp"

namespace inma::samplers {

/// Poisson(mu) draw. Inversion by sequential CDF search for mu <= 10,
/// transformed rejection for larger means.
std::uint64_t poisson(double mu, rng::SiteStream& stream);

/// Binomial(n, p) draw, exact for the full parameter range. Inversion when
/// n * min(p, 1-p) is small, BTPE rejection otherwise.
std::uint64_t binomial(std::uint64_t n, double p, rng::SiteStream& stream);

/// Standard normal draw (Marsaglia polar method).
double standard_normal(rng::SiteStream& stream);

/// Gamma(shape, 1) draw (Marsaglia-Tsang squeeze method).
double gamma(double shape, rng::SiteStream& stream);

/// Negative binomial draw with size n and success probability pi,
/// P(X = k) = C(n+k-1, k) * (1-pi)^k * pi^n, via the gamma-Poisson mixture.
std::uint64_t negative_binomial(double n, double pi, rng::SiteStream& stream);

}  // namespace inma::samplers
