#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "inma/rng.hpp"

namespace inma {

/// i.i.d. innovation laws available for the field. All are nonnegative
/// integer valued with finite mean and variance.
struct Poisson {
    double mu;  // mean, > 0
};

struct NegBin {
    double n;   // size, > 0
    double pi;  // success probability, in (0, 1)
};

struct Deterministic {
    std::uint64_t c;  // the constant value
};

using InnovationSpec = std::variant<Poisson, NegBin, Deterministic>;

struct Moments {
    double mean;
    double variance;
};

/// Slack above 1 accepted by pgf evaluations, so finite-difference moment
/// checks at u = 1 stay inside the domain. All supported laws have pgfs
/// that are finite on [0, 1 + kPgfSlack].
inline constexpr double kPgfSlack = 1e-3;

/// Throws std::invalid_argument describing the offending parameter.
void validate_innovation(const InnovationSpec& spec);

std::string innovation_name(const InnovationSpec& spec);

std::uint64_t sample_innovation(const InnovationSpec& spec, rng::SiteStream& stream);

/// E[u^eps] for u in [0, 1 + kPgfSlack].
double innovation_pgf(const InnovationSpec& spec, double u);

/// Exact analytic mean and variance of the law.
Moments innovation_moments(const InnovationSpec& spec);

/// P(eps = k), exact.
double innovation_pmf(const InnovationSpec& spec, std::uint64_t k);

/// Modified Bessel function of the first kind of integer order j >= 0,
/// by direct series summation. Terms are added until the next one drops
/// below 1e-15 * (1 + partial sum).
double bessel_i(unsigned j, double z);

}  // namespace inma
