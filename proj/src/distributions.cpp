#include "inma/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "inma/samplers.hpp"

namespace inma {

namespace {

void check_pgf_arg(double u) {
    if (!(u >= 0.0 && u <= 1.0 + kPgfSlack)) {
        throw std::invalid_argument("pgf argument " + std::to_string(u) +
                                    " outside [0, 1 + 1e-3]");
    }
}

}  // namespace

void validate_innovation(const InnovationSpec& spec) {
    if (const auto* p = std::get_if<Poisson>(&spec)) {
        if (!(p->mu > 0.0) || !std::isfinite(p->mu)) {
            throw std::invalid_argument("Poisson innovation requires mu > 0");
        }
    } else if (const auto* nb = std::get_if<NegBin>(&spec)) {
        if (!(nb->n > 0.0) || !std::isfinite(nb->n)) {
            throw std::invalid_argument("NegBin innovation requires size n > 0");
        }
        if (!(nb->pi > 0.0 && nb->pi < 1.0)) {
            throw std::invalid_argument("NegBin innovation requires pi in (0, 1)");
        }
    }
    // Deterministic has no constraints: any c >= 0 works.
}

std::string innovation_name(const InnovationSpec& spec) {
    if (std::holds_alternative<Poisson>(spec)) return "poisson";
    if (std::holds_alternative<NegBin>(spec)) return "negbin";
    return "deterministic";
}

std::uint64_t sample_innovation(const InnovationSpec& spec, rng::SiteStream& stream) {
    if (const auto* p = std::get_if<Poisson>(&spec)) {
        return samplers::poisson(p->mu, stream);
    }
    if (const auto* nb = std::get_if<NegBin>(&spec)) {
        return samplers::negative_binomial(nb->n, nb->pi, stream);
    }
    return std::get<Deterministic>(spec).c;
}

double innovation_pgf(const InnovationSpec& spec, double u) {
    check_pgf_arg(u);
    if (const auto* p = std::get_if<Poisson>(&spec)) {
        return std::exp(p->mu * (u - 1.0));
    }
    if (const auto* nb = std::get_if<NegBin>(&spec)) {
        const double denom = 1.0 - (1.0 - nb->pi) * u;
        if (denom <= 0.0) {
            throw std::domain_error("NegBin pgf evaluated beyond its radius of convergence");
        }
        return std::pow(nb->pi / denom, nb->n);
    }
    const auto c = std::get<Deterministic>(spec).c;
    return std::pow(u, static_cast<double>(c));
}

Moments innovation_moments(const InnovationSpec& spec) {
    if (const auto* p = std::get_if<Poisson>(&spec)) {
        return {p->mu, p->mu};
    }
    if (const auto* nb = std::get_if<NegBin>(&spec)) {
        const double mean = nb->n * (1.0 - nb->pi) / nb->pi;
        return {mean, mean / nb->pi};
    }
    return {static_cast<double>(std::get<Deterministic>(spec).c), 0.0};
}

double innovation_pmf(const InnovationSpec& spec, std::uint64_t k) {
    if (const auto* p = std::get_if<Poisson>(&spec)) {
        const double kd = static_cast<double>(k);
        return std::exp(-p->mu + kd * std::log(p->mu) - std::lgamma(kd + 1.0));
    }
    if (const auto* nb = std::get_if<NegBin>(&spec)) {
        const double kd = static_cast<double>(k);
        const double log_pmf = std::lgamma(nb->n + kd) - std::lgamma(kd + 1.0) -
                               std::lgamma(nb->n) + kd * std::log(1.0 - nb->pi) +
                               nb->n * std::log(nb->pi);
        return std::exp(log_pmf);
    }
    return std::get<Deterministic>(spec).c == k ? 1.0 : 0.0;
}

double bessel_i(unsigned j, double z) {
    if (z < 0.0) throw std::invalid_argument("bessel_i requires z >= 0");
    const double half = z / 2.0;
    // r = 0 term: (z/2)^j / j!
    double term = 1.0;
    for (unsigned r = 1; r <= j; ++r) term *= half / static_cast<double>(r);
    double sum = term;
    for (unsigned r = 1;; ++r) {
        term *= half * half / (static_cast<double>(r) * static_cast<double>(r + j));
        if (term < 1e-15 * (1.0 + sum)) break;
        sum += term;
    }
    return sum;
}

}  // namespace inma
