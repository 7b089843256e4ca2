#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "inma/model.hpp"

namespace inma {

/// Limits for exhaustive enumeration. The innovation cutoff M restricts
/// each innovation to 0..M; when unset, the smallest M with tail mass
/// <= mass_bound is chosen (exact for Deterministic). state_limit caps the
/// number of table cells the convolution may visit before aborting.
struct EnumerationBudget {
    std::optional<std::uint64_t> innovation_cutoff;
    double mass_bound = 1e-10;
    std::uint64_t state_limit = 50'000'000;
};

/// Sub-probability mass function: the enumerated mass is 1 - error_bound,
/// where error_bound collects the truncated innovation tails.
struct MarginalPmf {
    std::map<std::uint64_t, double> pmf;
    double error_bound = 0.0;
};

struct BivariatePmf {
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> pmf;
    double error_bound = 0.0;
};

/// Exact law of one cell by dynamic-programming convolution: each of the
/// (q1+1)(q2+1) contributing innovations yields the mixture over eps of
/// Binomial(eps, beta) for its component, and the independent site
/// contributions are convolved together.
MarginalPmf enumerate_marginal_pmf(const InmaModel& model, const EnumerationBudget& budget = {});

/// Exact joint law of (X_{s,t}, X_{s-k,t-l}) for any lag sign. Innovations
/// seen by only one cell contribute marginally; innovations in the overlap
/// of the two dependence boxes contribute their exact pairwise thinning law
/// (product of binomials under Independence, trinomial under Spread, the
/// diagonal when the two components coincide).
BivariatePmf enumerate_bivariate_pmf(const InmaModel& model, std::pair<int, int> lag,
                                     const EnumerationBudget& budget = {});

/// Smallest cutoff M with P(eps > M) <= mass_bound.
std::uint64_t innovation_cutoff(const InnovationSpec& spec, double mass_bound);

double pgf_from_pmf(const std::map<std::uint64_t, double>& pmf, double u);
double pgf_from_pmf(const std::map<std::pair<std::uint64_t, std::uint64_t>, double>& pmf,
                    double u1, double u2);

/// Raw covariance of the (possibly sub-probability) joint pmf.
double covariance_from_pmf(const std::map<std::pair<std::uint64_t, std::uint64_t>, double>& pmf);

}  // namespace inma
