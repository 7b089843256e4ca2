#include "inma/thinning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "inma/samplers.hpp"

namespace inma {

BetaMatrix::BetaMatrix(int q1, int q2, const std::vector<double>& entries_row_major)
    : q1_(q1), q2_(q2) {
    if (q1 < 0 || q2 < 0) {
        throw std::invalid_argument("order components must be nonnegative");
    }
    const std::size_t expected = static_cast<std::size_t>((q1 + 1) * (q2 + 1));
    if (entries_row_major.size() != expected) {
        throw std::invalid_argument("beta entry count " + std::to_string(entries_row_major.size()) +
                                    " does not match order (" + std::to_string(q1) + "," +
                                    std::to_string(q2) + "): expected " + std::to_string(expected));
    }
    flat_.resize(expected);
    for (int i = 0; i <= q1; ++i) {
        for (int j = 0; j <= q2; ++j) {
            flat_[static_cast<std::size_t>(flat_index(i, j))] =
                entries_row_major[static_cast<std::size_t>(i * (q2 + 1) + j)];
        }
    }
    beta_dot_ = std::accumulate(flat_.begin(), flat_.end(), 0.0);
}

BetaMatrix BetaMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw std::invalid_argument("beta matrix must have at least one row and column");
    }
    const std::size_t cols = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * cols);
    for (const auto& row : rows) {
        if (row.size() != cols) {
            throw std::invalid_argument("beta matrix rows have unequal lengths");
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return BetaMatrix(static_cast<int>(rows.size()) - 1, static_cast<int>(cols) - 1, flat);
}

double BetaMatrix::at(int i, int j) const {
    if (i < 0 || i > q1_ || j < 0 || j > q2_) {
        throw std::out_of_range("beta index (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside order (" + std::to_string(q1_) + "," +
                                std::to_string(q2_) + ")");
    }
    return flat_[static_cast<std::size_t>(flat_index(i, j))];
}

double BetaMatrix::at_or_zero(int i, int j) const {
    if (i < 0 || i > q1_ || j < 0 || j > q2_) return 0.0;
    return flat_[static_cast<std::size_t>(flat_index(i, j))];
}

double BetaMatrix::sum_of_squares() const {
    double s = 0.0;
    for (double b : flat_) s += b * b;
    return s;
}

const char* cross_dependence_name(CrossDependence model) {
    return model == CrossDependence::kIndependence ? "independence" : "spread";
}

namespace {

void require_spread_feasible(const BetaMatrix& beta, CrossDependence model) {
    if (model == CrossDependence::kSpread && beta.beta_dot() > 1.0 + 1e-12) {
        throw std::invalid_argument("spread model requires the beta entries to sum to at most 1, got " +
                                    std::to_string(beta.beta_dot()));
    }
}

}  // namespace

void sample_counting_vector(const BetaMatrix& beta, CrossDependence model,
                            rng::SiteStream& stream, std::span<std::uint8_t> out) {
    require_spread_feasible(beta, model);
    const auto coeffs = beta.flat();
    if (out.size() != coeffs.size()) {
        throw std::invalid_argument("counting vector buffer has wrong size");
    }
    if (model == CrossDependence::kIndependence) {
        for (std::size_t c = 0; c < coeffs.size(); ++c) {
            out[c] = stream.next_double() < coeffs[c] ? 1 : 0;
        }
    } else {
        // One uniform partitioned by cumulative beta; the residual mass
        // 1 - beta_dot is the all-zero outcome.
        std::fill(out.begin(), out.end(), std::uint8_t{0});
        const double u = stream.next_double();
        double cum = 0.0;
        for (std::size_t c = 0; c < coeffs.size(); ++c) {
            cum += coeffs[c];
            if (u < cum) {
                out[c] = 1;
                break;
            }
        }
    }
}

std::vector<std::uint8_t> sample_counting_vector(const BetaMatrix& beta, CrossDependence model,
                                                 rng::SiteStream& stream) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(beta.component_count()));
    sample_counting_vector(beta, model, stream, out);
    return out;
}

void sample_thinning_vector_into(const BetaMatrix& beta, CrossDependence model,
                                 std::uint64_t eps, rng::SiteStream& stream, ThinningPath path,
                                 std::span<std::uint64_t> out) {
    require_spread_feasible(beta, model);
    const auto coeffs = beta.flat();
    if (out.size() != coeffs.size()) {
        throw std::invalid_argument("thinning vector buffer has wrong size");
    }
    std::fill(out.begin(), out.end(), std::uint64_t{0});
    if (eps == 0) return;

    if (path == ThinningPath::kPerIndividual) {
        std::vector<std::uint8_t> z(coeffs.size());
        for (std::uint64_t r = 0; r < eps; ++r) {
            sample_counting_vector(beta, model, stream, z);
            for (std::size_t c = 0; c < z.size(); ++c) out[c] += z[c];
        }
        return;
    }

    if (model == CrossDependence::kIndependence) {
        for (std::size_t c = 0; c < coeffs.size(); ++c) {
            out[c] = samplers::binomial(eps, coeffs[c], stream);
        }
    } else {
        // Multinomial over the components plus the 1 - beta_dot rest bucket,
        // realized as sequential conditional binomials.
        std::uint64_t remaining = eps;
        double rest = 1.0;
        for (std::size_t c = 0; c < coeffs.size() && remaining > 0; ++c) {
            const double p = std::clamp(coeffs[c] / rest, 0.0, 1.0);
            out[c] = samplers::binomial(remaining, p, stream);
            remaining -= out[c];
            rest -= coeffs[c];
            if (rest <= 0.0) break;
        }
    }
}

ThinningVector sample_thinning_vector(const BetaMatrix& beta, CrossDependence model,
                                      std::uint64_t eps, rng::SiteStream& stream,
                                      ThinningPath path) {
    ThinningVector tv;
    tv.eps = eps;
    tv.y.resize(static_cast<std::size_t>(beta.component_count()));
    sample_thinning_vector_into(beta, model, eps, stream, path, tv.y);
    return tv;
}

double joint_success_prob(const BetaMatrix& beta, CrossDependence model,
                          std::pair<int, int> a, std::pair<int, int> b) {
    const double beta_a = beta.at(a.first, a.second);  // throws on out-of-range
    const double beta_b = beta.at(b.first, b.second);
    if (a == b) return beta_a;
    switch (model) {
        case CrossDependence::kIndependence:
            return beta_a * beta_b;
        case CrossDependence::kSpread:
            return 0.0;
    }
    return 0.0;
}

double pgf_z(const BetaMatrix& beta, CrossDependence model, std::span<const double> u) {
    require_spread_feasible(beta, model);
    const auto coeffs = beta.flat();
    if (u.size() != coeffs.size()) {
        throw std::invalid_argument("pgf argument vector has wrong size");
    }
    for (double ui : u) {
        if (!(ui >= 0.0 && ui <= 1.0)) {
            throw std::invalid_argument("pgf arguments must lie in [0, 1]");
        }
    }
    if (model == CrossDependence::kIndependence) {
        double prod = 1.0;
        for (std::size_t c = 0; c < coeffs.size(); ++c) {
            prod *= 1.0 - coeffs[c] + coeffs[c] * u[c];
        }
        return prod;
    }
    double acc = 1.0 - beta.beta_dot();
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
        acc += coeffs[c] * u[c];
    }
    return acc;
}

double pgf_y(const InnovationSpec& spec, const BetaMatrix& beta, CrossDependence model,
             std::span<const double> u) {
    return innovation_pgf(spec, pgf_z(beta, model, u));
}

}  // namespace inma
