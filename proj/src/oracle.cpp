#include "inma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace inma {

namespace {

// Tracks convolution work against the budget's state limit.
class StateCounter {
public:
    explicit StateCounter(std::uint64_t limit) : limit_(limit) {}
    void charge(std::uint64_t states) {
        used_ += states;
        if (used_ > limit_) {
            throw std::length_error("enumeration visited " + std::to_string(used_) +
                                    " states, exceeding state_limit " + std::to_string(limit_));
        }
    }

private:
    std::uint64_t used_ = 0;
    std::uint64_t limit_;
};

// P(Bin(e, p) = w) for w = 0..e.
std::vector<double> binomial_row(std::uint64_t e, double p) {
    std::vector<double> row(static_cast<std::size_t>(e) + 1, 0.0);
    if (p <= 0.0) {
        row.front() = 1.0;
        return row;
    }
    if (p >= 1.0) {
        row.back() = 1.0;
        return row;
    }
    const double ratio = p / (1.0 - p);
    double term = std::pow(1.0 - p, static_cast<double>(e));
    row[0] = term;
    for (std::uint64_t w = 0; w < e; ++w) {
        term *= ratio * static_cast<double>(e - w) / static_cast<double>(w + 1);
        row[static_cast<std::size_t>(w) + 1] = term;
    }
    return row;
}

struct SiteLaw1D {
    std::vector<double> pmf;  // contribution value -> probability (sub-pmf)
};

// Law of one component's contribution: mixture over eps of Bin(eps, beta).
SiteLaw1D site_marginal_law(const InnovationSpec& spec, double beta, std::uint64_t cutoff,
                            StateCounter& counter) {
    SiteLaw1D law;
    law.pmf.assign(static_cast<std::size_t>(cutoff) + 1, 0.0);
    for (std::uint64_t e = 0; e <= cutoff; ++e) {
        const double pe = innovation_pmf(spec, e);
        if (pe == 0.0) continue;
        counter.charge(e + 1);
        const auto row = binomial_row(e, beta);
        for (std::size_t w = 0; w < row.size(); ++w) law.pmf[w] += pe * row[w];
    }
    return law;
}

using Matrix = std::vector<std::vector<double>>;  // [x][y]

Matrix make_matrix(std::size_t nx, std::size_t ny) {
    return Matrix(nx, std::vector<double>(ny, 0.0));
}

// Joint law of the two components a shared innovation feeds into the two
// cells. The two counting-series components of one individual succeed
// independently under Independence and exclusively under Spread.
Matrix site_joint_law(const InnovationSpec& spec, CrossDependence model, double beta_a,
                      double beta_b, bool same_component, std::uint64_t cutoff,
                      StateCounter& counter) {
    Matrix law = make_matrix(static_cast<std::size_t>(cutoff) + 1,
                             static_cast<std::size_t>(cutoff) + 1);
    for (std::uint64_t e = 0; e <= cutoff; ++e) {
        const double pe = innovation_pmf(spec, e);
        if (pe == 0.0) continue;

        if (same_component) {
            counter.charge(e + 1);
            const auto row = binomial_row(e, beta_a);
            for (std::size_t w = 0; w < row.size(); ++w) law[w][w] += pe * row[w];
            continue;
        }

        counter.charge((e + 1) * (e + 1));
        if (model == CrossDependence::kIndependence) {
            const auto row_a = binomial_row(e, beta_a);
            const auto row_b = binomial_row(e, beta_b);
            for (std::size_t x = 0; x < row_a.size(); ++x) {
                if (row_a[x] == 0.0) continue;
                for (std::size_t y = 0; y < row_b.size(); ++y) {
                    law[x][y] += pe * row_a[x] * row_b[y];
                }
            }
        } else {
            // Trinomial(e; beta_a, beta_b, rest) as Bin(e, beta_a) then
            // Bin(e - x, beta_b / (1 - beta_a)).
            const auto row_a = binomial_row(e, beta_a);
            const double cond = beta_a < 1.0 ? std::min(1.0, beta_b / (1.0 - beta_a)) : 0.0;
            for (std::size_t x = 0; x < row_a.size(); ++x) {
                if (row_a[x] == 0.0) continue;
                const auto row_b = binomial_row(e - x, cond);
                for (std::size_t y = 0; y < row_b.size(); ++y) {
                    law[x][y] += pe * row_a[x] * row_b[y];
                }
            }
        }
    }
    return law;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b,
                             StateCounter& counter) {
    counter.charge(static_cast<std::uint64_t>(a.size()) * b.size());
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Matrix convolve2(const Matrix& a, const Matrix& b, StateCounter& counter) {
    const std::size_t ax = a.size(), ay = a.front().size();
    const std::size_t bx = b.size(), by = b.front().size();
    counter.charge(static_cast<std::uint64_t>(ax) * ay * bx * by);
    Matrix out = make_matrix(ax + bx - 1, ay + by - 1);
    for (std::size_t i = 0; i < ax; ++i) {
        for (std::size_t j = 0; j < ay; ++j) {
            const double v = a[i][j];
            if (v == 0.0) continue;
            for (std::size_t x = 0; x < bx; ++x) {
                for (std::size_t y = 0; y < by; ++y) {
                    out[i + x][j + y] += v * b[x][y];
                }
            }
        }
    }
    return out;
}

double enumerated_innovation_mass(const InnovationSpec& spec, std::uint64_t cutoff) {
    double mass = 0.0;
    for (std::uint64_t e = 0; e <= cutoff; ++e) mass += innovation_pmf(spec, e);
    return std::min(mass, 1.0);
}

}  // namespace

std::uint64_t innovation_cutoff(const InnovationSpec& spec, double mass_bound) {
    validate_innovation(spec);
    if (const auto* d = std::get_if<Deterministic>(&spec)) return d->c;
    double cum = 0.0;
    for (std::uint64_t m = 0; m < 1'000'000; ++m) {
        cum += innovation_pmf(spec, m);
        if (cum >= 1.0 - mass_bound) return m;
    }
    throw std::length_error("innovation tail does not reach the requested mass bound "
                            "within 10^6 terms");
}

MarginalPmf enumerate_marginal_pmf(const InmaModel& model, const EnumerationBudget& budget) {
    require_valid(model);
    const std::uint64_t cutoff =
        budget.innovation_cutoff.value_or(innovation_cutoff(model.innovation, budget.mass_bound));
    StateCounter counter(budget.state_limit);

    std::vector<double> acc{1.0};
    for (double beta : model.beta.flat()) {
        const SiteLaw1D law = site_marginal_law(model.innovation, beta, cutoff, counter);
        acc = convolve(acc, law.pmf, counter);
    }

    MarginalPmf out;
    double mass = 0.0;
    for (std::size_t x = 0; x < acc.size(); ++x) {
        if (acc[x] > 0.0) {
            out.pmf[x] = acc[x];
            mass += acc[x];
        }
    }
    out.error_bound = std::max(0.0, 1.0 - mass);
    return out;
}

BivariatePmf enumerate_bivariate_pmf(const InmaModel& model, std::pair<int, int> lag,
                                     const EnumerationBudget& budget) {
    require_valid(model);
    const std::uint64_t cutoff =
        budget.innovation_cutoff.value_or(innovation_cutoff(model.innovation, budget.mass_bound));
    StateCounter counter(budget.state_limit);

    const int q1 = model.beta.q1();
    const int q2 = model.beta.q2();
    const int k = lag.first;
    const int l = lag.second;

    // Cell A sits at the origin, cell B at (-k, -l); innovation site w feeds
    // A via offset (-w.s, -w.t) and B via offset (-k - w.s, -l - w.t)
    // whenever the offset lies inside the order box.
    Matrix acc = make_matrix(1, 1);
    acc[0][0] = 1.0;

    const int s_lo = std::min(-q1, -k - q1), s_hi = std::max(0, -k);
    const int t_lo = std::min(-q2, -l - q2), t_hi = std::max(0, -l);
    for (int ws = s_lo; ws <= s_hi; ++ws) {
        for (int wt = t_lo; wt <= t_hi; ++wt) {
            const int ia = -ws, ja = -wt;
            const int ib = -k - ws, jb = -l - wt;
            const bool in_a = ia >= 0 && ia <= q1 && ja >= 0 && ja <= q2;
            const bool in_b = ib >= 0 && ib <= q1 && jb >= 0 && jb <= q2;
            if (!in_a && !in_b) continue;

            if (in_a && in_b) {
                const bool same = ia == ib && ja == jb;
                const Matrix law =
                    site_joint_law(model.innovation, model.crossdep, model.beta.at(ia, ja),
                                   model.beta.at(ib, jb), same, cutoff, counter);
                acc = convolve2(acc, law, counter);
            } else if (in_a) {
                const SiteLaw1D law =
                    site_marginal_law(model.innovation, model.beta.at(ia, ja), cutoff, counter);
                Matrix m = make_matrix(law.pmf.size(), 1);
                for (std::size_t x = 0; x < law.pmf.size(); ++x) m[x][0] = law.pmf[x];
                acc = convolve2(acc, m, counter);
            } else {
                const SiteLaw1D law =
                    site_marginal_law(model.innovation, model.beta.at(ib, jb), cutoff, counter);
                Matrix m = make_matrix(1, law.pmf.size());
                for (std::size_t y = 0; y < law.pmf.size(); ++y) m[0][y] = law.pmf[y];
                acc = convolve2(acc, m, counter);
            }
        }
    }

    BivariatePmf out;
    double mass = 0.0;
    for (std::size_t x = 0; x < acc.size(); ++x) {
        for (std::size_t y = 0; y < acc[x].size(); ++y) {
            if (acc[x][y] > 0.0) {
                out.pmf[{x, y}] = acc[x][y];
                mass += acc[x][y];
            }
        }
    }
    out.error_bound = std::max(0.0, 1.0 - mass);
    return out;
}

double pgf_from_pmf(const std::map<std::uint64_t, double>& pmf, double u) {
    double acc = 0.0;
    for (const auto& [x, p] : pmf) acc += p * std::pow(u, static_cast<double>(x));
    return acc;
}

double pgf_from_pmf(const std::map<std::pair<std::uint64_t, std::uint64_t>, double>& pmf,
                    double u1, double u2) {
    double acc = 0.0;
    for (const auto& [xy, p] : pmf) {
        acc += p * std::pow(u1, static_cast<double>(xy.first)) *
               std::pow(u2, static_cast<double>(xy.second));
    }
    return acc;
}

double covariance_from_pmf(const std::map<std::pair<std::uint64_t, std::uint64_t>, double>& pmf) {
    double ex = 0.0, ey = 0.0, exy = 0.0;
    for (const auto& [xy, p] : pmf) {
        const double x = static_cast<double>(xy.first);
        const double y = static_cast<double>(xy.second);
        ex += p * x;
        ey += p * y;
        exy += p * x * y;
    }
    return exy - ex * ey;
}

}  // namespace inma
