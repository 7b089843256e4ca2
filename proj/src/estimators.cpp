#include "inma/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace inma {

namespace {

constexpr std::uint32_t kTagBootstrap = 0xB007u;

void check_nonempty(const Grid& grid) {
    if (grid.values.empty()) throw std::invalid_argument("grid is empty");
}

void check_lag_range(const Grid& grid, int k, int l) {
    if (std::abs(k) >= grid.n1 || std::abs(l) >= grid.n2) {
        throw std::invalid_argument("lag (" + std::to_string(k) + "," + std::to_string(l) +
                                    ") leaves no pairs in a " + std::to_string(grid.n1) + "x" +
                                    std::to_string(grid.n2) + " window");
    }
}

// Applies fn(focal, lagged) over every window pair at lag (k, l), where the
// lagged cell is (s - k, t - l).
template <typename Fn>
void for_each_pair(const Grid& grid, int k, int l, Fn&& fn) {
    const int s_lo = std::max(1, 1 + k), s_hi = std::min(grid.n1, grid.n1 + k);
    const int t_lo = std::max(1, 1 + l), t_hi = std::min(grid.n2, grid.n2 + l);
    for (int s = s_lo; s <= s_hi; ++s) {
        for (int t = t_lo; t <= t_hi; ++t) {
            fn(grid.at(s, t), grid.at(s - k, t - l));
        }
    }
}

}  // namespace

double sample_mean(const Grid& grid) {
    check_nonempty(grid);
    double acc = 0.0;
    for (std::uint64_t v : grid.values) acc += static_cast<double>(v);
    return acc / static_cast<double>(grid.values.size());
}

double sample_acvf(const Grid& grid, int k, int l) {
    check_nonempty(grid);
    check_lag_range(grid, k, l);
    const double mean = sample_mean(grid);
    double acc = 0.0;
    std::size_t pairs = 0;
    for_each_pair(grid, k, l, [&](std::uint64_t a, std::uint64_t b) {
        acc += (static_cast<double>(a) - mean) * (static_cast<double>(b) - mean);
        ++pairs;
    });
    return acc / static_cast<double>(pairs);
}

double empirical_pgf(const Grid& grid, double u) {
    check_nonempty(grid);
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("empirical pgf needs u in [0, 1]");
    double acc = 0.0;
    for (std::uint64_t v : grid.values) acc += std::pow(u, static_cast<double>(v));
    return acc / static_cast<double>(grid.values.size());
}

double empirical_bivariate_pgf(const Grid& grid, double u1, double u2, int k, int l) {
    check_nonempty(grid);
    check_lag_range(grid, k, l);
    if (!(u1 >= 0.0 && u1 <= 1.0) || !(u2 >= 0.0 && u2 <= 1.0)) {
        throw std::invalid_argument("empirical pgf needs u in [0, 1]");
    }
    double acc = 0.0;
    std::size_t pairs = 0;
    for_each_pair(grid, k, l, [&](std::uint64_t a, std::uint64_t b) {
        acc += std::pow(u1, static_cast<double>(a)) * std::pow(u2, static_cast<double>(b));
        ++pairs;
    });
    return acc / static_cast<double>(pairs);
}

std::map<std::uint64_t, double> marginal_histogram(const Grid& grid) {
    check_nonempty(grid);
    std::map<std::uint64_t, double> hist;
    for (std::uint64_t v : grid.values) hist[v] += 1.0;
    const double n = static_cast<double>(grid.values.size());
    for (auto& [value, freq] : hist) freq /= n;
    return hist;
}

std::map<std::uint64_t, ProfileBin> conditional_mean_profile(const Grid& grid, int k, int l,
                                                             std::size_t min_pairs) {
    check_nonempty(grid);
    check_lag_range(grid, k, l);
    std::map<std::uint64_t, std::pair<double, std::size_t>> sums;
    for_each_pair(grid, k, l, [&](std::uint64_t a, std::uint64_t b) {
        auto& bin = sums[b];
        bin.first += static_cast<double>(a);
        bin.second += 1;
    });
    std::map<std::uint64_t, ProfileBin> profile;
    for (const auto& [x, bin] : sums) {
        profile[x] = {bin.first / static_cast<double>(bin.second), bin.second,
                      bin.second >= min_pairs};
    }
    return profile;
}

PairRegression lagged_pair_regression(const Grid& grid, int k, int l) {
    check_nonempty(grid);
    check_lag_range(grid, k, l);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    std::size_t n = 0;
    for_each_pair(grid, k, l, [&](std::uint64_t a, std::uint64_t b) {
        const double y = static_cast<double>(a);
        const double x = static_cast<double>(b);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++n;
    });
    const double nd = static_cast<double>(n);
    const double mx = sx / nd, my = sy / nd;
    const double cxx = sxx - nd * mx * mx;
    const double cxy = sxy - nd * mx * my;
    const double cyy = syy - nd * my * my;
    if (!(cxx > 0.0) || n < 3) {
        throw std::domain_error("lagged regression needs variation in the lagged cell");
    }
    PairRegression reg;
    reg.pairs = n;
    reg.slope = cxy / cxx;
    reg.intercept = my - reg.slope * mx;
    const double resid_var = std::max(0.0, (cyy - reg.slope * cxy) / (nd - 2.0));
    reg.slope_se = std::sqrt(resid_var / cxx);
    reg.intercept_se = std::sqrt(resid_var * (1.0 / nd + mx * mx / cxx));
    return reg;
}

std::vector<double> block_bootstrap_se(
    const Grid& grid, int block_side, int resamples, std::uint64_t seed,
    const std::function<std::vector<double>(const Grid&)>& stats) {
    check_nonempty(grid);
    const int b = std::max(1, std::min(block_side, std::min(grid.n1, grid.n2)));
    if (resamples < 2) throw std::invalid_argument("bootstrap needs at least 2 resamples");

    const int corners1 = grid.n1 - b + 1;
    const int corners2 = grid.n2 - b + 1;
    const int tiles1 = (grid.n1 + b - 1) / b;
    const int tiles2 = (grid.n2 + b - 1) / b;

    Grid work = grid;
    std::vector<std::vector<double>> samples;
    samples.reserve(static_cast<std::size_t>(resamples));

    for (int r = 0; r < resamples; ++r) {
        for (int bi = 0; bi < tiles1; ++bi) {
            for (int bj = 0; bj < tiles2; ++bj) {
                rng::SiteStream stream(seed, r, bi * tiles2 + bj, kTagBootstrap);
                const int src_s =
                    1 + static_cast<int>(stream.next_double() * static_cast<double>(corners1));
                const int src_t =
                    1 + static_cast<int>(stream.next_double() * static_cast<double>(corners2));
                const int dst_s0 = 1 + bi * b;
                const int dst_t0 = 1 + bj * b;
                const int height = std::min(b, grid.n1 - dst_s0 + 1);
                const int width = std::min(b, grid.n2 - dst_t0 + 1);
                for (int ds = 0; ds < height; ++ds) {
                    const std::size_t dst_row =
                        static_cast<std::size_t>(dst_s0 + ds - 1) * static_cast<std::size_t>(grid.n2);
                    const std::size_t src_row =
                        static_cast<std::size_t>(src_s + ds - 1) * static_cast<std::size_t>(grid.n2);
                    for (int dt = 0; dt < width; ++dt) {
                        work.values[dst_row + static_cast<std::size_t>(dst_t0 + dt - 1)] =
                            grid.values[src_row + static_cast<std::size_t>(src_t + dt - 1)];
                    }
                }
            }
        }
        samples.push_back(stats(work));
    }

    const std::size_t dims = samples.front().size();
    std::vector<double> se(dims, 0.0);
    for (std::size_t d = 0; d < dims; ++d) {
        double mean = 0.0;
        for (const auto& s : samples) mean += s[d];
        mean /= static_cast<double>(resamples);
        double var = 0.0;
        for (const auto& s : samples) var += (s[d] - mean) * (s[d] - mean);
        se[d] = std::sqrt(var / static_cast<double>(resamples - 1));
    }
    return se;
}

double effective_mean_se(const InmaModel& model, int n1, int n2) {
    const double n = static_cast<double>(n1) * static_cast<double>(n2);
    const int q1 = model.beta.q1();
    const int q2 = model.beta.q2();
    double total = acvf(model, {0, 0});
    for (int k = 0; k <= q1; ++k) {
        for (int l = 0; l <= q2; ++l) {
            if (k == 0 && l == 0) continue;
            const double g = acvf(model, {k, l});
            total += 2.0 * g;
            if (k >= 1 && l >= 1) total += 2.0 * g;  // mirrored proxy for lag (k, -l)
        }
    }
    if (!(total > 0.0)) total = std::max(acvf(model, {0, 0}), 1e-300);
    return std::sqrt(total / n);
}

std::string VerificationReport::to_json() const {
    nlohmann::json out;
    out["pass"] = pass;
    out["metadata"] = {{"model_hash", model_hash}, {"seed", seed},           {"n1", n1},
                       {"n2", n2},                 {"replications", replications},
                       {"z_threshold", z_threshold}};
    out["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        out["checks"].push_back({{"check", c.name},
                                 {"analytic", c.analytic},
                                 {"empirical", c.empirical},
                                 {"se", c.se},
                                 {"z", c.z},
                                 {"pass", c.pass}});
    }
    return out.dump(2);
}

void VerificationReport::print_table(std::ostream& out) const {
    out << std::left << std::setw(34) << "check" << std::right << std::setw(14) << "analytic"
        << std::setw(14) << "empirical" << std::setw(12) << "se" << std::setw(9) << "z"
        << "  result\n";
    for (const auto& c : checks) {
        out << std::left << std::setw(34) << c.name << std::right << std::fixed
            << std::setprecision(6) << std::setw(14) << c.analytic << std::setw(14) << c.empirical
            << std::setw(12) << c.se << std::setprecision(2) << std::setw(9) << c.z
            << (c.pass ? "  pass" : "  FAIL") << "\n";
        out.unsetf(std::ios::fixed);
    }
    out << (pass ? "all checks passed" : "SOME CHECKS FAILED") << "\n";
}

namespace {

struct StatPlan {
    // Index layout of the per-grid statistic vector used for the shared
    // bootstrap pass.
    std::vector<std::string> names;
    std::function<std::vector<double>(const Grid&)> eval;
};

double poisson_mean_x(const InmaModel& model) {
    return std::get<Poisson>(model.innovation).mu * model.beta.beta_dot();
}

double histogram_tv_distance(const Grid& grid, const InmaModel& model) {
    const double mu_x = poisson_mean_x(model);
    const auto hist = marginal_histogram(grid);
    const std::uint64_t cap =
        std::max<std::uint64_t>(hist.empty() ? 0 : hist.rbegin()->first,
                                static_cast<std::uint64_t>(mu_x + 12.0 * std::sqrt(mu_x) + 30.0));
    double tv = 0.0;
    for (std::uint64_t x = 0; x <= cap; ++x) {
        const auto it = hist.find(x);
        const double observed = it == hist.end() ? 0.0 : it->second;
        const double pmf = innovation_pmf(Poisson{mu_x}, x);
        tv += std::fabs(observed - pmf);
    }
    return tv / 2.0;
}

}  // namespace

VerificationReport verify(const InmaModel& model, int n1, int n2, std::uint64_t seed,
                          const VerifyOptions& options) {
    require_valid(model);
    const int reps = std::max(1, options.replications);

    VerificationReport report;
    report.model_hash = model_hash(model);
    report.seed = seed;
    report.n1 = n1;
    report.n2 = n2;
    report.replications = reps;
    report.z_threshold = options.z_threshold;

    SimulateOptions sim_options;
    sim_options.workers = options.workers;
    std::vector<Grid> grids;
    grids.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        grids.push_back(simulate_grid(model, n1, n2, seed + static_cast<std::uint64_t>(r),
                                      sim_options));
    }

    const MomentSummary mm = marginal_moments(model);
    const bool is_poisson = std::holds_alternative<Poisson>(model.innovation);
    const int q1 = model.beta.q1();
    const int q2 = model.beta.q2();
    const std::pair<int, int> jump_lag = q1 >= 1 ? std::pair{1, 0} : std::pair{0, 1};

    // One statistic vector per grid: everything that needs a bootstrap SE.
    StatPlan plan;
    std::vector<double> analytic;
    std::vector<std::function<double(const Grid&)>> stat_fns;
    const auto add_stat = [&](std::string name, double target,
                              std::function<double(const Grid&)> fn) {
        plan.names.push_back(std::move(name));
        analytic.push_back(target);
        stat_fns.push_back(std::move(fn));
    };

    if (options.check_moments) {
        add_stat("variance", mm.var_x, [](const Grid& g) { return sample_acvf(g, 0, 0); });
    }
    if (options.check_acf) {
        for (int k = 0; k <= q1 + 1; ++k) {
            for (int l = 0; l <= q2 + 1; ++l) {
                if (k == 0 && l == 0) continue;
                add_stat("acf(" + std::to_string(k) + "," + std::to_string(l) + ")",
                         acf(model, {k, l}), [k, l](const Grid& g) {
                             return sample_acvf(g, k, l) / sample_acvf(g, 0, 0);
                         });
            }
        }
    }
    if (options.check_pgf) {
        for (double u : options.u_grid) {
            add_stat("pgf(" + std::to_string(u) + ")", marginal_pgf(model, u),
                     [u](const Grid& g) { return empirical_pgf(g, u); });
        }
    }
    if (options.check_bivariate) {
        for (const auto& [u1, u2] : options.bivariate_points) {
            for (const auto& [k, l] : {std::pair{1, 0}, std::pair{0, 1}}) {
                if (k > q1 && l > q2) continue;
                std::ostringstream name;
                name << "bivariate_pgf(" << u1 << "," << u2 << ";" << k << "," << l << ")";
                add_stat(name.str(), bivariate_pgf(model, u1, u2, {k, l}),
                         [u1 = u1, u2 = u2, k = k, l = l](const Grid& g) {
                             return empirical_bivariate_pgf(g, u1, u2, k, l);
                         });
            }
        }
    }
    if (options.check_poisson_extras && is_poisson) {
        const auto [jk, jl] = jump_lag;
        for (unsigned j = 0; j <= 3; ++j) {
            const double one_sided = poisson_jump_pmf(model, {jk, jl}, j);
            const double target = j == 0 ? one_sided : 2.0 * one_sided;
            add_stat("jump_pmf(" + std::to_string(j) + ")", target, [jk, jl, j](const Grid& g) {
                std::size_t hits = 0, pairs = 0;
                for (int s = std::max(1, 1 + jk); s <= g.n1; ++s) {
                    for (int t = std::max(1, 1 + jl); t <= g.n2; ++t) {
                        const auto a = g.at(s, t);
                        const auto b = g.at(s - jk, t - jl);
                        const std::uint64_t d = a > b ? a - b : b - a;
                        hits += d == j ? 1 : 0;
                        ++pairs;
                    }
                }
                return static_cast<double>(hits) / static_cast<double>(pairs);
            });
        }
        const OrderProbs probs = poisson_order_probs(model, {jk, jl});
        add_stat("order_prob(less)", probs.less, [jk, jl](const Grid& g) {
            std::size_t hits = 0, pairs = 0;
            for (int s = std::max(1, 1 + jk); s <= g.n1; ++s) {
                for (int t = std::max(1, 1 + jl); t <= g.n2; ++t) {
                    hits += g.at(s, t) < g.at(s - jk, t - jl) ? 1 : 0;
                    ++pairs;
                }
            }
            return static_cast<double>(hits) / static_cast<double>(pairs);
        });
        add_stat("order_prob(greater)", probs.greater, [jk, jl](const Grid& g) {
            std::size_t hits = 0, pairs = 0;
            for (int s = std::max(1, 1 + jk); s <= g.n1; ++s) {
                for (int t = std::max(1, 1 + jl); t <= g.n2; ++t) {
                    hits += g.at(s, t) > g.at(s - jk, t - jl) ? 1 : 0;
                    ++pairs;
                }
            }
            return static_cast<double>(hits) / static_cast<double>(pairs);
        });
    }

    plan.eval = [&stat_fns](const Grid& g) {
        std::vector<double> out;
        out.reserve(stat_fns.size());
        for (const auto& fn : stat_fns) out.push_back(fn(g));
        return out;
    };

    const auto add_check = [&](const std::string& name, double target, double empirical,
                               double se) {
        CheckRecord rec;
        rec.name = name;
        rec.analytic = target;
        rec.empirical = empirical;
        rec.se = se;
        rec.z = se > 0.0 ? (empirical - target) / se : (empirical == target ? 0.0 : 1e18);
        rec.pass = std::fabs(rec.z) <= options.z_threshold;
        report.checks.push_back(rec);
        report.pass = report.pass && rec.pass;
    };

    // Mean first: its SE comes from the analytic dependence structure.
    if (options.check_moments) {
        double mean_emp = 0.0;
        for (const auto& g : grids) mean_emp += sample_mean(g);
        mean_emp /= static_cast<double>(reps);
        const double se = effective_mean_se(model, n1, n2) / std::sqrt(static_cast<double>(reps));
        add_check("mean", mm.mean_x, mean_emp, se);
    }

    if (!plan.names.empty()) {
        const int block = std::max(model.beta.q1(), model.beta.q2()) + 1;
        const auto ses =
            block_bootstrap_se(grids.front(), block, options.bootstrap_resamples, seed, plan.eval);
        std::vector<double> means(plan.names.size(), 0.0);
        for (const auto& g : grids) {
            const auto vals = plan.eval(g);
            for (std::size_t d = 0; d < vals.size(); ++d) means[d] += vals[d];
        }
        for (std::size_t d = 0; d < plan.names.size(); ++d) {
            add_check(plan.names[d], analytic[d], means[d] / static_cast<double>(reps),
                      ses[d] / std::sqrt(static_cast<double>(reps)));
        }
    }

    if (options.check_histogram && is_poisson) {
        double tv = 0.0;
        for (const auto& g : grids) tv += histogram_tv_distance(g, model);
        tv /= static_cast<double>(reps);
        add_check("pmf_tv_distance", 0.0, tv, options.tv_threshold / options.z_threshold);
    }

    return report;
}

}  // namespace inma
