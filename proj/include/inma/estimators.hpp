#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "inma/analytics.hpp"
#include "inma/simulator.hpp"

namespace inma {

double sample_mean(const Grid& grid);

/// Autocovariance over all window pairs at lag (k, l), any sign; centered on
/// the grand mean and divided by the number of contributing pairs, so
/// sample_acvf(k, l) == sample_acvf(-k, -l) exactly.
double sample_acvf(const Grid& grid, int k, int l);

/// Mean of u^X over all cells.
double empirical_pgf(const Grid& grid, double u);

/// Mean of u1^{X_{s,t}} u2^{X_{s-k,t-l}} over the pairs whose lagged cell
/// stays inside the window.
double empirical_bivariate_pgf(const Grid& grid, double u1, double u2, int k, int l);

/// Normalized histogram of cell values; frequencies sum to 1.
std::map<std::uint64_t, double> marginal_histogram(const Grid& grid);

struct ProfileBin {
    double mean = 0.0;
    std::size_t pairs = 0;
    bool reliable = false;  // pairs >= the configured minimum
};

/// For each value x observed at the lagged cell, the average of the
/// focal cell over all pairs with that lagged value.
std::map<std::uint64_t, ProfileBin> conditional_mean_profile(const Grid& grid, int k, int l,
                                                             std::size_t min_pairs = 50);

struct PairRegression {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    std::size_t pairs = 0;
};

/// Least squares of the focal cell on the lagged cell over all window
/// pairs (equivalently: pair-count-weighted least squares on the
/// conditional mean profile).
PairRegression lagged_pair_regression(const Grid& grid, int k, int l);

/// Standard errors of grid statistics by moving-block bootstrap: the window
/// is tiled with block_side x block_side patches copied from uniformly drawn
/// positions of the original grid, the statistics are recomputed on each
/// resampled grid, and the spread across resamples is reported. One shared
/// set of resamples serves all statistics.
std::vector<double> block_bootstrap_se(
    const Grid& grid, int block_side, int resamples, std::uint64_t seed,
    const std::function<std::vector<double>(const Grid&)>& stats);

/// Standard error of the grid mean accounting for spatial dependence by
/// summing the analytic autocovariances over the dependence box. The
/// quadrant with mixed-sign lags has no closed form and is approximated by
/// its mirrored lag (exact for symmetric coefficient boxes).
double effective_mean_se(const InmaModel& model, int n1, int n2);

struct CheckRecord {
    std::string name;
    double analytic = 0.0;
    double empirical = 0.0;
    double se = 0.0;
    double z = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::vector<CheckRecord> checks;
    bool pass = true;
    std::string model_hash;
    std::uint64_t seed = 0;
    int n1 = 0;
    int n2 = 0;
    int replications = 1;
    double z_threshold = 4.0;

    std::string to_json() const;
    void print_table(std::ostream& out) const;
};

struct VerifyOptions {
    double z_threshold = 4.0;
    int replications = 1;
    int workers = 1;
    int bootstrap_resamples = 300;
    double tv_threshold = 0.01;
    std::size_t min_profile_pairs = 50;
    std::vector<double> u_grid = {0.25, 0.5, 0.75};
    std::vector<std::pair<double, double>> bivariate_points = {{0.5, 0.5}, {0.25, 0.75}};

    bool check_moments = true;
    bool check_histogram = true;
    bool check_acf = true;
    bool check_pgf = true;
    bool check_bivariate = true;
    bool check_poisson_extras = true;
};

/// Simulates (replications grids, seeds seed, seed+1, ...) and compares
/// every selected empirical statistic against its closed form, reporting
/// one z-scored record per check. A check passes iff |z| <= z_threshold;
/// threshold-style checks (total variation distance) are encoded with
/// se = threshold / z_threshold so the same rule applies.
VerificationReport verify(const InmaModel& model, int n1, int n2, std::uint64_t seed,
                          const VerifyOptions& options = {});

}  // namespace inma
