#pragma once

#include <cstdint>
#include <utility>

#include "inma/model.hpp"

namespace inma {

/// Spatial lag, nonnegative components. The closed forms below cover this
/// quadrant; mixed-sign lags are only reachable through the empirical
/// estimators and the enumeration oracle.
struct LagPair {
    int k = 0;
    int l = 0;
};

struct MomentSummary {
    double mean_x;
    double var_x;
    double beta_dot;
};

/// Mean and variance of one cell: mean_x = mean_eps * beta_dot,
/// var_x = mean_x + (var_eps - mean_eps) * sum of squared coefficients.
MomentSummary marginal_moments(const InmaModel& model);

/// Product of innovation pgfs at 1 + beta_ij * (u - 1) over the order box.
double marginal_pgf(const InmaModel& model, double u);

/// Autocovariance at lag (k, l) >= (0, 0):
///   (var_eps - mean_eps) * sum beta_ij * beta_{i-k,j-l}
///   + mean_eps * sum P(Z^(i,j) = Z^(i-k,j-l) = 1),
/// both sums over the overlap i in [k, q1], j in [l, q2]. Zero (empty sums)
/// beyond the order box.
double acvf(const InmaModel& model, LagPair lag);

/// acvf(lag) / acvf(0, 0). For Poisson innovations this equals the
/// overlap sum of joint success probabilities divided by beta_dot; for
/// other innovations it is the definitional extension.
double acf(const InmaModel& model, LagPair lag);

/// E[u1^{X_{s,t}} u2^{X_{s-k,t-l}}]: five-factor product over the regions
/// of the two trailing order boxes (cells seen only by the first, only by
/// the second, and the shared overlap). Empty products are 1, so lags
/// beyond the box factorize into the two marginal pgfs.
double bivariate_pgf(const InmaModel& model, double u1, double u2, LagPair lag);

/// Bivariate-Poisson closed form exp(mu_X (u1+u2-2)) exp(mu_X rho (u1-1)(u2-1));
/// requires Poisson innovations.
double poisson_bivariate_pgf(const InmaModel& model, double u1, double u2, LagPair lag);

/// (conditional mean, conditional variance) of one cell given the lagged
/// cell equals x; requires Poisson innovations.
std::pair<double, double> poisson_conditional_moments(const InmaModel& model, LagPair lag,
                                                      std::uint64_t x);

/// P(X_{s,t} = X_{s-k,t-l} +- j) = exp(-z) I_j(z) with
/// z = 2 mean_eps beta_dot (1 - rho); requires Poisson innovations.
double poisson_jump_pmf(const InmaModel& model, LagPair lag, unsigned j);

struct OrderProbs {
    double less;
    double equal;
    double greater;
};

/// P(<), P(=), P(>) for the lagged pair; less and greater are equal by
/// symmetry and the triple sums to 1. Requires Poisson innovations.
OrderProbs poisson_order_probs(const InmaModel& model, LagPair lag);

}  // namespace inma
