#include "inma/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace inma {

namespace {

void check_lag(LagPair lag) {
    if (lag.k < 0 || lag.l < 0) {
        throw std::invalid_argument("analytic lag components must be nonnegative; use the "
                                    "empirical estimators for mixed-sign lags");
    }
}

void check_u(double u) {
    if (!(u >= 0.0 && u <= 1.0 + kPgfSlack)) {
        throw std::invalid_argument("pgf argument outside [0, 1 + 1e-3]");
    }
}

double overlap_coeff_sum(const BetaMatrix& beta, LagPair lag) {
    double s = 0.0;
    for (int i = lag.k; i <= beta.q1(); ++i) {
        for (int j = lag.l; j <= beta.q2(); ++j) {
            s += beta.at(i, j) * beta.at(i - lag.k, j - lag.l);
        }
    }
    return s;
}

double overlap_joint_sum(const BetaMatrix& beta, CrossDependence crossdep, LagPair lag) {
    double s = 0.0;
    for (int i = lag.k; i <= beta.q1(); ++i) {
        for (int j = lag.l; j <= beta.q2(); ++j) {
            s += joint_success_prob(beta, crossdep, {i, j}, {i - lag.k, j - lag.l});
        }
    }
    return s;
}

const Poisson& require_poisson(const InmaModel& model, const char* what) {
    if (const auto* p = std::get_if<Poisson>(&model.innovation)) return *p;
    throw std::invalid_argument(std::string(what) + " requires Poisson innovations");
}

// rho via the Poisson-case closed form: overlap joint-probability sum / beta_dot.
double poisson_rho(const InmaModel& model, LagPair lag) {
    if (lag.k == 0 && lag.l == 0) return 1.0;
    return overlap_joint_sum(model.beta, model.crossdep, lag) / model.beta.beta_dot();
}

}  // namespace

MomentSummary marginal_moments(const InmaModel& model) {
    require_valid(model);
    const Moments eps = innovation_moments(model.innovation);
    const double mean_x = eps.mean * model.beta.beta_dot();
    const double var_x = mean_x + (eps.variance - eps.mean) * model.beta.sum_of_squares();
    return {mean_x, var_x, model.beta.beta_dot()};
}

double marginal_pgf(const InmaModel& model, double u) {
    require_valid(model);
    check_u(u);
    double prod = 1.0;
    for (double b : model.beta.flat()) {
        prod *= innovation_pgf(model.innovation, 1.0 + b * (u - 1.0));
    }
    return prod;
}

double acvf(const InmaModel& model, LagPair lag) {
    require_valid(model);
    check_lag(lag);
    if (lag.k > model.beta.q1() || lag.l > model.beta.q2()) return 0.0;
    const Moments eps = innovation_moments(model.innovation);
    return (eps.variance - eps.mean) * overlap_coeff_sum(model.beta, lag) +
           eps.mean * overlap_joint_sum(model.beta, model.crossdep, lag);
}

double acf(const InmaModel& model, LagPair lag) {
    const double var = acvf(model, {0, 0});
    if (!(var > 0.0)) {
        throw std::domain_error("autocorrelation undefined: the field has zero variance");
    }
    return acvf(model, lag) / var;
}

double bivariate_pgf(const InmaModel& model, double u1, double u2, LagPair lag) {
    require_valid(model);
    check_lag(lag);
    check_u(u1);
    check_u(u2);

    const BetaMatrix& beta = model.beta;
    const int q1 = beta.q1();
    const int q2 = beta.q2();
    const int k = lag.k;
    const int l = lag.l;
    const auto f = [&](double arg) { return innovation_pgf(model.innovation, arg); };

    double prod = 1.0;
    // Innovations seen only by the first cell.
    for (int i = 0; i <= k - 1; ++i) {
        for (int j = 0; j <= q2; ++j) {
            prod *= f(1.0 + beta.at_or_zero(i, j) * (u1 - 1.0));
        }
    }
    for (int i = k; i <= q1; ++i) {
        for (int j = 0; j <= l - 1; ++j) {
            prod *= f(1.0 + beta.at_or_zero(i, j) * (u1 - 1.0));
        }
    }
    // Innovations seen only by the lagged cell.
    for (int i = q1 + 1; i <= q1 + k; ++i) {
        for (int j = l; j <= q2 + l; ++j) {
            prod *= f(1.0 + beta.at_or_zero(i - k, j - l) * (u2 - 1.0));
        }
    }
    for (int i = k; i <= q1; ++i) {
        for (int j = q2 + 1; j <= q2 + l; ++j) {
            prod *= f(1.0 + beta.at_or_zero(i - k, j - l) * (u2 - 1.0));
        }
    }
    // Shared innovations: both thinnings apply, coupled by the joint
    // success probability of the two counting-series components.
    for (int i = k; i <= q1; ++i) {
        for (int j = l; j <= q2; ++j) {
            const double joint =
                joint_success_prob(beta, model.crossdep, {i, j}, {i - k, j - l});
            prod *= f(1.0 + beta.at(i, j) * (u1 - 1.0) + beta.at(i - k, j - l) * (u2 - 1.0) +
                      joint * (u1 - 1.0) * (u2 - 1.0));
        }
    }
    return prod;
}

double poisson_bivariate_pgf(const InmaModel& model, double u1, double u2, LagPair lag) {
    require_valid(model);
    check_lag(lag);
    check_u(u1);
    check_u(u2);
    const Poisson& p = require_poisson(model, "poisson_bivariate_pgf");
    const double mu_x = p.mu * model.beta.beta_dot();
    const double rho = poisson_rho(model, lag);
    return std::exp(mu_x * (u1 + u2 - 2.0)) * std::exp(mu_x * rho * (u1 - 1.0) * (u2 - 1.0));
}

std::pair<double, double> poisson_conditional_moments(const InmaModel& model, LagPair lag,
                                                      std::uint64_t x) {
    require_valid(model);
    check_lag(lag);
    const Poisson& p = require_poisson(model, "poisson_conditional_moments");
    const double mu_x = p.mu * model.beta.beta_dot();
    const double rho = poisson_rho(model, lag);
    const double xd = static_cast<double>(x);
    const double cond_mean = mu_x * (1.0 - rho) + rho * xd;
    const double cond_var = (1.0 - rho) * (mu_x + rho * xd);
    return {cond_mean, cond_var};
}

double poisson_jump_pmf(const InmaModel& model, LagPair lag, unsigned j) {
    require_valid(model);
    check_lag(lag);
    const Poisson& p = require_poisson(model, "poisson_jump_pmf");
    const double z = 2.0 * p.mu * model.beta.beta_dot() * (1.0 - poisson_rho(model, lag));
    if (z == 0.0) return j == 0 ? 1.0 : 0.0;
    return std::exp(-z) * bessel_i(j, z);
}

OrderProbs poisson_order_probs(const InmaModel& model, LagPair lag) {
    const double equal = poisson_jump_pmf(model, lag, 0);
    const double tail = (1.0 - equal) / 2.0;
    return {tail, equal, tail};
}

}  // namespace inma
