#include "inma/samplers.hpp"

#include <cmath>
#include <cstdlib>

namespace inma::samplers {

namespace {

std::uint64_t poisson_inversion(double mu, rng::SiteStream& stream) {
    const double u = stream.next_double();
    double p = std::exp(-mu);
    double cum = p;
    std::uint64_t k = 0;
    while (u > cum) {
        ++k;
        p *= mu / static_cast<double>(k);
        cum += p;
        if (p == 0.0) break;
    }
    return k;
}

// Hoermann's transformed rejection with squeeze (PTRS), valid for mu >= 10.
std::uint64_t poisson_ptrs(double mu, rng::SiteStream& stream) {
    const double slam = std::sqrt(mu);
    const double loglam = std::log(mu);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = stream.next_double() - 0.5;
        const double v = stream.next_double();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double k = kf;
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mu + k * loglam - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

// One uniform per draw; restarts if the CDF walk overruns its bound.
std::uint64_t binomial_inversion(std::uint64_t n, double p, rng::SiteStream& stream) {
    const double q = 1.0 - p;
    const double s = p / q;
    const double np = static_cast<double>(n) * p;
    const double qn = std::exp(static_cast<double>(n) * std::log(q));
    const double bound = std::min(static_cast<double>(n), np + 10.0 * std::sqrt(np * q + 1.0));

    for (;;) {
        double u = stream.next_double();
        double px = qn;
        std::uint64_t x = 0;
        while (u > px) {
            if (static_cast<double>(x) > bound) {
                x = 0;
                goto restart;
            }
            u -= px;
            ++x;
            px *= (static_cast<double>(n - x + 1) / static_cast<double>(x)) * s;
        }
        return x;
    restart:;
    }
}

// Kachitvichyanukul & Schmeiser's BTPE, valid for n * min(p, 1-p) >= 30.
// p must already be reflected to p <= 1/2 by the caller.
std::uint64_t binomial_btpe(std::uint64_t n, double p, rng::SiteStream& stream) {
    const double r = p;
    const double q = 1.0 - r;
    const double nd = static_cast<double>(n);
    const double fm = nd * r + r;
    const double m = std::floor(fm);
    const double nrq = nd * r * q;
    const double p1 = std::floor(2.195 * std::sqrt(nrq) - 4.6 * q) + 0.5;
    const double xm = m + 0.5;
    const double xl = xm - p1;
    const double xr = xm + p1;
    const double c = 0.134 + 20.5 / (15.3 + m);
    double aa = (fm - xl) / (fm - xl * r);
    const double laml = aa * (1.0 + aa / 2.0);
    aa = (xr - fm) / (xr * q);
    const double lamr = aa * (1.0 + aa / 2.0);
    const double p2 = p1 * (1.0 + 2.0 * c);
    const double p3 = p2 + c / laml;
    const double p4 = p3 + c / lamr;

    for (;;) {
        const double u = stream.next_double() * p4;
        double v = stream.next_double();
        double y;

        if (u <= p1) {
            // Triangular central region: accept immediately.
            y = std::floor(xm - p1 * v + u);
            return static_cast<std::uint64_t>(y);
        }
        if (u <= p2) {
            // Parallelogram region.
            const double x = xl + (u - p1) / c;
            v = v * c + 1.0 - std::fabs(m - x + 0.5) / p1;
            if (v > 1.0) continue;
            y = std::floor(x);
        } else if (u <= p3) {
            // Left exponential tail.
            y = std::floor(xl + std::log(v) / laml);
            if (y < 0.0 || v == 0.0) continue;
            v = v * (u - p2) * laml;
        } else {
            // Right exponential tail.
            y = std::floor(xr - std::log(v) / lamr);
            if (y > nd || v == 0.0) continue;
            v = v * (u - p3) * lamr;
        }

        const double k = std::fabs(y - m);
        if (k <= 20.0 || k >= nrq / 2.0 - 1.0) {
            // Evaluate the pmf ratio f(y)/f(m) by recursion.
            const double s = r / q;
            const double a = s * (nd + 1.0);
            double f = 1.0;
            if (m < y) {
                for (double i = m + 1.0; i <= y; i += 1.0) f *= (a / i - s);
            } else if (m > y) {
                for (double i = y + 1.0; i <= m; i += 1.0) f /= (a / i - s);
            }
            if (v <= f) return static_cast<std::uint64_t>(y);
            continue;
        }

        // Squeeze on log f(y)/f(m), then the full Stirling-corrected test.
        const double rho =
            (k / nrq) * ((k * (k / 3.0 + 0.625) + 1.0 / 6.0) / nrq + 0.5);
        const double t = -k * k / (2.0 * nrq);
        const double big_a = std::log(v);
        if (big_a < t - rho) return static_cast<std::uint64_t>(y);
        if (big_a > t + rho) continue;

        const double x1 = y + 1.0;
        const double f1 = m + 1.0;
        const double z = nd + 1.0 - m;
        const double w = nd - y + 1.0;
        const double x2 = x1 * x1;
        const double f2 = f1 * f1;
        const double z2 = z * z;
        const double w2 = w * w;
        const double stirling =
            xm * std::log(f1 / x1) + (nd - m + 0.5) * std::log(z / w) +
            (y - m) * std::log(w * r / (x1 * q)) +
            (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / f2) / f2) / f2) / f2) / f1 / 166320.0 +
            (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / z2) / z2) / z2) / z2) / z / 166320.0 +
            (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / x2) / x2) / x2) / x2) / x1 / 166320.0 +
            (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / w2) / w2) / w2) / w2) / w / 166320.0;
        if (big_a <= stirling) return static_cast<std::uint64_t>(y);
    }
}

}  // namespace

std::uint64_t poisson(double mu, rng::SiteStream& stream) {
    if (mu <= 0.0) return 0;
    if (mu <= 10.0) return poisson_inversion(mu, stream);
    return poisson_ptrs(mu, stream);
}

std::uint64_t binomial(std::uint64_t n, double p, rng::SiteStream& stream) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const bool flipped = p > 0.5;
    const double r = flipped ? 1.0 - p : p;
    const std::uint64_t x = (static_cast<double>(n) * r <= 30.0)
                                ? binomial_inversion(n, r, stream)
                                : binomial_btpe(n, r, stream);
    return flipped ? n - x : x;
}

double standard_normal(rng::SiteStream& stream) {
    for (;;) {
        const double x = 2.0 * stream.next_double() - 1.0;
        const double y = 2.0 * stream.next_double() - 1.0;
        const double s = x * x + y * y;
        if (s >= 1.0 || s == 0.0) continue;
        return x * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double gamma(double shape, rng::SiteStream& stream) {
    if (shape < 1.0) {
        const double u = 1.0 - stream.next_double();  // in (0, 1]
        return gamma(shape + 1.0, stream) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = standard_normal(stream);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = stream.next_double();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::uint64_t negative_binomial(double n, double pi, rng::SiteStream& stream) {
    const double lambda = gamma(n, stream) * (1.0 - pi) / pi;
    return poisson(lambda, stream);
}

}  // namespace inma::samplers
