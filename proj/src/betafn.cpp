#include "igpkit/betafn.hpp"

#include <cmath>
#include <limits>

#include "igpkit/errors.hpp"

namespace igp {

namespace {

// Lentz-style continued fraction for the incomplete beta, valid (fast) when
// x < (a+1)/(a+b+2).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 400;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    int m = 1;
    for (; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    if (m > kMaxIter)
        throw ConvergenceError("incomplete beta continued fraction did not converge");
    return h;
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

double beta_cdf(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("beta_cdf: shape parameters must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw ArgumentError("beta_cdf: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double lfront = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    const double front = std::exp(lfront);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double beta_pdf(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("beta_pdf: shape parameters must be > 0");
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b));
}

double beta_inv_cdf(double a, double b, double q) {
    if (!(a > 0.0) || !(b > 0.0))
        throw ArgumentError("beta_inv_cdf: shape parameters must be > 0");
    if (!(q > 0.0 && q < 1.0)) throw ArgumentError("beta_inv_cdf: q outside (0, 1)");

    // Relative-to-q stop so deep-tail quantiles stay accurate in x space,
    // with an absolute floor for central q.
    const double ftol = std::max(1e-15, q * 1e-12);
    double lo = 0.0, hi = 1.0;
    double x = a / (a + b);  // start at the mean
    double f = beta_cdf(a, b, x) - q;

    for (int it = 0; it < 200; ++it) {
        if (std::fabs(f) <= ftol) return x;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        // Newton step when it stays inside the bracket, bisection otherwise
        const double dens = beta_pdf(a, b, x);
        double nx = 0.0;
        bool ok = false;
        if (dens > 0.0 && std::isfinite(dens)) {
            nx = x - f / dens;
            ok = nx > lo && nx < hi;
        }
        if (!ok) nx = 0.5 * (lo + hi);
        if (nx == x || hi - lo < 4.0 * std::numeric_limits<double>::epsilon() * x)
            return x;
        x = nx;
        f = beta_cdf(a, b, x) - q;
    }
    return x;
}

}  // namespace igp
