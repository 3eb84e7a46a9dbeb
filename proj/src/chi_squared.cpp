#include "mog/chi_squared.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mog/error.hpp"

namespace mog {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 100000000;

// log(1 + y) - y without cancellation near 0.
double log1pmx(double y) {
    if (std::fabs(y) >= 0.5) return std::log1p(y) - y;
    double term = y;
    double sum = 0.0;
    for (int n = 2; n < 200; ++n) {
        term *= -y;
        double delta = term / n;
        sum += delta;
        if (std::fabs(delta) < kEps * std::fabs(sum)) break;
    }
    return sum;
}

// lgamma(a) minus its Stirling approximation, for a >= 10.
double stirling_error(double a) {
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    return inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 * (1.0 / 1680 - inv2 / 1188))));
}

// log(x^a e^-x / Γ(a)).
double log_prefactor(double a, double x) {
    if (a < 10.0) return a * std::log(x) - x - std::lgamma(a);
    return a * log1pmx((x - a) / a) + 0.5 * std::log(a / (2.0 * std::numbers::pi)) - stirling_error(a);
}

// Lower series: P(a, x) = x^a e^-x / Γ(a+1) * Σ x^n / ((a+1)...(a+n)).
double lower_series(double a, double x, double log_pre) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term < kEps * sum) break;
    }
    return std::exp(log_pre - std::log(a)) * sum;
}

// Continued fraction for Q(a, x), modified Lentz.
double upper_fraction(double a, double x, double log_pre) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return std::exp(log_pre) * h;
}

} // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw ContractError("regularized_gamma_q requires a > 0");
    if (!(x >= 0.0)) throw ContractError("regularized_gamma_q requires x >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double log_pre = log_prefactor(a, x);
    if (x < a + 1.0) {
        double p = lower_series(a, x, log_pre);
        return p >= 1.0 ? 0.0 : 1.0 - p;
    }
    if (log_pre < -745.0) return 0.0;
    double q = upper_fraction(a, x, log_pre);
    return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

double chi_squared_sf(double x, std::uint64_t dof) {
    if (dof == 0) throw ContractError("chi-squared test with zero degrees of freedom");
    if (!(x >= 0.0)) throw ContractError("chi-squared statistic must be non-negative");
    return regularized_gamma_q(0.5 * static_cast<double>(dof), 0.5 * x);
}

} // namespace mog
