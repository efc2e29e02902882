#include "shadowsim/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shadowsim {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606;
constexpr int kMaxIter = 400;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Modified Lentz continued fraction for E1(x) with the e^{-x} factor
// stripped, i.e. returns e^x * E1(x).  Valid for x > 1.
double e1_cf_scaled(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// Series for E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!), x <= 1.
double e1_series(double x) {
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= kMaxIter; ++k) {
        term *= -x / k;
        double add = -term / k;
        sum += add;
        if (std::fabs(add) < kEps * std::fabs(sum)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

// Series for P(a, x), x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double expx_e1(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("expx_e1 requires x >= 0");
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return e1_cf_scaled(x);
}

double exp_e1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("exp_e1 requires x > 0");
    if (x <= 1.0) return e1_series(x);
    return std::exp(-x) * e1_cf_scaled(x);
}

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p domain error");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q domain error");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double poisson_cdf(unsigned long n, double mu) {
    if (mu <= 0.0) return 1.0;
    return gamma_q(static_cast<double>(n) + 1.0, mu);
}

// Canonical series Q1(a,b) = sum_k pmf_Pois(k; a^2/2) * P[Pois(b^2/2) <= k].
double marcum_q1(double a, double b) {
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("marcum_q1 domain error");
    if (b == 0.0) return 1.0;
    double x = 0.5 * a * a;
    double y = 0.5 * b * b;
    if (x == 0.0) return std::exp(-y);
    // Far in the right tail every term vanishes; the Chernoff bound
    // exp(-(b-a)^2/2) caps the value below double resolution.
    if (b > a && 0.5 * (b - a) * (b - a) > 745.0) return 0.0;

    double pmf = std::exp(-x);
    double cdf = poisson_cdf(0, y);
    double pmf_y = std::exp(-y);
    double q = pmf * cdf;
    double cum = pmf;
    for (unsigned long k = 1; k < 100000; ++k) {
        pmf *= x / static_cast<double>(k);
        pmf_y *= y / static_cast<double>(k);
        cdf += pmf_y;
        q += pmf * std::min(cdf, 1.0);
        cum += pmf;
        if (1.0 - cum < 1e-15 && pmf < 1e-15) break;
    }
    return std::min(q, 1.0);
}

} // namespace shadowsim
