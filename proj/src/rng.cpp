#include "shadowsim/rng.hpp"

#include <array>

namespace shadowsim {

namespace {

// log(k!) for k < 10, used by the PTRS sampler.
constexpr std::array<double, 10> kLogFact = {
    0.0, 0.0, 0.6931471805599453, 1.791759469228055, 3.1780538303479458,
    4.787491742782046, 6.579251212010101, 8.525161361065415,
    10.60460290274525, 12.801827480081469};

double log_factorial(unsigned long k) {
    if (k < kLogFact.size()) return kLogFact[k];
    return std::lgamma(static_cast<double>(k) + 1.0);
}

} // namespace

// Sequential inversion for small means, Hoermann's PTRS transformed
// rejection for large ones.  Both paths consume only uniform() draws.
unsigned long Rng::poisson(double mu) {
    if (mu <= 0.0) return 0;
    if (mu < 30.0) {
        double p = std::exp(-mu);
        double cum = p;
        double u = uniform();
        unsigned long k = 0;
        while (u > cum) {
            ++k;
            p *= mu / static_cast<double>(k);
            cum += p;
            if (p < 1e-320) break;
        }
        return k;
    }
    // PTRS (W. Hoermann, "The transformed rejection method for generating
    // Poisson random variables", 1993).
    const double b = 0.931 + 2.53 * std::sqrt(mu);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mu);
    for (;;) {
        double u = uniform() - 0.5;
        double v = uniform();
        double us = 0.5 - std::fabs(u);
        double k = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<unsigned long>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mu - mu - log_factorial(static_cast<unsigned long>(k)))
            return static_cast<unsigned long>(k);
    }
}

} // namespace shadowsim
