#ifndef SHADOWSIM_METRICS_HPP
#define SHADOWSIM_METRICS_HPP

#include <optional>
#include <span>

#include "shadowsim/simulate.hpp"

namespace shadowsim {

// Serving-link model; the serving station sits outside the interferer
// process at distance d_link with unit shadow.  rician_kappa empty means
// Rayleigh fading.
struct LinkModel {
    double d_link = 0.5;
    std::optional<double> rician_kappa;
};

// P[SINR > theta] under Rayleigh serving fading, from a Laplace transform
// value at s = theta * d_link^alpha.
double coverage_rayleigh(double laplace_at_s, double theta, const LinkModel& link,
                         double alpha, double noise);

// Same metric from interference samples (the empirical transform).
MetricEstimate coverage_rayleigh_mc(std::span<const double> interference, double theta,
                                    const LinkModel& link, double alpha, double noise);

struct RicianCoverage {
    double series_value = 0.0;       // route (a): derivative series of the transform
    double series_remainder = 0.0;   // bound on the truncated outer sum
    bool series_converged = true;
    double marcum_value = 0.0;       // route (b): Marcum-Q CCDF average (authoritative)
    double marcum_std_error = 0.0;
};

// Dual-route Rician coverage at threshold theta with factor kappa.  Route (b)
// averages the Marcum-Q power CCDF over samples; route (a) evaluates the
// derivative series with d^l/ds^l L(s) estimated as E[(-J)^l e^{-sJ}],
// J = noise + I, at s = (1 + kappa) theta d_link^alpha.
RicianCoverage coverage_rician(std::span<const double> interference, double theta, double kappa,
                               const LinkModel& link, double alpha, double noise,
                               int n_max_series = 40);

// Mean adaptive-coding rate E[log2(1 + SINR)] in bits/s/Hz; the serving
// Rayleigh fading is integrated out in closed form per sample.
MetricEstimate shannon_throughput(std::span<const double> interference, const LinkModel& link,
                                  double alpha, double noise);

double shannon_rate_given_interference(double interference, const LinkModel& link, double alpha,
                                       double noise);

struct DelayTail {
    std::vector<double> tail;        // P[L > n] for n = 1..n_max
    std::vector<double> tail_error;  // stderr per entry
    double censored_mass = 0.0;      // P[L > n_max]
    MetricEstimate conditional_mean; // E[1 / p] over patterns
    bool heavy_tail_warning = false;
};

DelayTail local_delay_tail(const Scenario& sc, double theta, int n_max, std::size_t n_patterns,
                           std::uint64_t seed, int threads = 0);

} // namespace shadowsim

#endif
