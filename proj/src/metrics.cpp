#include "shadowsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "shadowsim/special.hpp"

namespace shadowsim {

namespace {

constexpr double kLn2 = 0.6931471805599453;

MetricEstimate mean_and_stderr(std::span<const double> v) {
    double n = static_cast<double>(v.size());
    double s1 = 0.0;
    for (double x : v) s1 += x;
    double mean = s1 / n;
    double m2 = 0.0;
    for (double x : v) m2 += (x - mean) * (x - mean);
    double var = n > 1 ? m2 / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n), v.size()};
}

} // namespace

double coverage_rayleigh(double laplace_at_s, double theta, const LinkModel& link,
                         double alpha, double noise) {
    if (!(theta > 0.0)) throw std::invalid_argument("SINR threshold must be positive");
    double s = theta * std::pow(link.d_link, alpha);
    return std::exp(-s * noise) * laplace_at_s;
}

MetricEstimate coverage_rayleigh_mc(std::span<const double> interference, double theta,
                                    const LinkModel& link, double alpha, double noise) {
    double s = theta * std::pow(link.d_link, alpha);
    std::vector<double> v(interference.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = std::exp(-s * (noise + interference[k]));
    return mean_and_stderr(v);
}

RicianCoverage coverage_rician(std::span<const double> interference, double theta, double kappa,
                               const LinkModel& link, double alpha, double noise,
                               int n_max_series) {
    if (kappa < 0.0) throw std::invalid_argument("Rician factor must be nonnegative");
    RicianCoverage out;
    double d_pow = std::pow(link.d_link, alpha);
    double s = (1.0 + kappa) * theta * d_pow;

    // Route (b): average of the Rician power CCDF, P[h > t] =
    // Q1(sqrt(2 kappa), sqrt(2 (1 + kappa) t)) with t = theta d^alpha (N + I).
    std::vector<double> q(interference.size());
    double a = std::sqrt(2.0 * kappa);
    for (std::size_t k = 0; k < q.size(); ++k) {
        double t = theta * d_pow * (noise + interference[k]);
        q[k] = marcum_q1(a, std::sqrt(2.0 * (1.0 + kappa) * t));
    }
    MetricEstimate m = mean_and_stderr(q);
    out.marcum_value = m.value;
    out.marcum_std_error = m.std_error;

    // Route (a): e^-kappa sum_n kappa^n/n! sum_{l<=n} (-1)^l s^l/l! L_J^(l)(s)
    // with derivative estimates E[(-J)^l e^{-sJ}].  The inner alternating sum
    // is regrouped per sample as P[Poisson(sJ) <= n] for numeric stability.
    double series = 0.0;
    for (double I : interference) {
        double sj = s * (noise + I);
        double pmf = std::exp(-sj);
        double cdf = pmf;
        double kpow = std::exp(-kappa);
        double acc = kpow * cdf;
        for (int n = 1; n <= n_max_series; ++n) {
            pmf *= sj / static_cast<double>(n);
            cdf += pmf;
            kpow *= kappa / static_cast<double>(n);
            acc += kpow * std::min(cdf, 1.0);
        }
        series += acc;
    }
    out.series_value = series / static_cast<double>(interference.size());
    out.series_remainder = gamma_p(static_cast<double>(n_max_series) + 1.0, kappa);
    out.series_converged = out.series_remainder < 1e-6;
    return out;
}

double shannon_rate_given_interference(double interference, const LinkModel& link, double alpha,
                                       double noise) {
    double x = (noise + interference) * std::pow(link.d_link, alpha);
    if (x <= 0.0) return std::numeric_limits<double>::infinity();
    return expx_e1(x) / kLn2;
}

MetricEstimate shannon_throughput(std::span<const double> interference, const LinkModel& link,
                                  double alpha, double noise) {
    std::vector<double> v(interference.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = shannon_rate_given_interference(interference[k], link, alpha, noise);
    return mean_and_stderr(v);
}

DelayTail local_delay_tail(const Scenario& sc, double theta, int n_max, std::size_t n_patterns,
                           std::uint64_t seed, int threads) {
    if (n_max < 1) throw std::invalid_argument("local delay horizon must be at least 1");
    sc.validate();
    Scenario rsc = sc;
    rsc.window.r_max = sc.resolved_r_max();

    std::vector<double> p(n_patterns);
    parallel_blocks(n_patterns, 128, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            ShadowedPattern sp = sample_shadowed(rsc, seed, k);
            p[k] = conditional_success_prob(sp, theta, rsc);
        }
    });

    DelayTail out;
    out.tail.assign(n_max, 0.0);
    out.tail_error.assign(n_max, 0.0);
    std::vector<double> sq(n_max, 0.0);
    for (double pk : p) {
        double q = 1.0 - pk;
        double qn = 1.0;
        for (int n = 0; n < n_max; ++n) {
            qn *= q;
            out.tail[n] += qn;
            sq[n] += qn * qn;
        }
    }
    double n = static_cast<double>(n_patterns);
    for (int k = 0; k < n_max; ++k) {
        double mean = out.tail[k] / n;
        double var = n > 1 ? std::max(0.0, (sq[k] - n * mean * mean) / (n - 1.0)) : 0.0;
        out.tail[k] = mean;
        out.tail_error[k] = std::sqrt(var / n);
    }
    out.censored_mass = out.tail[n_max - 1];

    std::vector<double> inv_p(n_patterns);
    double inv_sum = 0.0, inv_max = 0.0;
    for (std::size_t k = 0; k < n_patterns; ++k) {
        inv_p[k] = 1.0 / p[k];
        inv_sum += inv_p[k];
        inv_max = std::max(inv_max, inv_p[k]);
    }
    out.conditional_mean = mean_and_stderr(inv_p);
    out.heavy_tail_warning = inv_max > 0.05 * inv_sum;
    return out;
}

} // namespace shadowsim
