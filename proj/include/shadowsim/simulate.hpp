#ifndef SHADOWSIM_SIMULATE_HPP
#define SHADOWSIM_SIMULATE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "shadowsim/analytic.hpp"
#include "shadowsim/shadowing.hpp"

namespace shadowsim {

struct PppDeployment {
    double lambda = 1.0;
};

struct MaternDeployment {
    double lambda_m = 1.0;
    double lambda_d = 1.0;
    double r_d = 1.0;
};

using Deployment = std::variant<PppDeployment, MaternDeployment>;

struct Scenario {
    Deployment deployment;
    ShadowModel shadow;
    CorrelationMode mode = CorrelationMode::correlated;
    double alpha = 4.0;
    double d_link = 0.5;
    double noise = 0.0;
    double exclusion_radius = 0.25;
    Window window;              // r_max <= 0 selects the truncation rule
    double trunc_epsilon = 1e-3;

    void validate() const;
    double point_intensity() const;

    // Window radius from the truncation rule: the unshadowed mean
    // interference beyond r_max must stay below trunc_epsilon times the
    // shadowed total.
    double resolved_r_max() const;
};

struct MetricEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t replications = 0;
};

struct InterferenceSample {
    double value = 0.0;
    ShadowedPattern shadowed;
};

// Pattern + segments + shadows for one replication.  Pattern, obstacle and
// fading streams depend only on (seed, replication), not on the correlation
// mode, giving common random numbers across mode comparisons.
ShadowedPattern sample_shadowed(const Scenario& sc, std::uint64_t seed, std::uint64_t replication);

// i.i.d. exp(1) fading per point, deterministic given the same streams.
std::vector<double> sample_fading(std::size_t n_points, std::uint64_t seed,
                                  std::uint64_t replication);

double interference_of(const ShadowedPattern& shadowed, std::span<const double> fading,
                       double alpha);

InterferenceSample sample_interference(const Scenario& sc, std::uint64_t seed,
                                       std::uint64_t replication);

// n_reps interference values, reduced in fixed replication order regardless
// of thread count.
std::vector<double> interference_samples(const Scenario& sc, std::size_t n_reps,
                                         std::uint64_t seed, int threads = 0);

LaplaceCurve empirical_laplace(const Scenario& sc, std::span<const double> s_grid,
                               std::size_t n_reps, std::uint64_t seed, int threads = 0);

struct MomentEstimate {
    MetricEstimate mean;
    MetricEstimate variance;
};

MomentEstimate empirical_moments(const Scenario& sc, std::size_t n_reps, std::uint64_t seed,
                                 int threads = 0);

// Per-slot success probability of the frozen pattern under fast Rayleigh
// fading: exp(-theta d^alpha N) * prod_x 1 / (1 + theta d^alpha T_x d_x^-alpha).
double conditional_success_prob(const ShadowedPattern& shadowed, double theta,
                                const Scenario& sc);

// Fixed-size blocks processed by a worker pool; block boundaries and the
// final combination order are independent of the thread count.
void parallel_blocks(std::size_t n, std::size_t block_size, int threads,
                     const std::function<void(std::size_t block_index, std::size_t begin,
                                              std::size_t end)>& work,
                     std::size_t n_blocks_hint = 0);

} // namespace shadowsim

#endif
