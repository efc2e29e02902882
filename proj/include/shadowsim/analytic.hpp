#ifndef SHADOWSIM_ANALYTIC_HPP
#define SHADOWSIM_ANALYTIC_HPP

#include <functional>
#include <optional>
#include <vector>

#include "shadowsim/shadowing.hpp"

namespace shadowsim {

// Law of T = K^r with r ~ Poisson(mu).
struct PoissonLogAttenuation {
    double K = 1.0;
    double mu = 0.0;

    double mean() const;            // exp(-mu (1 - K))
    double second_moment() const;   // exp(-mu (1 - K^2))
    double variance() const;
};

// E_T[ 1 / (1 + a T) ] as a truncated Poisson mixture.
double mix_expectation(double a, const PoissonLogAttenuation& law, double eps_tail = 1e-10);

struct LaplaceCurve {
    enum class Kind { analytic, empirical };
    Kind kind = Kind::analytic;
    std::vector<double> s_grid;
    std::vector<double> values;
    std::vector<double> errors;  // per-point tolerance (analytic) or stderr (empirical)
};

struct AnalyticValue {
    double value = 0.0;
    double tol = 0.0;
};

struct MomentPair {
    double mean = 0.0;
    double variance = 0.0;
    double tol = 0.0;
    bool divergent = false;
};

struct GridModelParams {
    double lambda = 1.0;
    double alpha = 4.0;
    double delta = 1.0;
    double lambda_b = 1.0;
    double K = 0.1;
};

struct ClusterModelParams {
    double lambda_m = 1.0;
    double lambda_d = 1.0;
    double r_d = 1.0;
    double alpha = 4.0;
    double lambda_b = 1.0;
    double K = 0.1;
};

// Conditional Laplace transform of the interference at the origin for the
// PPP-on-grid-tessellation model.  cell_cutoff <= 0 selects 40 * delta.
AnalyticValue laplace_ppp_grid(const GridModelParams& p, double s, CorrelationMode mode,
                               double quad_tol = 1e-6, double cell_cutoff = 0.0);

// Laplace transform under the Matern cluster model with per-cluster marks.
AnalyticValue laplace_pcp(const ClusterModelParams& p, double s, CorrelationMode mode,
                          double quad_tol = 1e-6);

// Interference mean/variance with an exclusion ball of radius r_excl around
// the origin; r_excl == 0 flags divergence instead of returning a value.
MomentPair moments_ppp_grid(const GridModelParams& p, CorrelationMode mode,
                            double r_excl = 0.25, double quad_tol = 1e-8,
                            double cell_cutoff = 0.0);

MomentPair moments_pcp(const ClusterModelParams& p, CorrelationMode mode,
                       double r_excl = 0.25, double quad_tol = 1e-8);

struct SpatialReuseResult {
    bool divergent = false;
    double value = 0.0;  // E[ 1 / L_{I | Phi}(s) ], valid when !divergent
};

// Lemma for i.i.d.-marked PPP interference: E[1 / L_{I|Phi}(s)] =
// exp(2 pi lambda int_rmin^inf v (1/L_G(s v^-alpha) - 1) dv).  Marks must be
// i.i.d.; r_min is the interferer exclusion radius (0 = none).
SpatialReuseResult spatial_reuse_inverse(double s, double lambda, double alpha,
                                         const std::function<double(double)>& mark_laplace,
                                         double r_min = 0.0, double quad_tol = 1e-8);

struct OrderingReport {
    bool holds = true;
    double worst_violation = 0.0;  // max over grid of (b - a), clamped at 0
};

// Checks curve_a >= curve_b - tol pointwise on a shared s grid.
OrderingReport check_ordering(const LaplaceCurve& curve_a, const LaplaceCurve& curve_b,
                              double extra_tol = 0.0);

// Finite-difference probe of complete monotonicity: (-1)^n f^(n) >= 0 for
// n = 0..max_order on the given grid.  f_noise is the absolute evaluation
// noise of f, folded into the sign tolerance.
bool cm_probe(const std::function<double(double)>& f, int max_order,
              const std::vector<double>& grid, double h, double f_noise = 1e-14);

} // namespace shadowsim

#endif
