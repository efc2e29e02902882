#include "shadowsim/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shadowsim/quadrature.hpp"

namespace shadowsim {

namespace {

constexpr double kMixTail = 1e-10;

void check_transform_domain(double alpha, double s) {
    if (!(alpha > 2.0))
        throw std::domain_error("path-loss exponent must exceed 2 (interference diverges)");
    if (s < 0.0) throw std::domain_error("Laplace argument must be nonnegative");
}

struct CellGeometry {
    Rect rect;
    double d_min;   // distance from origin to the cell (0 if it contains it)
    double d_max;   // farthest corner
    double area;
};

CellGeometry cell_geometry(long i, long j, double delta) {
    CellGeometry g;
    g.rect = {i * delta - 0.5 * delta, i * delta + 0.5 * delta,
              j * delta - 0.5 * delta, j * delta + 0.5 * delta};
    double ax = std::max({g.rect.x0, -g.rect.x1, 0.0});
    double ay = std::max({g.rect.y0, -g.rect.y1, 0.0});
    g.d_min = std::hypot(ax, ay);
    double bx = std::max(std::fabs(g.rect.x0), std::fabs(g.rect.x1));
    double by = std::max(std::fabs(g.rect.y0), std::fabs(g.rect.y1));
    g.d_max = std::hypot(bx, by);
    g.area = delta * delta;
    return g;
}

// Shared-draw Laplace factor of one region: E_T[exp(-lambda * J(T))] for the
// Poisson-log attenuation law, where J(t) is supplied by the caller and
// J(t) ~= t * j_lin for small t (j_lin < 0 disables the linearization).
double shared_factor(double lambda, const PoissonLogAttenuation& law,
                     const std::function<QuadResult(double)>& J, double j_lin,
                     double lin_threshold, double& tol_budget) {
    if (law.K == 1.0 || law.mu == 0.0) {
        QuadResult q = J(1.0);
        tol_budget += lambda * q.error;
        return std::exp(-lambda * q.value);
    }
    double factor = 0.0;
    double mass = 0.0;
    double pmf = std::exp(-law.mu);
    double t = 1.0;
    unsigned long r = 0;
    for (;;) {
        if (j_lin >= 0.0 && t * lin_threshold < 1e-4) {
            // Remaining terms are in the linear regime; close the sum with
            // J(t') ~= t' * j_lin for all further t' <= t.
            double rest = 0.0, m = mass, p = pmf, tt = t;
            while (m < 1.0 - kMixTail && r < 100000) {
                rest += p * std::exp(-lambda * tt * j_lin);
                m += p;
                ++r;
                p *= law.mu / static_cast<double>(r);
                tt *= law.K;
            }
            rest += (1.0 - m) * std::exp(-lambda * tt * j_lin);
            factor += rest;
            // J(t) lies in [t j_lin (1 - t lin_threshold), t j_lin].
            tol_budget += lambda * t * j_lin * (t * lin_threshold);
            break;
        }
        QuadResult q = J(t);
        factor += pmf * std::exp(-lambda * q.value);
        tol_budget += pmf * lambda * q.error;
        mass += pmf;
        if (mass >= 1.0 - kMixTail) {
            factor += (1.0 - mass) * std::exp(-lambda * q.value * law.K);
            break;
        }
        ++r;
        pmf *= law.mu / static_cast<double>(r);
        t *= law.K;
        if (r > 100000) break;
    }
    return factor;
}

// Continuum radial tail of the log-transform beyond radius rc, shared by
// both correlation modes (their difference beyond rc is folded into tol).
QuadResult log_tail_beyond(double rc, double lambda, double alpha, double lambda_b,
                           double K, double s, double quad_tol) {
    Fn1 f = [=](double r) {
        PoissonLogAttenuation law{K, lambda_b * r};
        return (1.0 - mix_expectation(s * std::pow(r, -alpha), law)) * r;
    };
    QuadResult q = integrate_upper_tail(f, rc, quad_tol);
    q.value *= 2.0 * M_PI * lambda;
    q.error *= 2.0 * M_PI * lambda;
    // Mode difference bound for the ignored shared-vs-independent split.
    q.error += M_PI * lambda * lambda * s * s * std::pow(rc, 2.0 - 2.0 * alpha) / (alpha - 1.0);
    return q;
}

double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

// Angular width of the circle of radius w inside a disk of radius r_d
// centered at distance rho from the origin.
double disk_arc_halfwidth(double w, double rho, double r_d) {
    if (rho < r_d && w <= r_d - rho) return M_PI;
    if (w < 1e-300) return rho < r_d ? M_PI : 0.0;
    return clamped_acos((w * w + rho * rho - r_d * r_d) / (2.0 * w * rho));
}

// (2 / (pi r_d^2)) * int g(w) * arc(w) * w dw over the daughter disk of a
// mother at distance rho, optionally clipped to w >= w_min.
QuadResult disk_average(double rho, double r_d, double w_min, const Fn1& g, double tol) {
    double lo = std::max(std::max(rho - r_d, 0.0), w_min);
    double hi = rho + r_d;
    if (hi <= lo) return {0.0, 0.0};
    Fn1 f = [&](double w) { return g(w) * disk_arc_halfwidth(w, rho, r_d) * w; };
    QuadResult q = integrate(f, lo, hi, tol);
    double c = 2.0 / (M_PI * r_d * r_d);
    return {q.value * c, q.error * c};
}

} // namespace

double PoissonLogAttenuation::mean() const { return std::exp(-mu * (1.0 - K)); }

double PoissonLogAttenuation::second_moment() const { return std::exp(-mu * (1.0 - K * K)); }

double PoissonLogAttenuation::variance() const {
    double m = mean();
    return second_moment() - m * m;
}

double mix_expectation(double a, const PoissonLogAttenuation& law, double eps_tail) {
    if (a < 0.0) throw std::domain_error("mix_expectation requires a >= 0");
    if (a == 0.0) return 1.0;
    if (law.K == 1.0 || law.mu == 0.0) return 1.0 / (1.0 + a);
    double am = a * law.mean();
    if (am < 1e-16) return 1.0 - am;  // E[aT/(1+aT)] = a E[T] + O((aT)^2)

    // At such means K^r underflows across the entire pmf support and the
    // first-order expansion is exact to double precision.
    if (law.mu > 700.0) return 1.0 - am;

    double sum = 0.0, mass = 0.0;
    double pmf = std::exp(-law.mu);
    double t = 1.0;
    unsigned long r = 0;
    for (;;) {
        sum += pmf / (1.0 + a * t);
        mass += pmf;
        if (1.0 - mass < eps_tail) {
            sum += (1.0 - mass) / (1.0 + a * t * law.K);
            break;
        }
        ++r;
        pmf *= law.mu / static_cast<double>(r);
        t *= law.K;
        if (r > 200000) break;
    }
    return sum;
}

AnalyticValue laplace_ppp_grid(const GridModelParams& p, double s, CorrelationMode mode,
                               double quad_tol, double cell_cutoff) {
    check_transform_domain(p.alpha, s);
    if (s == 0.0) return {1.0, 0.0};
    double rc = cell_cutoff > 0.0 ? cell_cutoff : 40.0 * p.delta;

    long n_idx = static_cast<long>(std::ceil(rc / p.delta));
    double n_cells = M_PI * rc * rc / (p.delta * p.delta) + 1.0;
    double cell_tol = quad_tol / n_cells;
    double skip_tol = 0.1 * quad_tol / n_cells;

    double log_sum = 0.0;
    double tol_budget = 0.0;

    for (long i = -n_idx; i <= n_idx; ++i) {
        for (long j = -n_idx; j <= n_idx; ++j) {
            double center = p.delta * std::hypot(static_cast<double>(i), static_cast<double>(j));
            if (center > rc) continue;
            CellGeometry g = cell_geometry(i, j, p.delta);
            PoissonLogAttenuation law{p.K, p.lambda_b * center};

            if (g.d_min > 0.0) {
                double bound = p.lambda * s * law.mean() * g.area * std::pow(g.d_min, -p.alpha);
                if (bound < skip_tol) {
                    tol_budget += bound;
                    continue;
                }
            }

            if (mode == CorrelationMode::independent) {
                Fn1 f = [&](double r) {
                    return 1.0 - mix_expectation(s * std::pow(r, -p.alpha), law);
                };
                QuadResult q = integrate_cell_radial(g.rect, 0.0, f, cell_tol);
                log_sum -= p.lambda * q.value;
                tol_budget += p.lambda * q.error;
            } else {
                double j_lin = -1.0;
                double lin_threshold = 0.0;
                if (g.d_min > 0.0) {
                    Fn1 flin = [&](double r) { return s * std::pow(r, -p.alpha); };
                    j_lin = integrate_cell_radial(g.rect, 0.0, flin, cell_tol).value;
                    lin_threshold = s * std::pow(g.d_min, -p.alpha);
                }
                auto J = [&](double t) {
                    Fn1 f = [&](double r) {
                        double y = s * std::pow(r, -p.alpha) * t;
                        return y / (1.0 + y);
                    };
                    return integrate_cell_radial(g.rect, 0.0, f, cell_tol);
                };
                double factor = shared_factor(p.lambda, law, J, j_lin, lin_threshold, tol_budget);
                log_sum += std::log(factor);
            }
        }
    }

    QuadResult tail = log_tail_beyond(rc, p.lambda, p.alpha, p.lambda_b, p.K, s, quad_tol);
    log_sum -= tail.value;
    tol_budget += tail.error;

    double value = std::exp(log_sum);
    return {value, value * tol_budget + 1e-15};
}

AnalyticValue laplace_pcp(const ClusterModelParams& p, double s, CorrelationMode mode,
                          double quad_tol) {
    check_transform_domain(p.alpha, s);
    if (s == 0.0) return {1.0, 0.0};
    if (!(p.r_d > 0.0)) throw std::invalid_argument("cluster radius must be positive");

    double tol_budget = 0.0;
    double inner_tol = 0.05 * quad_tol / std::max(1.0, p.lambda_m * p.lambda_d);

    auto one_minus_F = [&](double rho) -> double {
        PoissonLogAttenuation law{p.K, p.lambda_b * rho};
        double far = std::max(rho - p.r_d, 0.0);
        if (far > 0.0) {
            double bound = p.lambda_d * s * law.mean() * std::pow(far, -p.alpha);
            if (bound < 1e-18) return 0.0;
        }
        if (mode == CorrelationMode::independent) {
            Fn1 g = [&](double w) {
                return 1.0 - mix_expectation(s * std::pow(w, -p.alpha), law);
            };
            QuadResult inner = disk_average(rho, p.r_d, 0.0, g, inner_tol);
            tol_budget += p.lambda_d * inner.error;
            return 1.0 - std::exp(-p.lambda_d * inner.value);
        }
        double j_lin = -1.0;
        double lin_threshold = 0.0;
        if (far > 0.1 * p.r_d) {
            Fn1 g = [&](double w) { return s * std::pow(w, -p.alpha); };
            j_lin = disk_average(rho, p.r_d, 0.0, g, inner_tol).value;
            lin_threshold = s * std::pow(far, -p.alpha);
        }
        auto J = [&](double t) {
            Fn1 g = [&](double w) {
                double y = s * std::pow(w, -p.alpha) * t;
                return y / (1.0 + y);
            };
            return disk_average(rho, p.r_d, 0.0, g, inner_tol);
        };
        return 1.0 - shared_factor(p.lambda_d, law, J, j_lin, lin_threshold, tol_budget);
    };

    Fn1 outer = [&](double rho) { return one_minus_F(rho) * rho; };
    double split = 4.0 * p.r_d + 2.0 / std::max(p.lambda_b, 0.25);
    QuadResult head = integrate(outer, 0.0, split, quad_tol);
    QuadResult tail = integrate_upper_tail(outer, split, quad_tol);

    double log_sum = -p.lambda_m * 2.0 * M_PI * (head.value + tail.value);
    tol_budget += p.lambda_m * 2.0 * M_PI * (head.error + tail.error);
    double value = std::exp(log_sum);
    return {value, value * tol_budget + 1e-15};
}

MomentPair moments_ppp_grid(const GridModelParams& p, CorrelationMode mode, double r_excl,
                            double quad_tol, double cell_cutoff) {
    if (!(p.alpha > 2.0)) throw std::domain_error("path-loss exponent must exceed 2");
    if (r_excl <= 0.0) {
        MomentPair out;
        out.divergent = true;
        out.mean = out.variance = std::numeric_limits<double>::infinity();
        return out;
    }
    double rc = cell_cutoff > 0.0 ? cell_cutoff : 40.0 * p.delta;
    rc = std::max(rc, 4.0 * r_excl);
    long n_idx = static_cast<long>(std::ceil(rc / p.delta));
    double n_cells = M_PI * rc * rc / (p.delta * p.delta) + 1.0;
    double cell_tol = quad_tol / n_cells;

    auto antider = [&](double k_alpha) {
        return [k_alpha](double r) { return std::pow(r, 2.0 - k_alpha) / (2.0 - k_alpha); };
    };

    double mean = 0.0, var = 0.0, tol = 0.0;
    for (long i = -n_idx; i <= n_idx; ++i) {
        for (long j = -n_idx; j <= n_idx; ++j) {
            double center = p.delta * std::hypot(static_cast<double>(i), static_cast<double>(j));
            if (center > rc) continue;
            CellGeometry g = cell_geometry(i, j, p.delta);
            if (g.d_max <= r_excl) continue;
            PoissonLogAttenuation law{p.K, p.lambda_b * center};
            double c_a = integrate_cell_antiderivative(g.rect, r_excl, antider(p.alpha), cell_tol).value;
            double c_2a =
                integrate_cell_antiderivative(g.rect, r_excl, antider(2.0 * p.alpha), cell_tol).value;
            mean += p.lambda * law.mean() * c_a;
            var += 2.0 * p.lambda * law.second_moment() * c_2a;
            if (mode == CorrelationMode::correlated)
                var += p.lambda * p.lambda * law.variance() * c_a * c_a;
            tol += 3.0 * p.lambda * cell_tol;
        }
    }

    // Continuum tails beyond the enumerated cells.
    Fn1 t_mean = [&](double r) {
        PoissonLogAttenuation law{p.K, p.lambda_b * r};
        return law.mean() * std::pow(r, 1.0 - p.alpha);
    };
    Fn1 t_var = [&](double r) {
        PoissonLogAttenuation law{p.K, p.lambda_b * r};
        return law.second_moment() * std::pow(r, 1.0 - 2.0 * p.alpha);
    };
    mean += 2.0 * M_PI * p.lambda * integrate_upper_tail(t_mean, rc, quad_tol).value;
    var += 4.0 * M_PI * p.lambda * integrate_upper_tail(t_var, rc, quad_tol).value;
    if (mode == CorrelationMode::correlated) {
        Fn1 t_diff = [&](double r) {
            PoissonLogAttenuation law{p.K, p.lambda_b * r};
            return law.variance() * std::pow(r, 1.0 - 2.0 * p.alpha);
        };
        var += 2.0 * M_PI * p.lambda * p.lambda * p.delta * p.delta *
               integrate_upper_tail(t_diff, rc, quad_tol).value;
    }

    return {mean, var, tol + quad_tol, false};
}

MomentPair moments_pcp(const ClusterModelParams& p, CorrelationMode mode, double r_excl,
                       double quad_tol) {
    if (!(p.alpha > 2.0)) throw std::domain_error("path-loss exponent must exceed 2");
    if (r_excl <= 0.0) {
        MomentPair out;
        out.divergent = true;
        out.mean = out.variance = std::numeric_limits<double>::infinity();
        return out;
    }
    double inner_tol = 1e-3 * quad_tol;
    auto disk_pow = [&](double rho, double k_alpha) {
        Fn1 g = [&](double w) { return std::pow(w, -k_alpha); };
        return disk_average(rho, p.r_d, r_excl, g, inner_tol).value;
    };

    Fn1 mean_integrand = [&](double rho) {
        PoissonLogAttenuation law{p.K, p.lambda_b * rho};
        return law.mean() * disk_pow(rho, p.alpha) * rho;
    };
    Fn1 var_integrand = [&](double rho) {
        PoissonLogAttenuation law{p.K, p.lambda_b * rho};
        double a1 = disk_pow(rho, p.alpha);
        double a2 = disk_pow(rho, 2.0 * p.alpha);
        double v = 2.0 * p.lambda_d * law.second_moment() * a2 +
                   p.lambda_d * p.lambda_d * law.mean() * law.mean() * a1 * a1;
        if (mode == CorrelationMode::correlated)
            v += p.lambda_d * p.lambda_d * law.variance() * a1 * a1;
        return v * rho;
    };

    double split = 4.0 * p.r_d + 2.0 / std::max(p.lambda_b, 0.25);
    double mean = 2.0 * M_PI * p.lambda_m * p.lambda_d *
                  (integrate(mean_integrand, 0.0, split, quad_tol).value +
                   integrate_upper_tail(mean_integrand, split, quad_tol).value);
    double var = 2.0 * M_PI * p.lambda_m *
                 (integrate(var_integrand, 0.0, split, quad_tol).value +
                  integrate_upper_tail(var_integrand, split, quad_tol).value);
    return {mean, var, 8.0 * quad_tol, false};
}

SpatialReuseResult spatial_reuse_inverse(double s, double lambda, double alpha,
                                         const std::function<double(double)>& mark_laplace,
                                         double r_min, double quad_tol) {
    check_transform_domain(alpha, s);
    if (s == 0.0) return {false, 1.0};

    Fn1 integrand = [&](double v) {
        double lg = mark_laplace(s * std::pow(v, -alpha));
        return v * (1.0 / lg - 1.0);
    };

    if (r_min <= 0.0) {
        // The integral diverges at 0 unless v^2 (1/L_G - 1) -> 0.
        double prev = std::numeric_limits<double>::infinity();
        bool shrinking = true;
        for (double v : {1e-2, 1e-3, 1e-4}) {
            double q = v * integrand(v);
            if (q > 0.5 * prev) shrinking = false;
            prev = q;
        }
        if (!shrinking || prev > 1e-9) return {true, 0.0};
        r_min = 1e-8;
    }

    double split = std::max(4.0 * r_min, std::pow(s, 1.0 / alpha) * 4.0 + r_min);
    double integral = integrate(integrand, r_min, split, quad_tol).value +
                      integrate_upper_tail(integrand, split, quad_tol).value;
    double exponent = 2.0 * M_PI * lambda * integral;
    if (exponent > 700.0) return {true, 0.0};
    return {false, std::exp(exponent)};
}

OrderingReport check_ordering(const LaplaceCurve& a, const LaplaceCurve& b, double extra_tol) {
    if (a.s_grid.size() != b.s_grid.size() || a.values.size() != a.s_grid.size() ||
        b.values.size() != b.s_grid.size())
        throw std::invalid_argument("ordering check needs curves on one grid");
    for (std::size_t k = 0; k < a.s_grid.size(); ++k)
        if (std::fabs(a.s_grid[k] - b.s_grid[k]) > 1e-12 * (1.0 + std::fabs(a.s_grid[k])))
            throw std::invalid_argument("ordering check needs curves on one grid");

    auto tol_at = [&](const LaplaceCurve& c, std::size_t k) {
        if (c.errors.empty()) return 0.0;
        double e = c.errors[k];
        return c.kind == LaplaceCurve::Kind::empirical ? 3.0 * e : e;
    };

    OrderingReport rep;
    for (std::size_t k = 0; k < a.s_grid.size(); ++k) {
        double tol = tol_at(a, k) + tol_at(b, k) + extra_tol;
        double gap = b.values[k] - a.values[k];
        rep.worst_violation = std::max(rep.worst_violation, gap);
        if (gap > tol) rep.holds = false;
    }
    rep.worst_violation = std::max(rep.worst_violation, 0.0);
    return rep;
}

bool cm_probe(const std::function<double(double)>& f, int max_order,
              const std::vector<double>& grid, double h, double f_noise) {
    if (max_order < 0 || h <= 0.0) throw std::invalid_argument("cm_probe parameters invalid");
    for (double x : grid) {
        for (int n = 0; n <= max_order; ++n) {
            // Central stencil: f^(n)(x) ~ h^-n sum_k (-1)^k C(n,k) f(x + (n/2 - k) h)
            double sum = 0.0;
            double coeff = 1.0;
            double max_abs = 0.0;
            for (int k = 0; k <= n; ++k) {
                double val = f(x + (0.5 * n - k) * h);
                max_abs = std::max(max_abs, std::fabs(val));
                sum += ((k % 2 == 0) ? coeff : -coeff) * val;
                coeff = coeff * (n - k) / (k + 1.0);
            }
            double deriv = sum / std::pow(h, n);
            double signed_deriv = (n % 2 == 0) ? deriv : -deriv;
            double tol = 8.0 * std::pow(2.0, n) * (f_noise + 4e-16 * max_abs) / std::pow(h, n) + 1e-12;
            if (signed_deriv < -tol) return false;
        }
    }
    return true;
}

} // namespace shadowsim
