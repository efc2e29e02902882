#include "shadowsim/simulate.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "shadowsim/quadrature.hpp"

namespace shadowsim {

namespace {

// Stream role tags under (seed, replication).
constexpr std::uint64_t kRepTag = 0x5e9;
constexpr std::uint64_t kPatternStream = 1;
constexpr std::uint64_t kSegmentStream = 2;
constexpr std::uint64_t kShadowStream = 3;
constexpr std::uint64_t kFadingStream = 4;

std::uint64_t replication_base(std::uint64_t seed, std::uint64_t replication) {
    Rng r = Rng::derive(seed, {kRepTag, replication});
    return r.next_u64();
}

// Continuum mean attenuation at distance r for the scenario's shadow model,
// used only to size the window.
double marginal_mean_attenuation(const ShadowModel& model, double r) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BooleanSegmentShadow>) {
                double mu = 2.0 * m.lambda_b * m.length * r / M_PI;
                return std::exp(-mu * (1.0 - m.K));
            } else {
                return std::exp(-m.lambda_b * r * (1.0 - m.K));
            }
        },
        model);
}

} // namespace

void Scenario::validate() const {
    if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent must exceed 2");
    if (!(d_link > 0.0)) throw std::invalid_argument("serving-link distance must be positive");
    if (noise < 0.0) throw std::invalid_argument("noise power must be nonnegative");
    if (exclusion_radius < 0.0) throw std::invalid_argument("exclusion radius must be nonnegative");
    bool cluster_shadow = std::holds_alternative<ClusterPoissonShadow>(shadow);
    bool cluster_deploy = std::holds_alternative<MaternDeployment>(deployment);
    if (cluster_shadow != cluster_deploy)
        throw std::invalid_argument("cluster shadowing requires a Matern deployment and vice versa");
}

double Scenario::point_intensity() const {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PppDeployment>)
                return d.lambda;
            else
                return d.lambda_m * d.lambda_d;
        },
        deployment);
}

double Scenario::resolved_r_max() const {
    if (window.r_max > 0.0) return window.r_max;
    double lam = point_intensity();
    if (lam <= 0.0) return 1.0;

    double ref = std::max(exclusion_radius, 0.5 * d_link);
    Fn1 mean_integrand = [&](double r) {
        return marginal_mean_attenuation(shadow, r) * std::pow(r, 1.0 - alpha);
    };
    double total =
        2.0 * M_PI * lam *
        (integrate(mean_integrand, ref, 8.0 * ref, 1e-9).value +
         integrate_upper_tail(mean_integrand, 8.0 * ref, 1e-9).value);
    // Unshadowed tail bound 2 pi lam r^(2-alpha) / (alpha - 2) <= eps * total.
    double r_max = std::pow((alpha - 2.0) * trunc_epsilon * total / (2.0 * M_PI * lam),
                            1.0 / (2.0 - alpha));
    double floor = std::max({2.0 * d_link, 3.0 * exclusion_radius, 5.0});
    if (const auto* g = std::get_if<GridPoissonShadow>(&shadow))
        floor = std::max(floor, 1.5 * g->delta);
    if (const auto* m = std::get_if<MaternDeployment>(&deployment))
        floor = std::max(floor, 3.0 * m->r_d);
    return std::clamp(std::max(r_max, floor), floor, 500.0);
}

ShadowedPattern sample_shadowed(const Scenario& sc, std::uint64_t seed,
                                std::uint64_t replication) {
    sc.validate();
    std::uint64_t base = replication_base(seed, replication);
    Window w{sc.resolved_r_max()};

    Rng pattern_rng = Rng::derive(base, {kPatternStream});
    PointPattern pattern = std::visit(
        [&](const auto& d) -> PointPattern {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PppDeployment>)
                return sample_ppp(d.lambda, w, pattern_rng);
            else
                return sample_matern(d.lambda_m, d.lambda_d, d.r_d, w, pattern_rng);
        },
        sc.deployment);

    // Points inside the exclusion ball are not interferers; dropping them
    // here keeps shadowing streams aligned across modes.
    if (sc.exclusion_radius > 0.0) {
        PointPattern kept;
        kept.meta = pattern.meta;
        kept.mothers = pattern.mothers;
        for (std::size_t k = 0; k < pattern.points.size(); ++k) {
            if (pattern.points[k].norm() <= sc.exclusion_radius) continue;
            kept.points.push_back(pattern.points[k]);
            if (!pattern.mother_index.empty()) kept.mother_index.push_back(pattern.mother_index[k]);
        }
        pattern = std::move(kept);
    }

    std::uint64_t shadow_seed = Rng::derive(base, {kShadowStream}).next_u64();
    if (std::holds_alternative<BooleanSegmentShadow>(sc.shadow)) {
        const auto& model = std::get<BooleanSegmentShadow>(sc.shadow);
        if (sc.mode == CorrelationMode::correlated) {
            Rng seg_rng = Rng::derive(base, {kSegmentStream});
            SegmentSet segments = sample_segments(model.lambda_b, model.length, w, seg_rng);
            return assign_boolean(pattern, segments, model, sc.mode, shadow_seed);
        }
        return assign_boolean(pattern, SegmentSet{}, model, sc.mode, shadow_seed);
    }
    return assign_shadow(pattern, nullptr, sc.shadow, sc.mode, shadow_seed);
}

std::vector<double> sample_fading(std::size_t n_points, std::uint64_t seed,
                                  std::uint64_t replication) {
    std::uint64_t base = replication_base(seed, replication);
    Rng rng = Rng::derive(base, {kFadingStream});
    std::vector<double> h(n_points);
    for (double& v : h) v = rng.exponential();
    return h;
}

double interference_of(const ShadowedPattern& shadowed, std::span<const double> fading,
                       double alpha) {
    if (fading.size() != shadowed.pattern.points.size())
        throw std::invalid_argument("fading vector length must match the pattern");
    double sum = 0.0;
    for (std::size_t k = 0; k < fading.size(); ++k) {
        double d = shadowed.pattern.points[k].norm();
        sum += fading[k] * shadowed.attenuation[k] * std::pow(d, -alpha);
    }
    return sum;
}

InterferenceSample sample_interference(const Scenario& sc, std::uint64_t seed,
                                       std::uint64_t replication) {
    InterferenceSample out;
    out.shadowed = sample_shadowed(sc, seed, replication);
    std::vector<double> h = sample_fading(out.shadowed.pattern.points.size(), seed, replication);
    out.value = interference_of(out.shadowed, h, sc.alpha);
    return out;
}

void parallel_blocks(std::size_t n, std::size_t block_size, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& work,
                     std::size_t) {
    if (n == 0) return;
    std::size_t n_blocks = (n + block_size - 1) / block_size;
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t n_threads = threads > 0 ? static_cast<std::size_t>(threads) : hw;
    n_threads = std::min<std::size_t>(n_threads, n_blocks);

    if (n_threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            work(b, b * block_size, std::min(n, (b + 1) * block_size));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= n_blocks) return;
                work(b, b * block_size, std::min(n, (b + 1) * block_size));
            }
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<double> interference_samples(const Scenario& sc, std::size_t n_reps,
                                         std::uint64_t seed, int threads) {
    sc.validate();
    Scenario rsc = sc;
    rsc.window.r_max = sc.resolved_r_max();
    std::vector<double> out(n_reps);
    parallel_blocks(n_reps, 256, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            out[k] = sample_interference(rsc, seed, k).value;
    });
    return out;
}

LaplaceCurve empirical_laplace(const Scenario& sc, std::span<const double> s_grid,
                               std::size_t n_reps, std::uint64_t seed, int threads) {
    sc.validate();
    if (n_reps == 0) throw std::invalid_argument("empirical_laplace needs replications");
    Scenario rsc = sc;
    rsc.window.r_max = sc.resolved_r_max();
    const std::size_t m = s_grid.size();
    const std::size_t block = 256;
    const std::size_t n_blocks = (n_reps + block - 1) / block;

    // Per-block partial sums, combined in block order afterwards.
    std::vector<std::vector<double>> sums(n_blocks), sq_sums(n_blocks);
    parallel_blocks(n_reps, block, threads, [&](std::size_t b, std::size_t begin, std::size_t end) {
        std::vector<double> s1(m, 0.0), s2(m, 0.0);
        for (std::size_t k = begin; k < end; ++k) {
            double I = sample_interference(rsc, seed, k).value;
            for (std::size_t j = 0; j < m; ++j) {
                double v = std::exp(-s_grid[j] * I);
                s1[j] += v;
                s2[j] += v * v;
            }
        }
        sums[b] = std::move(s1);
        sq_sums[b] = std::move(s2);
    });

    LaplaceCurve curve;
    curve.kind = LaplaceCurve::Kind::empirical;
    curve.s_grid.assign(s_grid.begin(), s_grid.end());
    curve.values.resize(m);
    curve.errors.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            s1 += sums[b][j];
            s2 += sq_sums[b][j];
        }
        double n = static_cast<double>(n_reps);
        double mean = s1 / n;
        double var = std::max(0.0, (s2 - n * mean * mean) / std::max(1.0, n - 1.0));
        curve.values[j] = mean;
        curve.errors[j] = std::sqrt(var / n);
    }
    return curve;
}

MomentEstimate empirical_moments(const Scenario& sc, std::size_t n_reps, std::uint64_t seed,
                                 int threads) {
    std::vector<double> I = interference_samples(sc, n_reps, seed, threads);
    double n = static_cast<double>(n_reps);
    double s1 = 0.0;
    for (double v : I) s1 += v;
    double mean = s1 / n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : I) {
        double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    double var = m2 / (n - 1.0);
    m4 /= n;
    MomentEstimate out;
    out.mean = {mean, std::sqrt(var / n), n_reps};
    // stderr of the sample variance via the fourth central moment.
    double var_of_var = (m4 - (n - 3.0) / (n - 1.0) * var * var) / n;
    out.variance = {var, std::sqrt(std::max(0.0, var_of_var)), n_reps};
    return out;
}

double conditional_success_prob(const ShadowedPattern& shadowed, double theta,
                                const Scenario& sc) {
    if (!(theta > 0.0)) throw std::invalid_argument("SINR threshold must be positive");
    double s = theta * std::pow(sc.d_link, sc.alpha);
    double p = std::exp(-s * sc.noise);
    for (std::size_t k = 0; k < shadowed.pattern.points.size(); ++k) {
        double d = shadowed.pattern.points[k].norm();
        p /= 1.0 + s * shadowed.attenuation[k] * std::pow(d, -sc.alpha);
    }
    return p;
}

} // namespace shadowsim
