#include "shadowsim/shadowing.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace shadowsim {

namespace {

constexpr std::uint64_t kCellStream = 0x5ce11u;
constexpr std::uint64_t kPointStream = 0x9017u;

std::uint64_t cell_key(GridCell c) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.i)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.j));
}

void check_attenuation(double K) {
    if (!(K > 0.0) || K > 1.0)
        throw std::invalid_argument("attenuation factor K must be in (0, 1]");
}

// One Poisson draw per cell, keyed by (seed, cell) so the result does not
// depend on point enumeration order or thread count.
double shared_cell_draw(std::uint64_t seed, std::uint64_t key, double mu, double K) {
    Rng rng = Rng::derive(seed, {kCellStream, key});
    return std::pow(K, static_cast<double>(rng.poisson(mu)));
}

double per_point_draw(std::uint64_t seed, std::uint64_t index, double mu, double K) {
    Rng rng = Rng::derive(seed, {kPointStream, index});
    return std::pow(K, static_cast<double>(rng.poisson(mu)));
}

} // namespace

double boolean_mean_crossings(const BooleanSegmentShadow& model, double distance) {
    if (model.mean_convention == BooleanIndependentMean::matched_marginal)
        return 2.0 * model.lambda_b * model.length * distance / M_PI;
    return model.lambda_b * distance / (2.0 * M_PI);
}

ShadowedPattern assign_grid(const PointPattern& pattern, const GridPoissonShadow& model,
                            CorrelationMode mode, std::uint64_t seed) {
    check_attenuation(model.K);
    if (!(model.delta > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (model.lambda_b < 0.0) throw std::invalid_argument("obstacle intensity must be nonnegative");

    const std::size_t n = pattern.points.size();
    ShadowedPattern out;
    out.pattern = pattern;
    out.attenuation.resize(n);
    out.cell_label.resize(n);

    std::vector<GridCell> cells(n);
    std::unordered_map<std::uint64_t, double> cell_mu;
    cell_mu.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        cells[k] = grid_cell(pattern.points[k], model.delta);
        out.cell_label[k] = static_cast<std::int64_t>(cell_key(cells[k]));
    }

    if (model.representative == GridRepresentative::cell_center) {
        for (std::size_t k = 0; k < n; ++k) {
            double mu = model.lambda_b * model.delta *
                        std::hypot(static_cast<double>(cells[k].i), static_cast<double>(cells[k].j));
            cell_mu.emplace(cell_key(cells[k]), mu);
        }
    } else {
        // Representative = the cell's nearest realized point to the origin.
        for (std::size_t k = 0; k < n; ++k) {
            double mu = model.lambda_b * pattern.points[k].norm();
            auto [it, inserted] = cell_mu.emplace(cell_key(cells[k]), mu);
            if (!inserted && mu < it->second) it->second = mu;
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        double mu = cell_mu.at(cell_key(cells[k]));
        out.attenuation[k] = (mode == CorrelationMode::correlated)
                                 ? shared_cell_draw(seed, cell_key(cells[k]), mu, model.K)
                                 : per_point_draw(seed, k, mu, model.K);
    }
    return out;
}

ShadowedPattern assign_cluster(const PointPattern& pattern, const ClusterPoissonShadow& model,
                               CorrelationMode mode, std::uint64_t seed) {
    check_attenuation(model.K);
    if (model.lambda_b < 0.0) throw std::invalid_argument("obstacle intensity must be nonnegative");
    if (pattern.mother_index.size() != pattern.points.size() ||
        (pattern.points.size() > 0 && pattern.mothers.empty()))
        throw std::invalid_argument("cluster shadowing needs mother indices on every point");

    const std::size_t n = pattern.points.size();
    ShadowedPattern out;
    out.pattern = pattern;
    out.attenuation.resize(n);
    out.cell_label.resize(n);

    for (std::size_t k = 0; k < n; ++k) {
        std::int32_t m = pattern.mother_index[k];
        if (m < 0 || static_cast<std::size_t>(m) >= pattern.mothers.size())
            throw std::invalid_argument("mother index out of range");
        double mu = model.lambda_b * pattern.mothers[m].norm();
        out.cell_label[k] = m;
        out.attenuation[k] = (mode == CorrelationMode::correlated)
                                 ? shared_cell_draw(seed, static_cast<std::uint64_t>(m), mu, model.K)
                                 : per_point_draw(seed, k, mu, model.K);
    }
    return out;
}

ShadowedPattern assign_boolean(const PointPattern& pattern, const SegmentSet& segments,
                               const BooleanSegmentShadow& model, CorrelationMode mode,
                               std::uint64_t seed) {
    check_attenuation(model.K);

    const std::size_t n = pattern.points.size();
    ShadowedPattern out;
    out.pattern = pattern;
    out.attenuation.resize(n);
    out.cell_label.resize(n);

    for (std::size_t k = 0; k < n; ++k) {
        out.cell_label[k] = static_cast<std::int64_t>(k);
        if (mode == CorrelationMode::correlated) {
            int nx = count_crossings(segments, Vec2{0.0, 0.0}, pattern.points[k]);
            out.attenuation[k] = std::pow(model.K, static_cast<double>(nx));
        } else {
            double mu = boolean_mean_crossings(model, pattern.points[k].norm());
            out.attenuation[k] = per_point_draw(seed, k, mu, model.K);
        }
    }
    return out;
}

ShadowedPattern assign_shadow(const PointPattern& pattern, const SegmentSet* segments,
                              const ShadowModel& model, CorrelationMode mode,
                              std::uint64_t seed) {
    return std::visit(
        [&](const auto& m) -> ShadowedPattern {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GridPoissonShadow>) {
                return assign_grid(pattern, m, mode, seed);
            } else if constexpr (std::is_same_v<T, ClusterPoissonShadow>) {
                return assign_cluster(pattern, m, mode, seed);
            } else {
                if (mode == CorrelationMode::correlated && segments == nullptr)
                    throw std::invalid_argument("boolean shadowing needs a segment set");
                static const SegmentSet empty;
                return assign_boolean(pattern, segments ? *segments : empty, m, mode, seed);
            }
        },
        model);
}

} // namespace shadowsim
