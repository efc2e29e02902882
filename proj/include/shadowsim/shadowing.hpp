#ifndef SHADOWSIM_SHADOWING_HPP
#define SHADOWSIM_SHADOWING_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "shadowsim/geometry.hpp"

namespace shadowsim {

enum class CorrelationMode { correlated, independent };

// Which point stands in for a grid cell when computing its obstacle-count
// mean lambda_b * distance.  cell_center is the analytic-formula convention
// (the origin's cell then has mean 0); nearest_point uses the cell's
// closest realized base station, which keeps the near field shadowed and is
// what the reference experiments require.
enum class GridRepresentative { cell_center, nearest_point };

struct GridPoissonShadow {
    double delta = 1.0;
    double lambda_b = 1.0;
    double K = 0.1;
    GridRepresentative representative = GridRepresentative::cell_center;
};

struct ClusterPoissonShadow {
    double lambda_b = 1.0;
    double K = 0.1;
};

// Mean crossing count used by the independent approximation of the Boolean
// model: matched_marginal is 2 lambda_b l d / pi (the exact mean for
// uniformly oriented length-l segments); paper_literal is lambda_b d / (2 pi).
enum class BooleanIndependentMean { matched_marginal, paper_literal };

struct BooleanSegmentShadow {
    double lambda_b = 1.0;
    double length = 1.0;
    double K = 0.1;
    BooleanIndependentMean mean_convention = BooleanIndependentMean::matched_marginal;
};

using ShadowModel = std::variant<GridPoissonShadow, ClusterPoissonShadow, BooleanSegmentShadow>;

struct ShadowedPattern {
    PointPattern pattern;
    std::vector<double> attenuation;       // T_x in (0, 1]
    std::vector<std::int64_t> cell_label;  // grid key, mother index, or point index
};

double boolean_mean_crossings(const BooleanSegmentShadow& model, double distance);

ShadowedPattern assign_grid(const PointPattern& pattern, const GridPoissonShadow& model,
                            CorrelationMode mode, std::uint64_t seed);

ShadowedPattern assign_cluster(const PointPattern& pattern, const ClusterPoissonShadow& model,
                               CorrelationMode mode, std::uint64_t seed);

// Correlated mode is the ground truth: T_x = K^(crossings of the o-x link).
// Independent mode draws i.i.d. Poisson counts with the matched mean.
ShadowedPattern assign_boolean(const PointPattern& pattern, const SegmentSet& segments,
                               const BooleanSegmentShadow& model, CorrelationMode mode,
                               std::uint64_t seed);

ShadowedPattern assign_shadow(const PointPattern& pattern, const SegmentSet* segments,
                              const ShadowModel& model, CorrelationMode mode,
                              std::uint64_t seed);

} // namespace shadowsim

#endif
