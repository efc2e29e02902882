#ifndef SHADOWSIM_GEOMETRY_HPP
#define SHADOWSIM_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "shadowsim/rng.hpp"

namespace shadowsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
};

// Sampling disk of radius r_max centered at the origin.
struct Window {
    double r_max = 0.0;
    double area() const { return M_PI * r_max * r_max; }
};

// Generating intensities carried along with a sampled pattern.
struct IntensityMeta {
    double lambda = 0.0;    // homogeneous PPP intensity (lambda_m * lambda_d for clusters)
    double lambda_m = 0.0;  // mother intensity (clusters only)
    double lambda_d = 0.0;  // mean daughters per mother (clusters only)
    double r_d = 0.0;       // cluster radius (clusters only)
};

struct PointPattern {
    std::vector<Vec2> points;
    std::vector<std::int32_t> mother_index;  // empty unless clustered
    std::vector<Vec2> mothers;               // empty unless clustered
    IntensityMeta meta;

    bool clustered() const { return !mother_index.empty() || !mothers.empty(); }
};

struct Segment {
    Vec2 center;
    double length = 0.0;
    double angle = 0.0;  // in [0, pi)

    Vec2 endpoint_a() const {
        double h = 0.5 * length;
        return {center.x - h * std::cos(angle), center.y - h * std::sin(angle)};
    }
    Vec2 endpoint_b() const {
        double h = 0.5 * length;
        return {center.x + h * std::cos(angle), center.y + h * std::sin(angle)};
    }
};

struct SegmentSet {
    std::vector<Segment> segments;
    double center_intensity = 0.0;
};

struct GridCell {
    long i = 0;
    long j = 0;
    bool operator==(const GridCell&) const = default;
};

PointPattern sample_ppp(double lambda, Window window, Rng& rng);

// Mothers are sampled on the window inflated by r_d; daughters falling
// outside the window are dropped but keep their mother index.
PointPattern sample_matern(double lambda_m, double lambda_d, double r_d,
                           Window window, Rng& rng);

// Centers sampled on the window inflated by length/2, angles uniform on [0, pi).
SegmentSet sample_segments(double lambda_b, double length, Window window, Rng& rng);

// Closed-segment intersection; touching endpoints count as crossing.
bool segments_intersect(Vec2 p1, Vec2 q1, Vec2 p2, Vec2 q2);

int count_crossings(const SegmentSet& segments, Vec2 a, Vec2 b);

// Index of the square of side delta containing p; the origin's square is
// (0, 0) and boundaries follow the half-open convention [-d/2+i*d, d/2+i*d).
GridCell grid_cell(Vec2 p, double delta);

} // namespace shadowsim

#endif
