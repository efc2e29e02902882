#include "shadowsim/geometry.hpp"

#include <stdexcept>

namespace shadowsim {

namespace {

void check_window(Window w) {
    if (!(w.r_max > 0.0)) throw std::invalid_argument("window radius must be positive");
}

Vec2 uniform_in_disk(double radius, Rng& rng) {
    double r = radius * std::sqrt(rng.uniform());
    double phi = 2.0 * M_PI * rng.uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
}

double cross(Vec2 o, Vec2 a, Vec2 b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// q assumed collinear with segment pr.
bool on_segment(Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
           std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
}

} // namespace

PointPattern sample_ppp(double lambda, Window window, Rng& rng) {
    if (lambda < 0.0) throw std::invalid_argument("ppp intensity must be nonnegative");
    check_window(window);
    PointPattern out;
    out.meta.lambda = lambda;
    unsigned long n = rng.poisson(lambda * window.area());
    out.points.reserve(n);
    for (unsigned long k = 0; k < n; ++k)
        out.points.push_back(uniform_in_disk(window.r_max, rng));
    return out;
}

PointPattern sample_matern(double lambda_m, double lambda_d, double r_d,
                           Window window, Rng& rng) {
    if (lambda_m < 0.0 || lambda_d < 0.0)
        throw std::invalid_argument("cluster intensities must be nonnegative");
    if (!(r_d > 0.0)) throw std::invalid_argument("cluster radius must be positive");
    check_window(window);

    PointPattern out;
    out.meta.lambda = lambda_m * lambda_d;
    out.meta.lambda_m = lambda_m;
    out.meta.lambda_d = lambda_d;
    out.meta.r_d = r_d;

    double r_mother = window.r_max + r_d;
    unsigned long n_mothers = rng.poisson(lambda_m * M_PI * r_mother * r_mother);
    out.mothers.reserve(n_mothers);
    for (unsigned long m = 0; m < n_mothers; ++m)
        out.mothers.push_back(uniform_in_disk(r_mother, rng));

    for (std::size_t m = 0; m < out.mothers.size(); ++m) {
        unsigned long n_daughters = rng.poisson(lambda_d);
        for (unsigned long k = 0; k < n_daughters; ++k) {
            Vec2 p = out.mothers[m] + uniform_in_disk(r_d, rng);
            if (p.norm() <= window.r_max) {
                out.points.push_back(p);
                out.mother_index.push_back(static_cast<std::int32_t>(m));
            }
        }
    }
    return out;
}

SegmentSet sample_segments(double lambda_b, double length, Window window, Rng& rng) {
    if (lambda_b < 0.0) throw std::invalid_argument("obstacle intensity must be nonnegative");
    if (!(length > 0.0)) throw std::invalid_argument("segment length must be positive");
    check_window(window);

    SegmentSet out;
    out.center_intensity = lambda_b;
    double r = window.r_max + 0.5 * length;
    unsigned long n = rng.poisson(lambda_b * M_PI * r * r);
    out.segments.reserve(n);
    for (unsigned long k = 0; k < n; ++k) {
        Segment s;
        s.center = uniform_in_disk(r, rng);
        s.length = length;
        s.angle = M_PI * rng.uniform();
        out.segments.push_back(s);
    }
    return out;
}

bool segments_intersect(Vec2 p1, Vec2 q1, Vec2 p2, Vec2 q2) {
    double d1 = cross(p2, q2, p1);
    double d2 = cross(p2, q2, q1);
    double d3 = cross(p1, q1, p2);
    double d4 = cross(p1, q1, q2);

    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;

    if (d1 == 0 && on_segment(p2, p1, q2)) return true;
    if (d2 == 0 && on_segment(p2, q1, q2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, q2, q1)) return true;
    return false;
}

int count_crossings(const SegmentSet& segments, Vec2 a, Vec2 b) {
    if (a.x == b.x && a.y == b.y)
        throw std::invalid_argument("count_crossings needs two distinct link endpoints");
    // Quick reject: a segment of half-length h can only cross the link if its
    // center is within h of the link segment.
    double abx = b.x - a.x, aby = b.y - a.y;
    double ab2 = abx * abx + aby * aby;
    int n = 0;
    for (const Segment& s : segments.segments) {
        double h = 0.5 * s.length;
        double t = ((s.center.x - a.x) * abx + (s.center.y - a.y) * aby) / ab2;
        t = std::clamp(t, 0.0, 1.0);
        double dx = s.center.x - (a.x + t * abx);
        double dy = s.center.y - (a.y + t * aby);
        if (dx * dx + dy * dy > h * h) continue;
        if (segments_intersect(a, b, s.endpoint_a(), s.endpoint_b())) ++n;
    }
    return n;
}

GridCell grid_cell(Vec2 p, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    return {static_cast<long>(std::floor(p.x / delta + 0.5)),
            static_cast<long>(std::floor(p.y / delta + 0.5))};
}

} // namespace shadowsim
