#include "shadowsim/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace shadowsim {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (positive half; symmetric).
constexpr std::array<double, 8> kKronrodNodes = {
    0.0000000000000000, 0.2077849550078985, 0.4058451513773972,
    0.5860872354676911, 0.7415311855993945, 0.8648644233597691,
    0.9491079123427585, 0.9914553711208126};
constexpr std::array<double, 8> kKronrodWeights = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
    0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
    0.0630920926299786, 0.0229353220105292};
constexpr std::array<double, 4> kGaussWeights = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
    0.1294849661688697};

struct Panel {
    double value;
    double error;
};

Panel gk15(const Fn1& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double kron = kKronrodWeights[0] * fc;
    double gauss = kGaussWeights[0] * fc;
    for (int i = 1; i < 8; ++i) {
        double fl = f(c - h * kKronrodNodes[i]);
        double fr = f(c + h * kKronrodNodes[i]);
        kron += kKronrodWeights[i] * (fl + fr);
        if (i % 2 == 0) gauss += kGaussWeights[i / 2] * (fl + fr);
    }
    double value = kron * h;
    double err = std::fabs((kron - gauss) * h);
    // Sharpened error model from QUADPACK.
    err = std::min(err, std::pow(200.0 * err, 1.5));
    return {value, err};
}

void adapt(const Fn1& f, double a, double b, double tol, int depth, QuadResult& out) {
    Panel p = gk15(f, a, b);
    if (p.error <= tol || depth >= 48 || b - a < 1e-14 * (std::fabs(a) + 1.0)) {
        out.value += p.value;
        out.error += p.error;
        return;
    }
    double c = 0.5 * (a + b);
    adapt(f, a, c, 0.5 * tol, depth + 1, out);
    adapt(f, c, b, 0.5 * tol, depth + 1, out);
}

// Entry/exit radii of the ray (cos t, sin t) through an axis-aligned
// rectangle, via slab clipping.  Returns false if the ray misses.
bool ray_rect_range(double theta, const Rect& r, double& r_in, double& r_out) {
    double dx = std::cos(theta), dy = std::sin(theta);
    double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
    auto clip = [&](double d, double lo, double hi) {
        if (std::fabs(d) < 1e-300) return lo <= 0.0 && 0.0 <= hi;
        double ta = lo / d, tb = hi / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        return t0 <= t1;
    };
    if (!clip(dx, r.x0, r.x1)) return false;
    if (!clip(dy, r.y0, r.y1)) return false;
    r_in = t0;
    r_out = t1;
    return r_out > r_in;
}

// Angles at which rays from the origin graze rectangle corners; the theta
// integrand is smooth between consecutive ones.
std::vector<double> corner_breaks(const Rect& r) {
    std::vector<double> br;
    for (double cx : {r.x0, r.x1})
        for (double cy : {r.y0, r.y1}) {
            double t = std::atan2(cy, cx);
            if (t < 0.0) t += 2.0 * M_PI;
            br.push_back(t);
        }
    br.push_back(0.0);
    br.push_back(2.0 * M_PI);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end(),
                         [](double a, double b) { return std::fabs(a - b) < 1e-13; }),
             br.end());
    return br;
}

QuadResult integrate_cell_impl(const Rect& rect, double r_excl,
                               const std::function<double(double, double)>& radial_piece,
                               double abs_tol) {
    auto breaks = corner_breaks(rect);
    QuadResult total;
    double tol_piece = abs_tol / static_cast<double>(breaks.size());
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        double ta = breaks[k], tb = breaks[k + 1];
        if (tb - ta < 1e-13) continue;
        double tm = 0.5 * (ta + tb);
        double rin, rout;
        if (!ray_rect_range(tm, rect, rin, rout)) continue;
        Fn1 g = [&](double theta) {
            double r0, r1;
            if (!ray_rect_range(theta, rect, r0, r1)) return 0.0;
            r0 = std::max(r0, r_excl);
            if (r1 <= r0) return 0.0;
            return radial_piece(r0, r1);
        };
        adapt(g, ta, tb, tol_piece, 0, total);
    }
    return total;
}

} // namespace

QuadResult integrate(const Fn1& f, double a, double b, double abs_tol) {
    if (!(b > a)) return {0.0, 0.0};
    QuadResult out;
    adapt(f, a, b, abs_tol, 0, out);
    return out;
}

QuadResult integrate_upper_tail(const Fn1& f, double a, double abs_tol) {
    if (!(a > 0.0)) throw std::invalid_argument("integrate_upper_tail requires a > 0");
    Fn1 g = [&f, a](double u) {
        double r = a / u;
        return f(r) * r / u;  // f(a/u) * a / u^2
    };
    QuadResult out;
    adapt(g, 0.0, 1.0, abs_tol, 0, out);
    return out;
}

QuadResult integrate_cell_radial(const Rect& rect, double r_excl,
                                 const Fn1& f_of_radius, double abs_tol) {
    auto piece = [&](double r0, double r1) {
        QuadResult inner;
        Fn1 g = [&](double r) { return f_of_radius(r) * r; };
        adapt(g, r0, r1, abs_tol * 1e-2, 0, inner);
        return inner.value;
    };
    return integrate_cell_impl(rect, r_excl, piece, abs_tol);
}

QuadResult integrate_cell_antiderivative(const Rect& rect, double r_excl,
                                         const Fn1& radial_antiderivative,
                                         double abs_tol) {
    auto piece = [&](double r0, double r1) {
        return radial_antiderivative(r1) - radial_antiderivative(r0);
    };
    return integrate_cell_impl(rect, r_excl, piece, abs_tol);
}

} // namespace shadowsim
