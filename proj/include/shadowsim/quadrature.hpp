#ifndef SHADOWSIM_QUADRATURE_HPP
#define SHADOWSIM_QUADRATURE_HPP

#include <functional>

namespace shadowsim {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error += o.error;
        return *this;
    }
};

using Fn1 = std::function<double(double)>;

// Adaptive Gauss-Kronrod (G7, K15) with recursive bisection to abs_tol.
QuadResult integrate(const Fn1& f, double a, double b, double abs_tol);

// Integral over [a, inf) via the substitution u = a / r; requires a > 0 and
// an integrand decaying faster than r^-2.
QuadResult integrate_upper_tail(const Fn1& f, double a, double abs_tol);

// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0, x1, y0, y1;
};

// Integral of f(||p||) over rect \ B(0, r_excl), computed in polar
// coordinates with ray-clipping against the rectangle so that cells
// containing or touching the origin need no special casing.
QuadResult integrate_cell_radial(const Rect& rect, double r_excl,
                                 const Fn1& f_of_radius, double abs_tol);

// Same region, but for integrands with a closed-form radial antiderivative:
// the caller supplies F(r) with dF/dr = f(r) * r, and the theta integral of
// F(r_hi) - F(r_lo) is done numerically.
QuadResult integrate_cell_antiderivative(const Rect& rect, double r_excl,
                                         const Fn1& radial_antiderivative,
                                         double abs_tol);

} // namespace shadowsim

#endif
