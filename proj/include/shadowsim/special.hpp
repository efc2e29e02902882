#ifndef SHADOWSIM_SPECIAL_HPP
#define SHADOWSIM_SPECIAL_HPP

namespace shadowsim {

// Exponential integral E1(x), x > 0.
double exp_e1(double x);

// e^x * E1(x), stable for large x where E1 underflows and e^x overflows.
double expx_e1(double x);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// P[Poisson(mu) <= n] = Q(n + 1, mu).
double poisson_cdf(unsigned long n, double mu);

// First-order Marcum Q function Q1(a, b); CCDF kernel of Rician power.
double marcum_q1(double a, double b);

} // namespace shadowsim

#endif
