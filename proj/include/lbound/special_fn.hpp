#ifndef LBOUND_SPECIAL_FN_HPP
#define LBOUND_SPECIAL_FN_HPP

// Scalar special functions used throughout the library: standard normal
// pdf/cdf, the inverse Mills ratio R(t) = phi(t)/Phi(t) and its derivative,
// the risk-difference kernel T(s) = R(s)(R(s)+2s), and regularized
// incomplete-gamma wrappers.
//
// All functions are total on finite inputs and propagate NaN (they never
// throw on NaN); domain violations on the gamma functions throw
// std::domain_error.  Everything here is stateless and thread-safe.

namespace lbound {

// (2*pi)^(-1/2) * exp(-t^2/2).  Underflows to 0 for |t| > ~38.6.
double std_normal_pdf(double t);

// P(Z <= t) for Z ~ N(0,1).  Computed from the complementary error
// function; the deep left tail goes through the scaled form
// 0.5*erfcx(u)*exp(-u^2) so it never suffers 1 - Phi(-t) cancellation.
double std_normal_cdf(double t);

// Upper tail P(Z > t) = Phi(-t), without subtraction.
double std_normal_sf(double t);

// log Phi(t); finite for every finite t (no underflow in the left tail).
double std_normal_lcdf(double t);

// Scaled complementary error function exp(x^2) * erfc(x).
// For x >= 0 accurate to a few ulp (continued fraction above x = 25,
// split-exponent product below); for x < 0 it grows like 2*exp(x^2) and
// overflows to +inf around x = -26.7.
double erfcx(double x);

// Inverse Mills ratio R(t) = phi(t)/Phi(t).
// Strictly positive and decreasing, R(t) >= -t, convex.  For t < 0 the
// value is sqrt(2/pi)/erfcx(-t/sqrt(2)), which stays accurate far into
// the tail where naive phi/Phi is 0/0.  For t >~ 38.6 the true value is
// below the smallest positive double and the function underflows to 0.
double inverse_mills(double t);

// R'(t) = -R(t)(t + R(t)); lies in (-1, 0) for all finite t.
double inverse_mills_deriv(double t);

// T(s) = R(s)(R(s) + 2s).  Negative for s below a single crossing point
// (R + 2s is strictly increasing), positive afterwards.
double t_fn(double s);

// T'(s) = 2 R(s) (1 - (s + R(s))^2).
double t_fn_deriv(double s);

// Regularized lower incomplete gamma P(shape, rate*x) — the CDF at x of a
// Gamma(shape, rate) distribution.  shape, rate must be > 0, x >= 0.
double gamma_cdf(double shape, double rate, double x);

// Complement 1 - gamma_cdf, computed by the upper branch (no subtraction).
double gamma_sf(double shape, double rate, double x);

}  // namespace lbound

#endif  // LBOUND_SPECIAL_FN_HPP
