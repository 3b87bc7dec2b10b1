#pragma once

namespace levytrim::special {

/// E1(x) = ∫_x^∞ e^{-y}/y dy for x > 0.
double expint_e1(double x);

/// e^x E1(x), stable for large x.
double scaled_expint_e1(double x);

/// Ei(z) − e^z / z for z > 0, evaluated without the leading-order cancellation for large z.
double expint_ei_minus_leading(double z);

/// 1 − e^{-x}(1 + x) = ∫_0^x y e^{-y} dy, accurate for small x.
double gamma2_lower(double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Inverse of P(a, ·).
double gamma_p_inv(double a, double p);

/// Standard normal cdf.
double normal_cdf(double x);

}  // namespace levytrim::special
