#pragma once

#include <functional>

namespace levytrim::quad {

/// Relative tolerance used by all measure integrals.
inline constexpr double kRelTol = 1e-10;

/// ∫_a^b f(y) dy for 0 ≤ a < b ≤ ∞ after the substitution y = e^{-u}.
/// Integrable singularities at 0 and slowly decaying tails both become smooth in u.
double integrate_log(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = kRelTol);

/// ∫_a^b f(y) dy on a finite interval, adaptive Gauss-Kronrod.
double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = kRelTol);

/// ∫_c^∞ f(y) cos(ω y) dy and ∫_c^∞ f(y) sin(ω y) dy for a decaying f and ω > 0.
struct FourierPair {
  double cos_part;
  double sin_part;
};
FourierPair integrate_fourier_tail(const std::function<double(double)>& f, double c, double omega,
                                   double rel_tol = kRelTol);

}  // namespace levytrim::quad
