#include "levytrim/special.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace levytrim::special {

double expint_e1(double x) {
  if (x <= 0.0) return std::numeric_limits<double>::infinity();
  if (x > 700.0) return 0.0;
  return boost::math::expint(1, x);
}

double scaled_expint_e1(double x) {
  if (x < 1.0) return std::exp(x) * expint_e1(x);
  // Continued fraction e^x E1(x) = 1/(x+1-1/(x+3-4/(x+5-...))), modified Lentz.
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

double expint_ei_minus_leading(double z) {
  if (z < 40.0) return boost::math::expint(z) - std::exp(z) / z;
  // e^{-z} Ei(z) ~ (1/z) Σ k!/z^k; drop the k = 0 term and stop at the smallest term.
  double term = 1.0 / z;
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (k + 1) / z;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  const double scaled = sum / z;
  if (z > 700.0) return std::numeric_limits<double>::infinity();
  return std::exp(z) * scaled;
}

double gamma2_lower(double x) {
  if (x < 0.1) {
    // Σ_{k≥2} (-1)^k (k-1) x^k / k!
    double term = x * x / 2.0;  // x^k / k! at k = 2
    double sum = 0.0;
    for (int k = 2; k < 20; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      sum += sign * (k - 1) * term;
      term *= x / (k + 1);
    }
    return sum;
  }
  return -std::expm1(-x) - x * std::exp(-x);
}

double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(a, x);
}

double gamma_p_inv(double a, double p) { return boost::math::gamma_p_inv(a, p); }

double normal_cdf(double x) { return 0.5 * boost::math::erfc(-x / std::numbers::sqrt2); }

}  // namespace levytrim::special
