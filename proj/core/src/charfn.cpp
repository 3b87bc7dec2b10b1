#include "levytrim/charfn.hpp"

#include "levytrim/error.hpp"
#include "levytrim/quadrature.hpp"
#include "levytrim/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levytrim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-10;
constexpr int kCells = 128;
constexpr int kEndSplits = 17;

// cos z − 1 without cancellation.
double cosm1(double z) {
  const double s = std::sin(0.5 * z);
  return -2.0 * s * s;
}

// cos z − 1 + z²/2.
double cos_rem(double z) {
  if (std::abs(z) < 0.1) {
    const double z2 = z * z;
    return z2 * z2 * (1.0 / 24.0 - z2 * (1.0 / 720.0 - z2 / 40320.0));
  }
  return cosm1(z) + 0.5 * z * z;
}

// sin z − z.
double sin_rem(double z) {
  if (std::abs(z) < 0.1) {
    const double z2 = z * z;
    return -z * z2 * (1.0 / 6.0 - z2 * (1.0 / 120.0 - z2 * (1.0 / 5040.0 - z2 / 362880.0)));
  }
  return std::sin(z) - z;
}

double atom_sum_above(const TailFunction& tail, double x) {
  double s = 0.0;
  for (const auto& a : tail.atoms()) {
    if (a.location > x) s += a.mass;
  }
  return s;
}

double continuous_tail(const TailFunction& tail, double x) {
  return std::max(0.0, tail.evaluate(x) - atom_sum_above(tail, x));
}

double continuous_second_moment(const TailFunction& tail, double x) {
  double s = tail.second_moment_below(x);
  for (const auto& a : tail.atoms()) {
    if (a.location <= x) s -= a.location * a.location * a.mass;
  }
  return std::max(0.0, s);
}

bool has_continuous_part(const TailFunction& tail) {
  double atom_total = 0.0;
  for (const auto& a : tail.atoms()) atom_total += a.mass;
  const double total = tail.total_mass();
  return std::isinf(total) ? true : total > atom_total * (1.0 + 1e-15);
}

void require_density(const TailFunction& tail) {
  if (!tail.has_density()) throw UnsupportedMeasure("characteristic exponent needs a density");
}

// ∫ f(x) density(x) dx on [a,b), log substitution below 1/θ, plain Gauss-Kronrod above.
double weighted(const TailFunction& tail, double theta, double a, double b,
                const std::function<double(double)>& f) {
  if (!(b > a)) return 0.0;
  b = std::min(b, tail.support_upper());
  if (!(b > a)) return 0.0;
  auto g = [&](double x) { return f(x) * tail.density(x); };
  const double split = std::clamp(1.0 / theta, a, b);
  double r = 0.0;
  if (split > a) r += quad::integrate_log(g, a, split, kTol);
  if (b > split) r += quad::integrate_finite(g, split, b, kTol);
  return r;
}

// ∫_{[a,b)} (e^{iθx} − 1) Π(dx) for 0 < a < b < ∞.
Complex band(const TailFunction& tail, double theta, double a, double b) {
  Complex r{0.0, 0.0};
  for (const auto& at : tail.atoms()) {
    if (at.location >= a && at.location < b) {
      r += at.mass * Complex{cosm1(theta * at.location), std::sin(theta * at.location)};
    }
  }
  if (!has_continuous_part(tail)) return r;
  require_density(tail);
  if (std::isinf(tail.support_upper()) && a >= std::max(1.0, 1.0 / theta) &&
      theta * (b - a) > 200.0) {
    // Many oscillations: difference of two Fourier tails instead of adaptive GK.
    auto dens = [&tail](double x) { return tail.density(x); };
    const auto fa = quad::integrate_fourier_tail(dens, a, theta, kTol);
    const auto fb = quad::integrate_fourier_tail(dens, b, theta, kTol);
    r += Complex{fa.cos_part - fb.cos_part - (continuous_tail(tail, a) - continuous_tail(tail, b)),
                 fa.sin_part - fb.sin_part};
    return r;
  }
  r += Complex{weighted(tail, theta, a, b, [theta](double x) { return cosm1(theta * x); }),
               weighted(tail, theta, a, b, [theta](double x) { return std::sin(theta * x); })};
  return r;
}

// ∫_{[a,∞)} (e^{iθx} − 1) Π(dx), a > 0.
Complex upper(const TailFunction& tail, double theta, double a) {
  const double up = tail.support_upper();
  if (!(up >= a)) return {0.0, 0.0};
  if (std::isfinite(up)) return band(tail, theta, a, std::nextafter(up, kInf));
  const double cut = std::max({a, 1.0, 1.0 / theta});
  Complex r = band(tail, theta, a, cut);
  for (const auto& at : tail.atoms()) {
    if (at.location >= cut) {
      r += at.mass * Complex{cosm1(theta * at.location), std::sin(theta * at.location)};
    }
  }
  if (!has_continuous_part(tail)) return r;
  require_density(tail);
  const auto f = quad::integrate_fourier_tail([&tail](double x) { return tail.density(x); }, cut,
                                              theta, kTol);
  r += Complex{f.cos_part - continuous_tail(tail, cut), f.sin_part};
  return r;
}

// I(θ) = ∫_{(0,∞)} (e^{iθx} − 1 − iθx 1{x≤1}) Π(dx) for one half, θ > 0.
Complex side_exponent(const TailFunction& tail, double theta) {
  if (tail.is_zero()) return {0.0, 0.0};
  Complex r{0.0, 0.0};
  for (const auto& at : tail.atoms()) {
    const double z = theta * at.location;
    if (at.location <= 1.0) {
      r += at.mass * Complex{cosm1(z), sin_rem(z)};
    } else {
      r += at.mass * Complex{cosm1(z), std::sin(z)};
    }
  }
  if (!has_continuous_part(tail)) return r;
  require_density(tail);
  const double c = std::min(1.0, 1.0 / theta);
  const double up = tail.support_upper();
  // (0, c]: subtract the quadratic term, which is the truncated second moment.
  const double cc = std::min(c, up);
  auto dens = [&tail](double x) { return tail.density(x); };
  double re = -0.5 * theta * theta * continuous_second_moment(tail, cc);
  re += quad::integrate_log([&](double x) { return cos_rem(theta * x) * dens(x); }, 0.0, cc, kTol);
  double im =
      quad::integrate_log([&](double x) { return sin_rem(theta * x) * dens(x); }, 0.0, cc, kTol);
  // (c, 1].
  const double one = std::min(1.0, up);
  if (one > c) {
    re += quad::integrate_finite([&](double x) { return cosm1(theta * x) * dens(x); }, c, one, kTol);
    im += quad::integrate_finite([&](double x) { return sin_rem(theta * x) * dens(x); }, c, one,
                                 kTol);
  }
  r += Complex{re, im};
  // (1, ∞): no compensation. Atoms already counted.
  if (up > 1.0) {
    Complex hi{0.0, 0.0};
    if (std::isfinite(up)) {
      hi = {quad::integrate_finite([&](double x) { return cosm1(theta * x) * dens(x); }, 1.0, up, kTol),
            quad::integrate_finite([&](double x) { return std::sin(theta * x) * dens(x); }, 1.0, up,
                                   kTol)};
    } else {
      const auto f = quad::integrate_fourier_tail(dens, 1.0, theta, kTol);
      hi = {f.cos_part - continuous_tail(tail, 1.0), f.sin_part};
    }
    r += hi;
  }
  return r;
}

Complex tie_term(double rate, double theta, double level) {
  if (!(rate > 0.0)) return {0.0, 0.0};
  return rate * Complex{cosm1(theta * level), std::sin(theta * level)};
}

Complex base_exponent(const LevyMeasureSpec& spec, double theta) {
  return {-0.5 * spec.sigma2 * theta * theta, theta * spec.gamma};
}

// Plus-side piece of Φ for truncation at the level of w: I⁺ − F⁺(L) + ρ(e^{iθL} − 1).
// For the minus side the same quantity is conjugated by the caller.
Complex truncated_side(const TailFunction& tail, double theta, double w, const Complex& full) {
  if (!(w > 0.0)) return full;
  const double level = tail.inverse(w);
  if (level <= 0.0) return full - upper(tail, theta, 0.0);
  Complex r = full - upper(tail, theta, level);
  if (tail.atom_mass_at(level) > 0.0) {
    r += tie_term(std::max(0.0, tail.left_limit(level) - w), theta, level);
  }
  return r;
}

Complex conj_if(bool flip, const Complex& z) { return flip ? std::conj(z) : z; }

// E exp(t · piece(Γ_r / t)) where piece is evaluated along levels swept from high to low.
template <class Piece>
Complex gamma_average(int r, double t, Piece piece) {
  Complex acc{0.0, 0.0};
  for (const auto& node : gamma_weight_nodes(r)) {
    acc += node.weight * std::exp(t * piece(node.gamma_value / t));
  }
  return acc;
}

}  // namespace

std::vector<GammaNode> gamma_weight_nodes(int r) {
  if (r < 1) throw ContractError("gamma weight needs r >= 1");
  std::vector<GammaNode> nodes;
  const double h = 1.0 / kCells;
  auto add = [&](double p_lo, double p_hi) {
    const double mid = 0.5 * (p_lo + p_hi);
    nodes.push_back({special::gamma_p_inv(r, mid), p_hi - p_lo});
  };
  // Left end cell (0, h) split at h 2^{-k}.
  add(0.0, h * std::ldexp(1.0, -kEndSplits));
  for (int k = kEndSplits; k >= 1; --k) add(h * std::ldexp(1.0, -k), h * std::ldexp(1.0, -k + 1));
  for (int i = 1; i < kCells - 1; ++i) add(i * h, (i + 1) * h);
  // Right end cell (1 − h, 1) split at 1 − h 2^{-k}.
  for (int k = 1; k <= kEndSplits; ++k) {
    add(1.0 - h * std::ldexp(1.0, -k + 1), 1.0 - h * std::ldexp(1.0, -k));
  }
  add(1.0 - h * std::ldexp(1.0, -kEndSplits), 1.0);
  return nodes;
}

Complex psi(const LevyMeasureSpec& spec, double theta) {
  if (theta == 0.0) return {0.0, 0.0};
  const bool flip = theta < 0.0;
  const double th = std::abs(theta);
  Complex z = base_exponent(spec, th) + side_exponent(spec.tail_plus, th) +
              std::conj(side_exponent(spec.tail_minus, th));
  return conj_if(flip, z);
}

Complex phi_trunc_modulus(const LevyMeasureSpec& spec, double theta, double v) {
  if (!(v > 0.0)) throw ContractError("phi_trunc needs v > 0");
  if (theta == 0.0) return {0.0, 0.0};
  const bool flip = theta < 0.0;
  const double th = std::abs(theta);
  const TieRates ties = tie_rates(spec, v, TieMode::kModulus);
  const double level = ties.level;
  Complex z = psi(spec, th);
  z -= upper(spec.tail_plus, th, level) + std::conj(upper(spec.tail_minus, th, level));
  z += tie_term(ties.plus, th, level) + tie_term(ties.minus, -th, level);
  return conj_if(flip, z);
}

Complex phi_trunc_asymmetric(const LevyMeasureSpec& spec, double theta, double u, double v) {
  if (theta == 0.0) return {0.0, 0.0};
  const bool flip = theta < 0.0;
  const double th = std::abs(theta);
  const Complex plus = truncated_side(spec.tail_plus, th, v, side_exponent(spec.tail_plus, th));
  const Complex minus = truncated_side(spec.tail_minus, th, u, side_exponent(spec.tail_minus, th));
  return conj_if(flip, base_exponent(spec, th) + plus + std::conj(minus));
}

Complex charfn_trimmed(const LevyMeasureSpec& spec, double theta, double t, const TrimMode& mode) {
  if (!(t > 0.0)) throw ContractError("charfn needs t > 0");
  if (mode.r < 0 || mode.s < 0) throw ContractError("trimming orders must be >= 0");
  if (theta == 0.0) return {1.0, 0.0};
  const bool flip = theta < 0.0;
  const double th = std::abs(theta);

  Complex phi;
  if (mode.r == 0 && mode.s == 0) {
    phi = std::exp(t * psi(spec, th));
  } else if (mode.is_modulus()) {
    const Complex full = psi(spec, th);
    // Levels decrease along the nodes; accumulate ∫_{[L,∞)} band by band.
    const auto nodes = gamma_weight_nodes(mode.r);
    Complex up_plus{0.0, 0.0};
    Complex up_minus{0.0, 0.0};
    double prev = kInf;
    phi = {0.0, 0.0};
    for (const auto& node : nodes) {
      const double v = node.gamma_value / t;
      const TieRates ties = tie_rates(spec, v, TieMode::kModulus);
      const double level = ties.level;
      if (level <= 0.0) {
        up_plus = upper(spec.tail_plus, th, 0.0);
        up_minus = upper(spec.tail_minus, th, 0.0);
      } else if (std::isinf(prev)) {
        up_plus = upper(spec.tail_plus, th, level);
        up_minus = upper(spec.tail_minus, th, level);
      } else if (level < prev) {
        up_plus += band(spec.tail_plus, th, level, prev);
        up_minus += band(spec.tail_minus, th, level, prev);
      }
      if (level > 0.0) prev = level;
      const Complex z = full - up_plus - std::conj(up_minus) + tie_term(ties.plus, th, level) +
                        tie_term(ties.minus, -th, level);
      phi += node.weight * std::exp(t * z);
    }
  } else {
    auto side_factor = [&](const TailFunction& tail, int order, bool conj) {
      const Complex full = side_exponent(tail, th);
      if (order == 0) return std::exp(t * conj_if(conj, full));
      if (tail.is_zero()) return Complex{1.0, 0.0};
      Complex up{0.0, 0.0};
      double prev = kInf;
      return gamma_average(order, t, [&](double w) {
        const double level = tail.inverse(w);
        if (level <= 0.0) {
          up = upper(tail, th, 0.0);
        } else if (std::isinf(prev)) {
          up = upper(tail, th, level);
        } else if (level < prev) {
          up += band(tail, th, level, prev);
        }
        if (level > 0.0) prev = level;
        Complex z = full - up;
        if (level > 0.0 && tail.atom_mass_at(level) > 0.0) {
          z += tie_term(std::max(0.0, tail.left_limit(level) - w), th, level);
        }
        return conj_if(conj, z);
      });
    };
    phi = std::exp(t * base_exponent(spec, th)) * side_factor(spec.tail_plus, mode.r, false) *
          side_factor(spec.tail_minus, mode.s, true);
  }
  if (!(std::abs(phi) <= 1.0 + 1e-6)) {
    throw NumericFailure("characteristic function modulus exceeds 1: " + detail::short_number(std::abs(phi)));
  }
  return conj_if(flip, phi);
}

}  // namespace levytrim
