#include "levytrim/representation.hpp"

#include "levytrim/error.hpp"
#include "levytrim/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levytrim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ∫_{L ≤ x ≤ 1} x Π(dx) on one side; 0 when L > 1.
double closed_band_moment(const TailFunction& tail, double level) {
  if (!(level <= 1.0)) return 0.0;
  return tail.first_moment(level, 1.0) + level * tail.atom_mass_at(level);
}

// One side of an asymmetric truncation: level, truncated tail, tie rate.
struct SideCut {
  double level = kInf;
  TailFunction tail;
  double tie = 0.0;
  double band = 0.0;
};

SideCut cut_side(const TailFunction& tail, double w) {
  SideCut c;
  c.tail = tail;
  if (!(w > 0.0)) return c;
  c.level = tail.inverse(w);
  if (c.level <= 0.0) {
    // w above the total mass: every jump on this side is removed.
    c.level = 0.0;
    c.tail = TailFunction();
    c.band = tail.first_moment(0.0, 1.0);
    return c;
  }
  c.tail = tail.truncated_below(c.level);
  c.band = closed_band_moment(tail, c.level);
  if (tail.atom_mass_at(c.level) > 0.0) c.tie = std::max(0.0, tail.left_limit(c.level) - w);
  return c;
}

double poisson_or_zero(Stream& rng, double mean) {
  return mean > 0.0 ? static_cast<double>(rng.poisson(mean)) : 0.0;
}

}  // namespace

LevyMeasureSpec TruncatedTriplet::as_spec() const {
  LevyMeasureSpec s;
  s.name = "truncated";
  s.gamma = shifted_gamma;
  s.sigma2 = sigma2;
  s.tail_plus = tail_plus;
  s.tail_minus = tail_minus;
  s.tail_abs = tail_abs;
  s.infinite_activity_plus = std::isinf(tail_plus.total_mass());
  s.infinite_activity_minus = std::isinf(tail_minus.total_mass());
  return s;
}

TruncatedTriplet truncated_triplet_modulus(const LevyMeasureSpec& spec, double v) {
  if (!(v > 0.0)) throw ContractError("modulus truncation needs v > 0");
  TruncatedTriplet tr;
  tr.modulus = true;
  tr.sigma2 = spec.sigma2;
  const TieRates ties = tie_rates(spec, v, TieMode::kModulus);
  const double level = ties.level;
  tr.level_plus = tr.level_minus = level;
  tr.tie_plus = ties.plus;
  tr.tie_minus = ties.minus;
  if (level <= 0.0) {
    tr.shifted_gamma =
        spec.gamma - (spec.tail_plus.first_moment(0.0, 1.0) - spec.tail_minus.first_moment(0.0, 1.0));
    return tr;
  }
  tr.shifted_gamma = spec.gamma - (closed_band_moment(spec.tail_plus, level) -
                                   closed_band_moment(spec.tail_minus, level));
  tr.tail_plus = spec.tail_plus.truncated_below(level);
  tr.tail_minus = spec.tail_minus.truncated_below(level);
  tr.tail_abs = spec.tail_abs.truncated_below(level);
  return tr;
}

TruncatedTriplet truncated_triplet_asymmetric(const LevyMeasureSpec& spec, double u, double v) {
  TruncatedTriplet tr;
  tr.sigma2 = spec.sigma2;
  const SideCut plus = cut_side(spec.tail_plus, v);
  const SideCut minus = cut_side(spec.tail_minus, u);
  tr.shifted_gamma = spec.gamma - plus.band + minus.band;
  tr.tail_plus = plus.tail;
  tr.tail_minus = minus.tail;
  tr.level_plus = plus.level;
  tr.level_minus = minus.level;
  tr.tie_plus = plus.tie;
  tr.tie_minus = minus.tie;
  if (!(v > 0.0) && !(u > 0.0)) {
    tr.tail_abs = spec.tail_abs;
  } else {
    tr.tail_abs = TailFunction::sum(plus.tail, minus.tail, false);
  }
  return tr;
}

double sample_ordered_jump(const LevyMeasureSpec& spec, double t, int r, Side side, Stream& rng) {
  if (r < 1) throw ContractError("ordered jump rank must be >= 1");
  if (!(t > 0.0)) throw ContractError("ordered jumps need t > 0");
  // On a finite-activity side the inverse returns 0 when fewer than r jumps occur.
  const double g = rng.gamma_integer(r);
  return spec.tail(side).inverse(g / t);
}

OrderedJumpBounds ordered_jump_bounds(int r, double lambda) {
  if (!(lambda > 0.0)) return {0.0, 0.0, 0.0};
  const double k = r + 1.0;
  const double log_pow = k * std::log(lambda) - std::lgamma(k + 1.0);
  return {std::exp(log_pow - lambda), special::gamma_p(k, lambda), std::exp(log_pow)};
}

double ordered_jump_cdf(const LevyMeasureSpec& spec, double t, int r, double y, Side side) {
  if (r < 0) throw ContractError("rank must be >= 0");
  const double lambda = t * spec.tail(side).evaluate(y);
  return lambda > 0.0 ? special::gamma_p(r + 1.0, lambda) : 0.0;
}

double ordered_jump_cdf_left(const LevyMeasureSpec& spec, double t, int r, double y, Side side) {
  if (r < 0) throw ContractError("rank must be >= 0");
  const double lambda = t * spec.tail(side).left_limit(y);
  return lambda > 0.0 ? special::gamma_p(r + 1.0, lambda) : 0.0;
}

RepresentationSample joint_sample_trimmed_with_jump(const LevyMeasureSpec& spec, double t,
                                                    const TrimMode& mode, const SimConfig& config,
                                                    Stream& rng) {
  if (!(t > 0.0)) throw ContractError("time horizon must be positive");
  if (mode.r < 0 || mode.s < 0) throw ContractError("trimming orders must be >= 0");
  RepresentationSample out;

  if (mode.r == 0 && mode.s == 0) {
    SimConfig cfg = config;
    cfg.trim_orders = 0;
    out.value = PathSimulator(spec, t, cfg).sample(rng).value();
    return out;
  }

  TruncatedTriplet tr;
  double lowest_level = kInf;
  if (mode.is_modulus()) {
    if (!spec.infinite_activity(Side::kModulus)) {
      throw ContractError("modulus trimming needs infinite activity");
    }
    const double v = rng.gamma_integer(mode.r) / t;
    tr = truncated_triplet_modulus(spec, v);
    out.level_plus = tr.level_plus;
    lowest_level = tr.level_plus;
  } else {
    if (mode.r > 0 && !spec.infinite_activity_plus) {
      throw ContractError("cannot trim positive jumps of a finite-activity side");
    }
    if (mode.s > 0 && !spec.infinite_activity_minus) {
      throw ContractError("cannot trim negative jumps of a finite-activity side");
    }
    const double v = mode.r > 0 ? rng.gamma_integer(mode.r) / t : 0.0;
    const double u = mode.s > 0 ? rng.gamma_integer(mode.s) / t : 0.0;
    tr = truncated_triplet_asymmetric(spec, u, v);
    if (mode.r > 0) out.level_plus = tr.level_plus;
    if (mode.s > 0) out.level_minus = tr.level_minus;
    lowest_level = std::min(tr.level_plus, tr.level_minus);
  }

  const LevyMeasureSpec truncated = tr.as_spec();
  SimConfig cfg = config;
  cfg.trim_orders = 0;
  double eps = config.epsilon > 0.0 ? config.epsilon : default_epsilon(truncated, t, cfg);
  if (std::isfinite(lowest_level) && lowest_level > 0.0) eps = std::min(eps, lowest_level / 100.0);
  if (eps <= 0.0 || !(eps >= kEpsilonFloor)) eps = std::max(eps, kEpsilonFloor);
  cfg.epsilon = eps;
  double value = PathSimulator(truncated, t, cfg).sample(rng).value();

  const double yp = poisson_or_zero(rng, t * tr.tie_plus);
  const double ym = poisson_or_zero(rng, t * tr.tie_minus);
  if (tr.modulus) {
    value += tr.level_plus * (yp - ym);
  } else {
    if (yp > 0.0) value += tr.level_plus * yp;
    if (ym > 0.0) value -= tr.level_minus * ym;
  }
  out.value = value;
  return out;
}

double sample_trimmed_rep(const LevyMeasureSpec& spec, double t, const TrimMode& mode,
                          const SimConfig& config, Stream& rng) {
  return joint_sample_trimmed_with_jump(spec, t, mode, config, rng).value;
}

}  // namespace levytrim
