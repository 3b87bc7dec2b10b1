#include "levytrim/analysis.hpp"

#include "levytrim/error.hpp"
#include "levytrim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace levytrim {

namespace {

constexpr double kBracketLo = 1e-150;
constexpr double kBracketHi = 1e150;

// Indices (into a grid decreasing toward 0) of points within `decades` of the smallest x.
std::size_t tail_start(const std::vector<double>& grid, double decades) {
  const double cut = grid.back() * std::pow(10.0, decades) * (1.0 + 1e-12);
  std::size_t i = grid.size() - 1;
  while (i > 0 && grid[i - 1] <= cut) --i;
  return i;
}

bool nonincreasing(const std::vector<double>& v, std::size_t from, double slack) {
  for (std::size_t i = from + 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] * (1.0 + slack) + 1e-300) return false;
  }
  return true;
}

bool nondecreasing(const std::vector<double>& v, std::size_t from, double slack) {
  for (std::size_t i = from + 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] * (1.0 - slack)) return false;
  }
  return true;
}

bool trends_to_zero(const std::vector<double>& v, const std::vector<double>& grid,
                    const TrendConfig& c) {
  const std::size_t last = tail_start(grid, 1.0);
  for (std::size_t i = last; i < v.size(); ++i) {
    if (!(std::abs(v[i]) <= c.limit_tolerance)) return false;
  }
  return nonincreasing(v, tail_start(grid, 2.0), c.monotone_slack);
}

bool liminf_zero(const std::vector<double>& v, const std::vector<double>& grid,
                 const TrendConfig& c) {
  const std::size_t last = tail_start(grid, 1.0);
  return *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(last), v.end()) <=
         c.limit_tolerance;
}

bool converges(const std::vector<double>& v, const std::vector<double>& grid,
               const TrendConfig& c) {
  const std::size_t last = tail_start(grid, 1.0);
  const auto [lo, hi] =
      std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(last), v.end());
  return (*hi - *lo) <= c.limit_tolerance * std::max(1.0, std::abs(v.back()));
}

bool diverges(const std::vector<double>& v, const std::vector<double>& grid,
              const TrendConfig& c) {
  return v.back() >= c.divergence_level &&
         nondecreasing(v, tail_start(grid, 2.0), c.monotone_slack);
}

// Largest root of f(b) = 1, f → 0 at the top of the bracket. f is decreasing between atoms
// but jumps up at every atom, so the crossing is located by a downward scan (decades, then
// 64 steps inside the decade) before bisecting.
double solve_unit(const std::function<double(double)>& f, const char* what) {
  const double f_hi = f(kBracketHi);
  auto fail = [&] {
    throw ConstructionError(std::string("no norming root for ") + what, kBracketLo, kBracketHi,
                            f(kBracketLo), f_hi);
  };
  if (!(f_hi < 1.0)) fail();
  const double ln10 = std::log(10.0);
  double hi = std::log(kBracketHi);
  double lo = hi;
  const double bottom = std::log(kBracketLo);
  while (true) {
    lo = hi - ln10;
    if (lo < bottom) fail();
    if (f(std::exp(lo)) > 1.0) break;
    hi = lo;
  }
  constexpr int kSteps = 64;
  for (int i = 1; i < kSteps; ++i) {
    const double u = hi - ln10 * i / kSteps;
    if (f(std::exp(u)) > 1.0) {
      lo = u;
      break;
    }
    hi = u;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(std::exp(mid)) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

double doa_normal_ratio(const LevyMeasureSpec& spec, double x) {
  if (!(x > 0.0)) throw ContractError("doa ratio needs x > 0");
  const double tail = spec.tail_abs.evaluate(x);
  const double v = truncated_moments(spec, x).big_v;
  if (v == 0.0) {
    if (tail == 0.0) return 0.0;
    throw InconsistentMeasure("V(x) = 0 while the tail above x is positive");
  }
  return x * x * tail / v;
}

const char* label_name(SmallTimeLabel label) {
  switch (label) {
    case SmallTimeLabel::kNormalDOA:
      return "normal-DOA-evidence";
    case SmallTimeLabel::kRelativelyStable:
      return "relatively-stable-evidence";
    case SmallTimeLabel::kWeakDerivative:
      return "weak-derivative-evidence";
    case SmallTimeLabel::kPartialAttraction:
      return "partial-attraction-only-evidence";
    case SmallTimeLabel::kNone:
      return "none";
  }
  return "none";
}

std::vector<double> decade_grid(double x_hi, double decades, int per_decade) {
  if (!(x_hi > 0.0) || !(decades > 0.0) || per_decade < 1) {
    throw ConfigError("grid needs x_hi > 0, decades > 0, per_decade >= 1");
  }
  const int n = static_cast<int>(std::lround(decades * per_decade));
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(x_hi * std::pow(10.0, -decades * i / n));
  return g;
}

Classification classify_small_time(const LevyMeasureSpec& spec, const std::vector<double>& x_grid,
                                   const TrendConfig& config) {
  if (x_grid.size() < 2) throw ConfigError("classification grid needs at least two points");
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > 0.0)) throw ConfigError("classification grid needs x > 0");
    if (i > 0 && !(x_grid[i] < x_grid[i - 1])) throw ConfigError("grid must decrease toward 0");
  }
  if (std::log10(x_grid.front() / x_grid.back()) < config.min_decades - 1e-9) {
    throw ConfigError("classification grid must span at least " +
                      detail::short_number(config.min_decades) + " decades");
  }
  Classification c;
  c.grid = x_grid;
  for (double x : x_grid) {
    const auto m = truncated_moments(spec, x);
    const double tail = spec.tail_abs.evaluate(x);
    c.ratio.push_back(doa_normal_ratio(spec, x));
    c.x_tail.push_back(x * tail);
    c.nu.push_back(m.nu);
    c.rs_ratio.push_back(x * tail > 0.0 ? m.nu / (x * tail) : 0.0);
  }
  const bool no_gauss = spec.sigma2 == 0.0;
  c.normal_pass = trends_to_zero(c.ratio, x_grid, config);
  c.partial_pass = liminf_zero(c.ratio, x_grid, config);
  c.weak_derivative_pass =
      no_gauss && trends_to_zero(c.x_tail, x_grid, config) && converges(c.nu, x_grid, config);
  c.relative_stability_pass = no_gauss && diverges(c.rs_ratio, x_grid, config);
  c.delta = c.nu.back();
  if (c.normal_pass) {
    c.label = SmallTimeLabel::kNormalDOA;
  } else if (c.relative_stability_pass) {
    c.label = SmallTimeLabel::kRelativelyStable;
  } else if (c.weak_derivative_pass) {
    c.label = SmallTimeLabel::kWeakDerivative;
  } else if (c.partial_pass) {
    c.label = SmallTimeLabel::kPartialAttraction;
  }
  return c;
}

const char* norming_mode_name(NormingMode mode) {
  switch (mode) {
    case NormingMode::kAuto:
      return "auto";
    case NormingMode::kNormalDOA:
      return "normal";
    case NormingMode::kRelativeStability:
      return "relative-stability";
    case NormingMode::kWeakDerivative:
      return "weak-derivative";
  }
  return "?";
}

NormingPoint norming(const LevyMeasureSpec& spec, double t, NormingMode mode) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ContractError("norming needs t > 0");
  if (mode == NormingMode::kAuto) {
    const auto c = classify_small_time(spec, decade_grid(1.0, 12.0));
    switch (c.label) {
      case SmallTimeLabel::kRelativelyStable:
        mode = NormingMode::kRelativeStability;
        break;
      case SmallTimeLabel::kWeakDerivative:
        mode = NormingMode::kWeakDerivative;
        break;
      default:
        mode = NormingMode::kNormalDOA;
    }
  }
  NormingPoint p;
  p.t = t;
  p.construction = mode;
  switch (mode) {
    case NormingMode::kNormalDOA:
      p.b = solve_unit(
          [&](double b) { return t * truncated_moments(spec, b).big_v / (b * b); },
          "t V(b) / b^2 = 1");
      p.a = t * truncated_moments(spec, p.b).nu;
      break;
    case NormingMode::kRelativeStability:
      p.b = solve_unit([&](double b) { return t * truncated_moments(spec, b).nu / b; },
                       "t nu(b) = b");
      p.a = 0.0;
      break;
    default:
      p.b = t;
      p.a = 0.0;
  }
  return p;
}

KallenbergLimits kallenberg_diagnostic(const LevyMeasureSpec& spec,
                                       const std::vector<NormingPoint>& norming,
                                       const std::vector<double>& x_grid) {
  if (norming.empty() || x_grid.empty()) throw ConfigError("Kallenberg grids must be nonempty");
  KallenbergLimits k;
  k.x_grid = x_grid;
  for (const auto& n : norming) {
    k.t_grid.push_back(n.t);
    std::vector<double> tp, tm, vv;
    for (double x : x_grid) {
      tp.push_back(n.t * spec.tail_plus.evaluate(x * n.b));
      tm.push_back(n.t * spec.tail_minus.evaluate(x * n.b));
      vv.push_back(n.t * truncated_moments(spec, x * n.b).big_v / (n.b * n.b));
    }
    k.tail_limit_plus.push_back(std::move(tp));
    k.tail_limit_minus.push_back(std::move(tm));
    k.v_limit.push_back(std::move(vv));
    k.centering_limit.push_back((n.t * truncated_moments(spec, n.b).nu - n.a) / n.b);
  }
  return k;
}

TightnessTable tightness_diagnostic(const LevyMeasureSpec& spec,
                                    const std::vector<NormingPoint>& norming,
                                    const std::vector<double>& x_grid, const TrendConfig& config) {
  if (norming.empty() || x_grid.empty()) throw ConfigError("tightness grids must be nonempty");
  TightnessTable tt;
  tt.x_grid = x_grid;
  tt.envelope.assign(x_grid.size(), 0.0);
  for (const auto& n : norming) {
    tt.t_grid.push_back(n.t);
    std::vector<double> p, m;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      p.push_back(n.t * spec.tail_plus.evaluate(x_grid[i] * n.b));
      m.push_back(n.t * spec.tail_minus.evaluate(x_grid[i] * n.b));
      tt.envelope[i] = std::max(tt.envelope[i], p.back() + m.back());
    }
    tt.plus.push_back(std::move(p));
    tt.minus.push_back(std::move(m));
  }
  tt.envelope_decreasing = nonincreasing(tt.envelope, 0, config.monotone_slack);
  tt.tight = tt.envelope_decreasing && tt.envelope.back() <= config.limit_tolerance;
  return tt;
}

QvEquivalence qv_condition_equivalence(const LevyMeasureSpec& spec, double x, double t, double b) {
  if (!(x > 0.0) || !(t > 0.0) || !(b > 0.0)) throw ContractError("qv check needs x, t, b > 0");
  const TailFunction& tail = spec.tail_abs;
  auto qv_tail = [&tail](double y) { return tail.evaluate(std::sqrt(y)); };
  const double z = x * b * b;

  // ∫_f^z y Π_q(dy) = ∫_f^z Π̄_q(u) du − z Π̄_q(z) + f Π̄_q(f), split where Π̄_q jumps or kinks.
  // Log-type tails keep a share of order 1/log(1/f) of the mass below any f, more than double
  // range can reach by quadrature, so the piece below f = 1e-300 is the second moment of Π
  // below √f.
  constexpr double kFloor = 1e-300;
  const double floor_q = std::min(kFloor, 0.5 * z);
  std::vector<double> cuts{floor_q};
  for (const auto& a : tail.atoms()) {
    const double q = a.location * a.location;
    if (q > floor_q && q < z) cuts.push_back(q);
  }
  const double up = tail.support_upper();
  if (std::isfinite(up) && up * up > floor_q && up * up < z) cuts.push_back(up * up);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(z);
  double area = tail.second_moment_below(std::sqrt(floor_q)) + floor_q * qv_tail(floor_q);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    area += quad::integrate_log(qv_tail, cuts[i], cuts[i + 1], 1e-12);
  }
  QvEquivalence q;
  q.tail_lhs = t * qv_tail(z);
  q.tail_rhs = t * tail.evaluate(std::sqrt(x) * b);
  q.moment_lhs = t / (b * b) * (spec.sigma2 + area - z * qv_tail(z));
  q.moment_rhs = t * truncated_moments(spec, std::sqrt(x) * b).big_v / (b * b);
  return q;
}

}  // namespace levytrim
