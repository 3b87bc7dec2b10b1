#pragma once

#include "levytrim/levy_measure.hpp"

#include <string>
#include <vector>

namespace levytrim {

/// x² Π̄(x) / V(x).
double doa_normal_ratio(const LevyMeasureSpec& spec, double x);

enum class SmallTimeLabel {
  kNormalDOA,
  kRelativelyStable,
  kWeakDerivative,
  kPartialAttraction,
  kNone,
};

const char* label_name(SmallTimeLabel label);

/// Finite-grid evidence thresholds.
struct TrendConfig {
  double limit_tolerance = 0.05;   // "→ 0": values in the last decade below this
  double monotone_slack = 0.05;    // relative noise allowed in monotone runs
  double divergence_level = 10.0;  // "→ ∞": last value above this
  double min_decades = 4.0;
};

struct Classification {
  SmallTimeLabel label = SmallTimeLabel::kNone;
  double delta = 0.0;              // fitted weak-derivative limit, ν at the smallest x
  std::vector<double> grid;        // decreasing
  std::vector<double> ratio;       // x² Π̄(x) / V(x)
  std::vector<double> x_tail;      // x Π̄(x)
  std::vector<double> nu;          // ν(x)
  std::vector<double> rs_ratio;    // ν(x) / (x Π̄(x))
  bool normal_pass = false;
  bool partial_pass = false;
  bool weak_derivative_pass = false;
  bool relative_stability_pass = false;
};

/// Log-spaced grid from x_hi down to x_hi 10^{-decades}.
std::vector<double> decade_grid(double x_hi, double decades, int per_decade = 8);

/// Evaluates the small-time criteria on a grid decreasing to 0 and returns the strongest label
/// whose trend passes: normal > relatively stable > weak derivative > partial > none.
Classification classify_small_time(const LevyMeasureSpec& spec, const std::vector<double>& x_grid,
                                   const TrendConfig& config = {});

enum class NormingMode { kAuto, kNormalDOA, kRelativeStability, kWeakDerivative };

const char* norming_mode_name(NormingMode mode);

struct NormingPoint {
  double t = 0.0;
  double b = 0.0;
  double a = 0.0;
  NormingMode construction = NormingMode::kNormalDOA;
};

/// Normal mode: t V(b)/b² = 1, a = t ν(b). Relative stability: t ν(b) = b, a = 0.
/// Weak derivative: b = t, a = 0. Auto picks the mode from classify_small_time on a 12-decade
/// grid below 1 (normal for partial/none labels).
NormingPoint norming(const LevyMeasureSpec& spec, double t, NormingMode mode = NormingMode::kAuto);

struct KallenbergLimits {
  std::vector<double> x_grid;
  std::vector<double> t_grid;
  std::vector<std::vector<double>> tail_limit_plus;   // [t][x]: t Π̄⁺(x b_t)
  std::vector<std::vector<double>> tail_limit_minus;  // [t][x]: t Π̄⁻(x b_t)
  std::vector<std::vector<double>> v_limit;           // [t][x]: t V(x b_t) / b_t²
  std::vector<double> centering_limit;                // [t]: (t ν(b_t) − a_t) / b_t
};

KallenbergLimits kallenberg_diagnostic(const LevyMeasureSpec& spec,
                                       const std::vector<NormingPoint>& norming,
                                       const std::vector<double>& x_grid);

struct TightnessTable {
  std::vector<double> x_grid;  // increasing
  std::vector<double> t_grid;
  std::vector<std::vector<double>> plus;   // [t][x]
  std::vector<std::vector<double>> minus;  // [t][x]
  std::vector<double> envelope;            // max over t of t Π̄(x b_t), both sides
  bool envelope_decreasing = false;
  bool tight = false;  // envelope decreasing and below the limit tolerance at the largest x
};

TightnessTable tightness_diagnostic(const LevyMeasureSpec& spec,
                                    const std::vector<NormingPoint>& norming,
                                    const std::vector<double>& x_grid,
                                    const TrendConfig& config = {});

/// Both sides of t Π̄_q(x b²) = t Π̄(√x b) and (t/b²)(σ² + ∫_0^{x b²} y Π_q(dy)) = t V(√x b)/b²,
/// Π_q the Lévy measure of the quadratic variation. The left sides come from quadrature on
/// Π̄_q, the right sides from the truncated moments.
struct QvEquivalence {
  double tail_lhs;
  double tail_rhs;
  double moment_lhs;
  double moment_rhs;
};

QvEquivalence qv_condition_equivalence(const LevyMeasureSpec& spec, double x, double t, double b);

}  // namespace levytrim
