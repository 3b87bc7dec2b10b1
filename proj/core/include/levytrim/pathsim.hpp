#pragma once

#include "levytrim/levy_measure.hpp"
#include "levytrim/rng.hpp"

#include <string>
#include <vector>

namespace levytrim {

/// Smallest level the simulator resolves. Jumps below it are numerically zero.
inline constexpr double kEpsilonFloor = 1e-300;

struct SimConfig {
  double epsilon = 0.0;          // resolution cutoff; 0 selects the default rule
  double count_budget = 2e6;     // maximum expected number of resolved jumps t Π̄(ε)
  double min_resolved = 500.0;   // default rule: t Π̄(ε) = max(min_resolved, 50 (r+s+1))
  int trim_orders = 0;           // r + s of the intended trimming, feeds the default rule
};

struct Jump {
  double time;
  double size;
};

struct PathSample {
  double horizon = 0.0;
  double epsilon = 0.0;
  std::vector<Jump> jumps;       // |size| > ε, increasing time
  double small_aggregate = 0.0;  // Normal(0, t (V(ε) − σ²)) surrogate for jumps in [−ε, ε]
  double gaussian_part = 0.0;    // σ B_t
  double drift_part = 0.0;       // γ t minus the compensator of resolved jumps in (ε, 1]
  double sigma2 = 0.0;
  double small_variance = 0.0;   // t (V(ε) − σ²)
  bool infinite_activity_plus = false;
  bool infinite_activity_minus = false;
  /// ε sits at the floor: every jump that is not numerically zero has been resolved.
  bool exhaustive = false;

  double value() const;
};

/// Trimming orders. One-sided trimming is asymmetric with the other order 0.
struct TrimMode {
  enum class Kind { kAsymmetric, kModulus };
  Kind kind = Kind::kAsymmetric;
  int r = 0;
  int s = 0;

  static TrimMode asymmetric(int r, int s) { return {Kind::kAsymmetric, r, s}; }
  static TrimMode modulus(int r) { return {Kind::kModulus, r, 0}; }
  static TrimMode one_sided_plus(int r) { return {Kind::kAsymmetric, r, 0}; }
  static TrimMode one_sided_minus(int s) { return {Kind::kAsymmetric, 0, s}; }

  bool is_modulus() const { return kind == Kind::kModulus; }
  int total_orders() const { return r + s; }
  std::string label() const;
};

struct TrimResult {
  double trimmed_value = 0.0;
  double untrimmed_value = 0.0;
  std::vector<double> removed_positive;  // ΔX^(1) ≥ ΔX^(2) ≥ ...
  std::vector<double> removed_negative;  // magnitudes, decreasing
  std::vector<double> removed_modulus;   // signed, decreasing in |·|
  TrimMode mode;
};

struct QuadraticVariation {
  double total;
  double trimmed;
};

/// Precomputes ε, the compensator and the small-jump variance for one (spec, t) pair and then
/// draws independent paths. Thread-safe for concurrent sample() calls.
class PathSimulator {
 public:
  PathSimulator(const LevyMeasureSpec& spec, double t, const SimConfig& config = {});

  PathSample sample(Stream& rng) const;

  double epsilon() const { return epsilon_; }
  double horizon() const { return t_; }
  /// t Π̄±(ε).
  double expected_count_plus() const { return t_ * rate_plus_; }
  double expected_count_minus() const { return t_ * rate_minus_; }

 private:
  LevyMeasureSpec spec_;
  double t_;
  double epsilon_;
  double rate_plus_;
  double rate_minus_;
  double drift_;
  double small_variance_;
};

/// Default cutoff: t Π̄(ε) = max(min_resolved, 50 (orders + 1)), floored at kEpsilonFloor.
double default_epsilon(const LevyMeasureSpec& spec, double t, const SimConfig& config);

PathSample simulate_path(const LevyMeasureSpec& spec, double t, const SimConfig& config,
                         Stream& rng);

/// Removes the largest resolved jumps. Ties in magnitude go to the earlier arrival.
TrimResult trim(const PathSample& path, const TrimMode& mode);

QuadraticVariation quadratic_variation(const PathSample& path, const TrimMode& mode);

}  // namespace levytrim
