#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace levytrim {

struct Atom {
  double location;
  double mass;
};

/// Atomless part of a one-sided tail. Any empty function means "not available";
/// moments then fall back to quadrature on the density.
struct ContinuousTail {
  std::function<double(double)> tail;                  // x ↦ Π̄_c(x), continuous, nonincreasing
  std::function<double(double)> density;               // Π_c(dy)/dy
  std::function<double(double, double)> first_moment;  // (a, b) ↦ ∫_a^b y Π_c(dy)
  std::function<double(double)> second_moment_below;   // x ↦ ∫_0^x y² Π_c(dy)
  std::function<double(double)> inverse;               // closed-form right-continuous inverse
  double total_mass = 0.0;                             // Π̄_c(0+), possibly +inf
  double support_upper = 0.0;                          // Π̄_c ≡ 0 on [support_upper, ∞)
};

namespace detail {
class TailImpl;
}

/// One-sided (or two-sided) tail x ↦ Π̄(x) = Π((x, ∞)): a continuous part plus finitely many
/// atoms. Immutable; copies share state.
class TailFunction {
 public:
  /// The zero tail.
  TailFunction();

  static TailFunction from_parts(ContinuousTail cont, std::vector<Atom> atoms = {});
  static TailFunction from_atoms(std::vector<Atom> atoms);
  /// Pointwise sum of two tails (two-sided tail |x| from the two halves). `tabulate` builds an
  /// inverse lookup table, worth it only for tails inverted many times.
  static TailFunction sum(const TailFunction& a, const TailFunction& b, bool tabulate = true);

  double evaluate(double x) const;
  /// Π̄(x−), counting an atom at x.
  double left_limit(double x) const;
  /// inf{y > 0 : Π̄(y) ≤ v}; 0 when v ≥ Π̄(0+).
  double inverse(double v) const;

  bool has_analytic_inverse() const;
  bool has_density() const;
  /// Density of the continuous part; throws UnsupportedMeasure if absent.
  double density(double x) const;

  /// ∫_{(a,b]} y Π(dy), atoms included.
  double first_moment(double a, double b) const;
  /// ∫_{(0,x]} y² Π(dy), atoms included.
  double second_moment_below(double x) const;

  /// Π̄(0+).
  double total_mass() const;
  const std::vector<Atom>& atoms() const;
  double atom_mass_at(double x) const;
  /// Smallest level above which the tail vanishes (+inf for unbounded support).
  double support_upper() const;
  bool is_zero() const;

  /// Restriction to (0, level): Π̄_L(x) = Π̄(x) − Π̄(L−) for x < L, 0 otherwise.
  /// An atom at `level` itself is dropped.
  TailFunction truncated_below(double level) const;

 private:
  explicit TailFunction(std::shared_ptr<const detail::TailImpl> impl);
  std::shared_ptr<const detail::TailImpl> impl_;
};

/// inf{y > 0 : tail(y) ≤ v}.
double inverse_tail(const TailFunction& tail, double v);

enum class Side { kPlus, kMinus, kModulus };

const char* side_name(Side side);

/// Triplet (γ, σ², Π) with Π split into its positive and negative halves.
struct LevyMeasureSpec {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  double gamma = 0.0;
  double sigma2 = 0.0;
  TailFunction tail_plus;
  TailFunction tail_minus;
  TailFunction tail_abs;  // Π̄ = Π̄⁺ + Π̄⁻
  bool infinite_activity_plus = false;
  bool infinite_activity_minus = false;

  /// Assembles a spec, builds the two-sided tail and infers activity flags from Π̄±(0+).
  static LevyMeasureSpec make(std::string name, double gamma, double sigma2, TailFunction plus,
                              TailFunction minus);

  const TailFunction& tail(Side side) const;
  bool infinite_activity(Side side) const;
};

struct TruncatedMoments {
  double nu;
  double big_v;
};

/// ν(x) = γ − ∫_{x<|y|≤1} y Π(dy) and V(x) = σ² + ∫_{|y|≤x} y² Π(dy).
TruncatedMoments truncated_moments(const LevyMeasureSpec& spec, double x);

enum class TieMode { kOneSidedPlus, kOneSidedMinus, kModulus };

struct TieRates {
  double plus = 0.0;   // κ₊ (modulus) or ρ (one-sided)
  double minus = 0.0;  // κ₋ (modulus), 0 otherwise
  double level = 0.0;  // truncation level L
};

/// Poisson rates of jumps tied with the truncation level L = Π̄^←(v).
TieRates tie_rates(const LevyMeasureSpec& spec, double v, TieMode mode);

}  // namespace levytrim
