#pragma once

#include "levytrim/levy_measure.hpp"
#include "levytrim/pathsim.hpp"
#include "levytrim/rng.hpp"

namespace levytrim {

/// Triplet of the process with the jumps at and above the truncation levels removed, together
/// with the Poisson rates of jumps tied at the levels.
struct TruncatedTriplet {
  bool modulus = false;
  double shifted_gamma = 0.0;
  double sigma2 = 0.0;
  TailFunction tail_plus;   // Π⁺ restricted to (0, L⁺)
  TailFunction tail_minus;  // Π⁻ restricted to (0, L⁻)
  TailFunction tail_abs;
  double level_plus = 0.0;  // L⁺ (or L for modulus); +inf when that side is untruncated
  double level_minus = 0.0;
  double tie_plus = 0.0;    // κ₊(v) or ρ₊(v)
  double tie_minus = 0.0;   // κ₋(v) or ρ₋(u)

  /// The truncated process as a measure spec, ready for the path simulator.
  LevyMeasureSpec as_spec() const;
};

/// Modulus truncation at L = Π̄^←(v).
TruncatedTriplet truncated_triplet_modulus(const LevyMeasureSpec& spec, double v);

/// Asymmetric truncation at L⁺ = Π̄⁺^←(v), L⁻ = Π̄⁻^←(u). A level argument ≤ 0 leaves that side
/// untruncated.
TruncatedTriplet truncated_triplet_asymmetric(const LevyMeasureSpec& spec, double u, double v);

/// Π̄^←(Γ_r / t) on the requested side: the r-th largest jump (in modulus for kModulus), 0 when
/// a finite-activity side has fewer than r jumps.
double sample_ordered_jump(const LevyMeasureSpec& spec, double t, int r, Side side, Stream& rng);

/// P(rank-(r+1) jump > y) = P(Γ_{r+1} < t Π̄(y)).
double ordered_jump_cdf(const LevyMeasureSpec& spec, double t, int r, double y, Side side);

/// Same with Π̄(y−): P(rank-(r+1) jump ≥ y).
double ordered_jump_cdf_left(const LevyMeasureSpec& spec, double t, int r, double y, Side side);

/// P(Γ_{r+1} < λ) and the bounds e^{-λ} λ^{r+1}/(r+1)! ≤ · ≤ λ^{r+1}/(r+1)!.
struct OrderedJumpBounds {
  double lower;
  double value;
  double upper;
};
OrderedJumpBounds ordered_jump_bounds(int r, double lambda);

struct RepresentationSample {
  double value = 0.0;
  double level_plus = 0.0;   // Π̄⁺^←(Γ_r/t), or Π̄^←(Γ_r/t) in modulus mode; 0 if r = 0
  double level_minus = 0.0;  // Π̄⁻^←(Γ̃_s/t); 0 if s = 0
};

/// Draws the trimmed value through the truncated process plus tie terms, jointly with the
/// ordered-jump levels. The truncated process is simulated with ε = min(default, L/100).
RepresentationSample joint_sample_trimmed_with_jump(const LevyMeasureSpec& spec, double t,
                                                    const TrimMode& mode, const SimConfig& config,
                                                    Stream& rng);

double sample_trimmed_rep(const LevyMeasureSpec& spec, double t, const TrimMode& mode,
                          const SimConfig& config, Stream& rng);

}  // namespace levytrim
