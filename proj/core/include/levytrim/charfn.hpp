#pragma once

#include "levytrim/levy_measure.hpp"
#include "levytrim/pathsim.hpp"

#include <complex>
#include <vector>

namespace levytrim {

using Complex = std::complex<double>;

/// Ψ(θ) = iθγ − σ²θ²/2 + ∫ (e^{iθx} − 1 − iθx 1{|x|≤1}) Π(dx).
Complex psi(const LevyMeasureSpec& spec, double theta);

/// Φ̃(θ, v): exponent of the modulus-truncated process at L = Π̄^←(v) plus the κ± tie terms.
Complex phi_trunc_modulus(const LevyMeasureSpec& spec, double theta, double v);

/// Φ(θ, u, v): asymmetric truncation at L⁺ = Π̄⁺^←(v), L⁻ = Π̄⁻^←(u) plus the ρ± tie terms.
/// A level argument ≤ 0 leaves that side untruncated.
Complex phi_trunc_asymmetric(const LevyMeasureSpec& spec, double theta, double u, double v);

/// E exp(iθ · trimmed X_t) by quadrature of exp(tΦ) against the law of Γ_r/t (and Γ̃_s/t).
Complex charfn_trimmed(const LevyMeasureSpec& spec, double theta, double t, const TrimMode& mode);

/// Probability nodes for E g(Γ_r): 126 equal cells on (0,1) with the two end cells split
/// geometrically. Each node carries its Gamma(r) quantile and cell width.
struct GammaNode {
  double gamma_value;
  double weight;
};
std::vector<GammaNode> gamma_weight_nodes(int r);

}  // namespace levytrim
