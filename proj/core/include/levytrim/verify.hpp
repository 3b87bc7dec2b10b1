#pragma once

#include "levytrim/analysis.hpp"
#include "levytrim/levy_measure.hpp"
#include "levytrim/pathsim.hpp"
#include "levytrim/rng.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace levytrim {

class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  /// Fraction of samples ≤ x.
  double ecdf(double x) const;
  /// p-quantile by the inverse ECDF (lower).
  double quantile(double p) const;

 private:
  std::vector<double> sorted_;
};

/// sup |F_n − F| with both envelopes at each distinct sample; `cdf_left` gives F(x−) and
/// defaults to `cdf` for continuous laws.
double ks_one_sample(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf,
                     const std::function<double(double)>& cdf_left = {});

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// c / √n, the asymptotic one-sample Kolmogorov critical value (c = 1.63 at 99%).
double ks_critical_one_sample(std::size_t n, double c = 1.63);
/// c √((n+m)/(nm)) (c = 1.95 at 99.9%).
double ks_critical_two_sample(std::size_t n, std::size_t m, double c = 1.95);

struct Statistic {
  std::string name;
  double value;
  double threshold;
  std::string relation;  // "<=" or ">="
  bool pass;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct VerificationReport {
  std::string check_name;
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Statistic> statistics;
  std::vector<std::pair<std::string, double>> info;
  std::vector<Table> tables;
  bool pass = true;
  double runtime_ms = 0.0;  // wall clock, kept out of serialized output

  void require_le(const std::string& name, double value, double threshold);
  void require_ge(const std::string& name, double value, double threshold);
  void note(const std::string& name, double value);
};

struct VerifyConfig {
  std::uint64_t seed = 0;
  std::size_t n = 10000;
  int threads = 1;
  SimConfig sim;
  double slack = 1.2;       // multiplier on KS critical values
  double se_factor = 3.0;   // standard errors allowed on inequality checks
  double ks_one_c = 1.63;   // one-sample Kolmogorov constant, 99%
  double ks_two_c = 1.95;   // two-sample constant, 99.9%
};

/// out[i] = f(i, stream_i) with stream_i = Stream(seed, substream_id(purpose, i)); results do not
/// depend on the thread count.
std::vector<double> parallel_draws(std::size_t n, int threads, std::uint64_t seed,
                                   StreamPurpose purpose,
                                   const std::function<double(std::size_t, Stream&)>& f);

/// Two-sample KS between pathwise trimming and the representation sampler.
VerificationReport check_representation(const LevyMeasureSpec& spec, double t,
                                         const TrimMode& mode, const VerifyConfig& cfg);

/// One-sample KS of the pathwise rank-r jump against the incomplete-gamma law, plus the
/// analytic bound sandwich on a 64-point grid.
VerificationReport check_ordered_jump_law(const LevyMeasureSpec& spec, double t, int r, Side side,
                                          const VerifyConfig& cfg);

/// 4 p̂_L + k SE ≥ p_R on an x grid, p̂_L = P(|trimmed − a_t| > x b_t) by simulation and
/// p_R = P(rank-(r+1) jump > 4 x b_t) in closed form.
VerificationReport check_key_inequality(const LevyMeasureSpec& spec, double t,
                                        const TrimMode& mode, std::vector<double> x_grid,
                                        const VerifyConfig& cfg,
                                        NormingMode norming_mode = NormingMode::kAuto);

/// Default 8-point grid for the key inequality: t Π̄(4 x b_t) log-spaced over [0.01, 3].
std::vector<double> key_inequality_grid(const LevyMeasureSpec& spec, double t, double b,
                                        int points = 8);

struct ConvergenceTarget {
  bool degenerate = false;
  double center = 0.0;                              // degenerate limit
  std::vector<double> eta_grid{0.05, 0.1, 0.2, 0.5};
  double eta = 0.2;                                 // graded η
  double max_exceedance = 0.05;                     // P(|S_t − c| > η) bound at the smallest t
  double ks_final = 0.02;                           // normal target: KS at the smallest t
  double ks_noise = 0.005;                          // allowed increase between grid points
};

/// S_t = (X_t − a_t)/b_t along a decreasing t grid, trimmed and untrimmed, with common random
/// numbers across t.
VerificationReport convergence_study(const LevyMeasureSpec& spec, const TrimMode& mode,
                                     const std::vector<double>& t_grid, const VerifyConfig& cfg,
                                     const ConvergenceTarget& target = {},
                                     NormingMode norming_mode = NormingMode::kAuto);

/// Medians and interquartile ranges of V_t / b_t² and its trimmed version along t.
VerificationReport check_qv_convergence(const LevyMeasureSpec& spec, const TrimMode& mode,
                                        const std::vector<double>& t_grid,
                                        const VerifyConfig& cfg,
                                        NormingMode norming_mode = NormingMode::kAuto);

/// Quadrature characteristic function against the ECF of representation samples.
VerificationReport check_charfn(const LevyMeasureSpec& spec, double t, const TrimMode& mode,
                                const std::vector<double>& theta_grid, const VerifyConfig& cfg,
                                double tolerance = 0.02);

/// |φ| ≤ 1, φ(0) = 1 and conjugate symmetry on a θ grid, no sampling.
VerificationReport check_charfn_invariants(const LevyMeasureSpec& spec, double t,
                                           const TrimMode& mode,
                                           const std::vector<double>& theta_grid);

/// Agreement of both sides of the quadratic-variation identities at the given (x, t) pairs.
VerificationReport check_qv_equivalence(const LevyMeasureSpec& spec,
                                        const std::vector<std::pair<double, double>>& xt,
                                        double tolerance = 1e-8);

/// n equally spaced points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace levytrim
