#include "levytrim/pathsim.hpp"

#include "levytrim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace levytrim {

namespace {

struct Selection {
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
  std::vector<std::size_t> modulus;
  int pad_positive = 0;
  int pad_negative = 0;
  int pad_modulus = 0;
};

// Indices of the k largest entries under `key`, ties to the earlier arrival. `idx` is in time
// order on entry.
template <class Key>
std::vector<std::size_t> top_k(std::vector<std::size_t> idx, std::size_t k, Key key) {
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double ka = key(a);
                      const double kb = key(b);
                      if (ka != kb) return ka > kb;
                      return a < b;
                    });
  idx.resize(k);
  return idx;
}

int check_count(std::size_t have, int want, bool exhaustive, const char* side) {
  if (have >= static_cast<std::size_t>(want)) return 0;
  if (exhaustive) return want - static_cast<int>(have);
  throw InsufficientResolution(std::string("only ") + std::to_string(have) + " resolved " + side +
                               " jumps for trimming order " + std::to_string(want) +
                               "; lower epsilon");
}

Selection select(const PathSample& path, const TrimMode& mode) {
  if (mode.r < 0 || mode.s < 0) throw ContractError("trimming orders must be >= 0");
  Selection sel;
  const auto& j = path.jumps;
  if (mode.is_modulus()) {
    if (mode.r == 0) return sel;
    if (!path.infinite_activity_plus && !path.infinite_activity_minus) {
      throw ContractError("modulus trimming needs infinite activity");
    }
    std::vector<std::size_t> all(j.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    sel.pad_modulus = check_count(all.size(), mode.r, path.exhaustive, "");
    sel.modulus = top_k(std::move(all), static_cast<std::size_t>(mode.r),
                        [&](std::size_t i) { return std::abs(j[i].size); });
    return sel;
  }
  if (mode.r > 0 && !path.infinite_activity_plus) {
    throw ContractError("cannot trim positive jumps of a finite-activity side");
  }
  if (mode.s > 0 && !path.infinite_activity_minus) {
    throw ContractError("cannot trim negative jumps of a finite-activity side");
  }
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < j.size(); ++i) (j[i].size > 0.0 ? pos : neg).push_back(i);
  if (mode.r > 0) {
    sel.pad_positive = check_count(pos.size(), mode.r, path.exhaustive, "positive");
    sel.positive = top_k(std::move(pos), static_cast<std::size_t>(mode.r),
                         [&](std::size_t i) { return j[i].size; });
  }
  if (mode.s > 0) {
    sel.pad_negative = check_count(neg.size(), mode.s, path.exhaustive, "negative");
    sel.negative = top_k(std::move(neg), static_cast<std::size_t>(mode.s),
                         [&](std::size_t i) { return -j[i].size; });
  }
  return sel;
}

}  // namespace

double PathSample::value() const {
  double sum = 0.0;
  for (const auto& jump : jumps) sum += jump.size;
  return drift_part + gaussian_part + small_aggregate + sum;
}

std::string TrimMode::label() const {
  if (is_modulus()) return "modulus(" + std::to_string(r) + ")";
  if (r == 0 && s > 0) return "one-sided(s=" + std::to_string(s) + ")";
  if (s == 0 && r > 0) return "one-sided(r=" + std::to_string(r) + ")";
  return "asymmetric(" + std::to_string(r) + "," + std::to_string(s) + ")";
}

double default_epsilon(const LevyMeasureSpec& spec, double t, const SimConfig& config) {
  const double target =
      std::max(config.min_resolved, 50.0 * (config.trim_orders + 1));
  if (spec.tail_abs.is_zero()) return kEpsilonFloor;
  const double eps = spec.tail_abs.inverse(target / t);
  if (eps == 0.0) return 0.0;  // finite activity with fewer expected jumps: resolve all
  return std::max(eps, kEpsilonFloor);
}

PathSimulator::PathSimulator(const LevyMeasureSpec& spec, double t, const SimConfig& config)
    : spec_(spec), t_(t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ContractError("time horizon must be positive");
  epsilon_ = config.epsilon > 0.0 ? config.epsilon : default_epsilon(spec, t, config);
  rate_plus_ = spec.tail_plus.evaluate(epsilon_);
  rate_minus_ = spec.tail_minus.evaluate(epsilon_);
  const double expected = t * (rate_plus_ + rate_minus_);
  if (!(expected <= config.count_budget)) {
    throw ResolutionError("expected resolved-jump count " + detail::short_number(expected) +
                          " exceeds the budget " + detail::short_number(config.count_budget) +
                          "; choose a larger epsilon");
  }
  const auto& p = spec.tail_plus;
  const auto& m = spec.tail_minus;
  if (epsilon_ < 1.0) {
    drift_ = spec.gamma * t - t * (p.first_moment(epsilon_, 1.0) - m.first_moment(epsilon_, 1.0));
  } else {
    // Resolution above 1: jumps in (1, ε] are part of the uncompensated small aggregate.
    drift_ = spec.gamma * t + t * (p.first_moment(1.0, epsilon_) - m.first_moment(1.0, epsilon_));
  }
  small_variance_ = t * (p.second_moment_below(epsilon_) + m.second_moment_below(epsilon_));
}

PathSample PathSimulator::sample(Stream& rng) const {
  PathSample path;
  path.horizon = t_;
  path.epsilon = epsilon_;
  path.sigma2 = spec_.sigma2;
  path.small_variance = small_variance_;
  path.drift_part = drift_;
  path.infinite_activity_plus = spec_.infinite_activity_plus;
  path.infinite_activity_minus = spec_.infinite_activity_minus;
  path.exhaustive = epsilon_ <= kEpsilonFloor;

  // Series representation: the k-th largest jump on a side is Π̄^←(Γ_k / t), Γ_k the arrival
  // times of a unit Poisson process; those with Γ_k < t Π̄(ε) are exactly the jumps above ε.
  auto side = [&](const TailFunction& tail, double rate, double sign) {
    const double bound = t_ * rate;
    if (!(bound > 0.0)) return;
    const std::size_t start = path.jumps.size();
    for (double g = rng.exponential(); g < bound; g += rng.exponential()) {
      path.jumps.push_back({0.0, sign * tail.inverse(g / t_)});
    }
    for (std::size_t i = start; i < path.jumps.size(); ++i) path.jumps[i].time = t_ * rng.uniform();
  };
  side(spec_.tail_plus, rate_plus_, 1.0);
  side(spec_.tail_minus, rate_minus_, -1.0);
  std::sort(path.jumps.begin(), path.jumps.end(),
            [](const Jump& a, const Jump& b) { return a.time < b.time; });

  const double z_gauss = rng.normal();
  const double z_small = rng.normal();
  path.gaussian_part = std::sqrt(spec_.sigma2 * t_) * z_gauss;
  path.small_aggregate = std::sqrt(small_variance_) * z_small;
  return path;
}

PathSample simulate_path(const LevyMeasureSpec& spec, double t, const SimConfig& config,
                         Stream& rng) {
  return PathSimulator(spec, t, config).sample(rng);
}

TrimResult trim(const PathSample& path, const TrimMode& mode) {
  const Selection sel = select(path, mode);
  TrimResult out;
  out.mode = mode;
  out.untrimmed_value = path.value();
  double removed = 0.0;
  for (auto i : sel.positive) {
    out.removed_positive.push_back(path.jumps[i].size);
    removed += path.jumps[i].size;
  }
  out.removed_positive.resize(out.removed_positive.size() + sel.pad_positive, 0.0);
  for (auto i : sel.negative) {
    out.removed_negative.push_back(-path.jumps[i].size);
    removed += path.jumps[i].size;
  }
  out.removed_negative.resize(out.removed_negative.size() + sel.pad_negative, 0.0);
  for (auto i : sel.modulus) {
    out.removed_modulus.push_back(path.jumps[i].size);
    removed += path.jumps[i].size;
  }
  out.removed_modulus.resize(out.removed_modulus.size() + sel.pad_modulus, 0.0);
  out.trimmed_value = out.untrimmed_value - removed;
  return out;
}

QuadraticVariation quadratic_variation(const PathSample& path, const TrimMode& mode) {
  const Selection sel = select(path, mode);
  std::vector<char> gone(path.jumps.size(), 0);
  for (auto i : sel.positive) gone[i] = 1;
  for (auto i : sel.negative) gone[i] = 1;
  for (auto i : sel.modulus) gone[i] = 1;
  const double base = path.sigma2 * path.horizon + path.small_variance;
  double all = 0.0;
  double kept = 0.0;
  for (std::size_t i = 0; i < path.jumps.size(); ++i) {
    const double sq = path.jumps[i].size * path.jumps[i].size;
    all += sq;
    if (!gone[i]) kept += sq;
  }
  return {base + all, base + kept};
}

}  // namespace levytrim
