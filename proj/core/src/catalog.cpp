#include "levytrim/catalog.hpp"

#include "levytrim/error.hpp"
#include "levytrim/special.hpp"

#include <cmath>
#include <limits>

namespace levytrim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using special::expint_e1;
using special::expint_ei_minus_leading;

std::map<std::string, double> resolve(const CatalogEntry& entry,
                                      const std::map<std::string, double>& given) {
  std::map<std::string, double> out = entry.defaults;
  for (const auto& [k, v] : given) {
    if (!out.count(k)) throw ConfigError("measure '" + entry.name + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw ConfigError("parameter '" + k + "' must be finite");
    out[k] = v;
  }
  return out;
}

ContinuousTail power_tail(double alpha, double c) {
  ContinuousTail t;
  t.tail = [=](double x) { return c * std::pow(x, -alpha); };
  t.density = [=](double y) { return c * alpha * std::pow(y, -alpha - 1.0); };
  t.first_moment = [=](double a, double b) {
    if (alpha == 1.0) return c * std::log(b / a);
    return c * alpha / (1.0 - alpha) * (std::pow(b, 1.0 - alpha) - std::pow(a, 1.0 - alpha));
  };
  t.second_moment_below = [=](double x) {
    return c * alpha * std::pow(x, 2.0 - alpha) / (2.0 - alpha);
  };
  t.inverse = [=](double v) { return std::pow(v / c, -1.0 / alpha); };
  t.total_mass = kInf;
  t.support_upper = kInf;
  return t;
}

ContinuousTail gamma_tail() {
  ContinuousTail t;
  t.tail = [](double x) { return expint_e1(x); };
  t.density = [](double y) { return std::exp(-y) / y; };
  t.first_moment = [](double a, double b) { return -std::exp(-a) * std::expm1(-(b - a)); };
  t.second_moment_below = [](double x) { return special::gamma2_lower(x); };
  t.total_mass = kInf;
  t.support_upper = kInf;
  return t;
}

double log_e_over(double x) { return 1.0 - std::log(x); }

// Density y^{-3} U^{-2}, U = log(e/y), on (0,1). With y = e^{1-U} every integral becomes an
// exponential-integral expression in U.
ContinuousTail log_doa_tail() {
  const double e2 = std::exp(-2.0);
  const double eml2 = expint_ei_minus_leading(2.0);
  ContinuousTail t;
  t.tail = [=](double x) { return 2.0 * e2 * (expint_ei_minus_leading(2.0 * log_e_over(x)) - eml2); };
  t.density = [](double y) {
    const double u = log_e_over(y);
    return 1.0 / (y * y * y * u * u);
  };
  t.first_moment = [](double a, double b) {
    const double ua = (a > 0.0) ? log_e_over(a) : kInf;
    return std::exp(-1.0) * (expint_ei_minus_leading(ua) - expint_ei_minus_leading(log_e_over(b)));
  };
  t.second_moment_below = [](double x) { return x > 0.0 ? 1.0 / log_e_over(x) : 0.0; };
  t.total_mass = kInf;
  t.support_upper = 1.0;
  return t;
}

// Density y^{-2} U^{-2} on (0,1).
ContinuousTail relative_stable_tail() {
  const double eml1 = expint_ei_minus_leading(1.0);
  ContinuousTail t;
  t.tail = [=](double x) { return std::exp(-1.0) * (expint_ei_minus_leading(log_e_over(x)) - eml1); };
  t.density = [](double y) {
    const double u = log_e_over(y);
    return 1.0 / (y * y * u * u);
  };
  t.first_moment = [](double a, double b) {
    const double inv_ua = (a > 0.0) ? 1.0 / log_e_over(a) : 0.0;
    return 1.0 / log_e_over(b) - inv_ua;
  };
  t.second_moment_below = [](double x) {
    if (!(x > 0.0)) return 0.0;
    const double u = log_e_over(x);
    return x * (1.0 / u - special::scaled_expint_e1(u));
  };
  t.total_mass = kInf;
  t.support_upper = 1.0;
  return t;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"symmetric-stable", "symmetric power tails c x^-alpha on both sides", {{"alpha", 1.0}, {"c", 1.0}}},
      {"gamma-type", "two-sided density |y|^-1 e^-|y|", {}},
      {"gamma-subordinator", "density y^-1 e^-y on (0,inf), gamma = 1 - e^-1", {}},
      {"log-doa", "density |y|^-3 log(e/|y|)^-2 on 0<|y|<1", {}},
      {"relative-stable-subordinator", "density y^-2 log(e/y)^-2 on (0,1), gamma = 1", {}},
      {"atomic-comb", "atoms at 2^-k with mass c 2^k, fraction p positive",
       {{"c", 1.0}, {"kmax", 60.0}, {"p", 2.0 / 3.0}, {"alternating", 0.0}}},
      {"gaussian-plus-gamma", "Brownian part sigma2 plus gamma-type jumps", {{"sigma2", 1.0}}},
      {"gaussian", "Brownian motion with drift", {{"sigma2", 1.0}, {"gamma", 0.0}}},
  };
  return entries;
}

LevyMeasureSpec catalog(const std::string& name, const std::map<std::string, double>& params) {
  const CatalogEntry* entry = nullptr;
  for (const auto& e : catalog_entries()) {
    if (e.name == name) entry = &e;
  }
  if (!entry) throw ConfigError("unknown measure '" + name + "'");
  const auto p = resolve(*entry, params);

  LevyMeasureSpec spec;
  if (name == "symmetric-stable") {
    const double alpha = p.at("alpha");
    const double c = p.at("c");
    require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
    require(c > 0.0, "c must be positive");
    const auto side = TailFunction::from_parts(power_tail(alpha, c));
    spec = LevyMeasureSpec::make(name, 0.0, 0.0, side, side);
  } else if (name == "gamma-type") {
    const auto side = TailFunction::from_parts(gamma_tail());
    spec = LevyMeasureSpec::make(name, 0.0, 0.0, side, side);
  } else if (name == "gamma-subordinator") {
    spec = LevyMeasureSpec::make(name, -std::expm1(-1.0), 0.0,
                                 TailFunction::from_parts(gamma_tail()), TailFunction());
  } else if (name == "log-doa") {
    const auto side = TailFunction::from_parts(log_doa_tail());
    spec = LevyMeasureSpec::make(name, 0.0, 0.0, side, side);
  } else if (name == "relative-stable-subordinator") {
    spec = LevyMeasureSpec::make(name, 1.0, 0.0, TailFunction::from_parts(relative_stable_tail()),
                                 TailFunction());
  } else if (name == "atomic-comb") {
    const double c = p.at("c");
    const double kmax = p.at("kmax");
    const double frac = p.at("p");
    const double alt = p.at("alternating");
    require(c > 0.0, "c must be positive");
    require(kmax >= 1.0 && kmax <= 200.0 && kmax == std::floor(kmax), "kmax must be an integer in [1,200]");
    require(frac >= 0.0 && frac <= 1.0, "p must lie in [0,1]");
    require(alt == 0.0 || alt == 1.0, "alternating must be 0 or 1");
    std::vector<Atom> plus;
    std::vector<Atom> minus;
    for (int k = 0; k <= static_cast<int>(kmax); ++k) {
      const double loc = std::ldexp(1.0, -k);
      const double mass = c * std::ldexp(1.0, k);
      const double up = (alt == 1.0) ? (k % 2 == 0 ? 1.0 : 0.0) : frac;
      if (up > 0.0) plus.push_back({loc, mass * up});
      if (up < 1.0) minus.push_back({loc, mass * (1.0 - up)});
    }
    spec = LevyMeasureSpec::make(name, 0.0, 0.0, TailFunction::from_atoms(plus),
                                 TailFunction::from_atoms(minus));
    // A finite comb stands in for the infinite one; its top atom carries mass c 2^kmax.
    spec.infinite_activity_plus = !plus.empty();
    spec.infinite_activity_minus = !minus.empty();
  } else if (name == "gaussian-plus-gamma") {
    const double s2 = p.at("sigma2");
    require(s2 > 0.0, "sigma2 must be positive");
    const auto side = TailFunction::from_parts(gamma_tail());
    spec = LevyMeasureSpec::make(name, 0.0, s2, side, side);
  } else if (name == "gaussian") {
    const double s2 = p.at("sigma2");
    require(s2 >= 0.0, "sigma2 must be >= 0");
    spec = LevyMeasureSpec::make(name, p.at("gamma"), s2, TailFunction(), TailFunction());
  }
  spec.params.assign(p.begin(), p.end());
  return spec;
}

}  // namespace levytrim
