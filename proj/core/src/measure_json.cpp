#include "levytrim/measure_json.hpp"

#include "levytrim/catalog.hpp"
#include "levytrim/error.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace levytrim {

namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::vector<std::pair<double, double>> pairs(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ConfigError(std::string("'") + key + "' must be an array of [x, value] pairs");
  }
  std::vector<std::pair<double, double>> out;
  for (const auto& p : j.at(key)) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ConfigError(std::string("'") + key + "' entries must be [x, value]");
    }
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

void check_knots(const std::vector<std::pair<double, double>>& pts) {
  if (pts.empty()) throw ConfigError("table needs at least one knot");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].first > 0.0) || !std::isfinite(pts[i].first)) throw ConfigError("knots need x > 0");
    if (!(pts[i].second >= 0.0) || !std::isfinite(pts[i].second)) {
      throw ConfigError("tail values must be finite and >= 0");
    }
    if (i > 0 && !(pts[i].first > pts[i - 1].first)) throw ConfigError("knots must increase in x");
    if (i > 0 && pts[i].second > pts[i - 1].second) throw ConfigError("tail values must not increase");
  }
}

TailFunction step_table(const std::vector<std::pair<double, double>>& pts) {
  check_knots(pts);
  if (pts.back().second != 0.0) throw ConfigError("step table must end with tail value 0");
  std::vector<Atom> atoms;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double m = pts[i - 1].second - pts[i].second;
    if (m > 0.0) atoms.push_back({pts[i].first, m});
  }
  return TailFunction::from_atoms(atoms);
}

TailFunction loglinear_table(const std::vector<std::pair<double, double>>& pts) {
  check_knots(pts);
  for (const auto& p : pts) {
    if (!(p.second > 0.0)) throw ConfigError("loglinear table needs positive tail values");
  }
  const std::size_t n = pts.size();
  if (n == 1) return TailFunction::from_atoms({{pts[0].first, pts[0].second}});
  std::vector<double> xs(n), ts(n), slope(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = pts[i].first;
    ts[i] = pts[i].second;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    slope[i] = std::log(ts[i] / ts[i + 1]) / std::log(xs[i + 1] / xs[i]);
  }
  const double floor_mass = ts.back();
  auto segment = [xs](double x) {
    std::size_t i = 0;
    while (i + 2 < xs.size() && x >= xs[i + 1]) ++i;
    return i;
  };
  auto piece = [=](double x) {
    const std::size_t i = segment(x);
    return ts[i] * std::pow(x / xs[i], -slope[i]);
  };
  ContinuousTail cont;
  cont.tail = [=](double x) { return std::max(0.0, piece(x) - floor_mass); };
  cont.density = [=](double x) { return slope[segment(x)] * piece(x) / x; };
  cont.total_mass = slope[0] > 0.0 ? kInf : ts[0] - floor_mass;
  cont.support_upper = xs.back();
  if (slope[0] >= 2.0) throw ConfigError("loglinear table is not square-integrable at 0");
  return TailFunction::from_parts(cont, {{xs.back(), floor_mass}});
}

TailFunction parse_tail(const json& j) {
  if (j.is_null()) return TailFunction();
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("tail object needs a string 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "none") return TailFunction();
  if (kind == "powerlaw") {
    const double c = number(j, "c", 1.0);
    const double a = number(j, "alpha", 1.0);
    if (!(c > 0.0) || !(a > 0.0 && a < 2.0)) throw ConfigError("powerlaw needs c > 0, alpha in (0,2)");
    ContinuousTail t;
    t.tail = [=](double x) { return c * std::pow(x, -a); };
    t.density = [=](double y) { return c * a * std::pow(y, -a - 1.0); };
    t.inverse = [=](double v) { return std::pow(v / c, -1.0 / a); };
    t.second_moment_below = [=](double x) { return c * a * std::pow(x, 2.0 - a) / (2.0 - a); };
    t.total_mass = kInf;
    t.support_upper = kInf;
    return TailFunction::from_parts(t);
  }
  if (kind == "atoms") {
    std::vector<Atom> atoms;
    for (const auto& [x, m] : pairs(j, "atoms")) atoms.push_back({x, m});
    return TailFunction::from_atoms(atoms);
  }
  if (kind == "table") {
    const std::string interp = j.value("interpolation", std::string("step"));
    const auto pts = pairs(j, "points");
    if (interp == "step") return step_table(pts);
    if (interp == "loglinear") return loglinear_table(pts);
    throw ConfigError("table interpolation must be 'step' or 'loglinear'");
  }
  throw ConfigError("unknown tail kind '" + kind + "'");
}

LevyMeasureSpec from_document(const json& doc) {
  if (!doc.is_object()) throw ConfigError("measure document must be a JSON object");
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) throw ConfigError("'name' must be a string");
    std::map<std::string, double> params;
    if (doc.contains("params")) {
      if (!doc.at("params").is_object()) throw ConfigError("'params' must be an object");
      for (const auto& [k, v] : doc.at("params").items()) {
        if (!v.is_number()) throw ConfigError("parameter '" + k + "' must be a number");
        params[k] = v.get<double>();
      }
    }
    return catalog(doc.at("name").get<std::string>(), params);
  }
  if (!doc.contains("custom")) throw ConfigError("measure document needs 'name' or 'custom'");
  const json& c = doc.at("custom");
  if (!c.is_object()) throw ConfigError("'custom' must be an object");
  auto spec = LevyMeasureSpec::make("custom", number(c, "gamma", 0.0), number(c, "sigma2", 0.0),
                                    parse_tail(c.value("tail_plus", json())),
                                    parse_tail(c.value("tail_minus", json())));
  if (c.contains("infinite_activity_plus")) {
    spec.infinite_activity_plus = c.at("infinite_activity_plus").get<bool>();
  }
  if (c.contains("infinite_activity_minus")) {
    spec.infinite_activity_minus = c.at("infinite_activity_minus").get<bool>();
  }
  return spec;
}

}  // namespace

LevyMeasureSpec measure_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("measure JSON: ") + e.what());
  }
  try {
    return from_document(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("measure JSON: ") + e.what());
  }
}

LevyMeasureSpec resolve_measure(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return measure_from_json(arg);
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return measure_from_json(ss.str());
  }
  return catalog(arg);
}

}  // namespace levytrim
