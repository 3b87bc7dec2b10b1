#include "levytrim_cli/cli.hpp"

#include "levytrim_cli/suite.hpp"

#include "levytrim/analysis.hpp"
#include "levytrim/catalog.hpp"
#include "levytrim/error.hpp"
#include "levytrim/measure_json.hpp"
#include "levytrim/pathsim.hpp"
#include "levytrim/report_io.hpp"
#include "levytrim/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string_view>
#include <thread>

namespace levytrim::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string measure;
  double t = 0.1;
  std::vector<double> t_grid;
  std::vector<double> x_grid;
  int r = 0;
  int s = 0;
  bool modulus = false;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  CLI::Option* seed_opt = nullptr;
  int threads = 0;
  std::string out = "levytrim-out";
  double eps = 0.0;
  double count_budget = 2e6;
  double min_resolved = 500.0;
  bool dump_paths = false;
  double x_decades = 9.0;
  double describe_decades = 12.0;
  double x_hi = 1.0;
  int per_decade = 8;
  std::string norming = "auto";
  std::string side = "plus";
  double slack = 1.2;
  double se_factor = 3.0;
  double tolerance = 0.02;
  double qv_tolerance = 1e-8;
  double theta_lo = -5.0;
  double theta_hi = 5.0;
  int theta_points = 41;
  bool degenerate = false;
  double center = 0.0;
  double eta = 0.2;
  double max_exceedance = 0.05;
  double ks_final = 0.02;
  double ks_noise = 0.005;
  std::vector<int> criteria;
};

int default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed_opt && o.seed_opt->count() > 0) return o.seed;
  if (const char* env = std::getenv("LEVYTRIM_SEED"); env && *env) {
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError(std::string("LEVYTRIM_SEED is not an unsigned integer: ") + env);
    }
    return v;
  }
  return o.seed;
}

TrimMode resolve_mode(const Options& o) {
  if (o.r < 0 || o.s < 0) throw ConfigError("trimming orders must be nonnegative");
  if (o.modulus) {
    if (o.s != 0) throw ConfigError("--modulus trims by absolute value and takes only --r");
    return TrimMode::modulus(o.r);
  }
  return TrimMode::asymmetric(o.r, o.s);
}

NormingMode resolve_norming(const std::string& name) {
  if (name == "auto") return NormingMode::kAuto;
  if (name == "normal") return NormingMode::kNormalDOA;
  if (name == "relative-stability") return NormingMode::kRelativeStability;
  if (name == "weak-derivative") return NormingMode::kWeakDerivative;
  throw ConfigError("unknown norming mode: " + name);
}

Side resolve_side(const std::string& name) {
  if (name == "plus") return Side::kPlus;
  if (name == "minus") return Side::kMinus;
  if (name == "modulus") return Side::kModulus;
  throw ConfigError("unknown side: " + name);
}

void require_n(const Options& o, std::size_t minimum) {
  if (o.n < minimum) {
    throw ConfigError("--n must be at least " + std::to_string(minimum) + ", got " +
                      std::to_string(o.n));
  }
}

void require_positive(double v, const char* flag) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(flag) + " must be positive");
}

void require_grid(const std::vector<double>& g, const char* flag) {
  if (g.empty()) throw ConfigError(std::string(flag) + " is empty");
  for (double v : g) require_positive(v, flag);
}

SimConfig sim_config(const Options& o, const TrimMode& mode) {
  SimConfig c;
  if (o.eps < 0.0) throw ConfigError("--eps must be nonnegative");
  c.epsilon = o.eps;
  require_positive(o.count_budget, "--count-budget");
  c.count_budget = o.count_budget;
  c.min_resolved = o.min_resolved;
  c.trim_orders = mode.total_orders();
  return c;
}

VerifyConfig verify_config(const Options& o, const TrimMode& mode) {
  VerifyConfig c;
  c.seed = resolve_seed(o);
  c.n = o.n;
  c.threads = o.threads <= 0 ? default_threads() : o.threads;
  c.sim = sim_config(o, mode);
  c.slack = o.slack;
  c.se_factor = o.se_factor;
  return c;
}

std::string summary_line(const VerificationReport& rep) {
  std::ostringstream line;
  line << (rep.pass ? "PASS " : "FAIL ") << rep.check_name;
  std::string sep = " [";
  for (const auto& [k, v] : rep.config) {
    if (k == "measure" || k == "t" || k == "mode" || k == "rank" || k == "side" || k == "t_grid") {
      line << sep << k << "=" << v;
      sep = " ";
    }
  }
  if (sep == " ") line << "]";
  line << ":";
  for (const auto& s : rep.statistics) {
    line << " " << s.name << "=" << detail::short_number(s.value) << (s.pass ? "" : "!") << s.relation
         << detail::short_number(s.threshold);
  }
  return line.str();
}

// Writes the report array and one CSV per table; returns the exit code.
int emit_reports(const std::vector<VerificationReport>& reports, const std::string& stem,
                 const Options& o, std::ostream& out) {
  const fs::path dir(o.out);
  write_file_atomic(dir / (stem + ".json"), reports_to_json(reports));
  std::set<std::string> used;
  for (const auto& rep : reports) {
    for (const auto& table : rep.tables) {
      std::string name = stem + "-" + table.name;
      for (int k = 2; used.count(name); ++k) name = stem + "-" + table.name + "-" + std::to_string(k);
      used.insert(name);
      write_file_atomic(dir / (name + ".csv"), table_to_csv(table));
    }
  }
  bool pass = true;
  for (const auto& rep : reports) {
    out << summary_line(rep) << "\n";
    pass = pass && rep.pass;
  }
  return pass ? kExitOk : kExitCheckFailed;
}

nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

// ---------------------------------------------------------------------------------------------

int cmd_measure_list(std::ostream& out) {
  for (const auto& e : catalog_entries()) {
    std::string params;
    for (const auto& [k, v] : e.defaults) {
      params += (params.empty() ? "" : ",") + k + "=" + format_double(v);
    }
    out << e.name << "\t" << e.description;
    if (!params.empty()) out << "\t[" << params << "]";
    out << "\n";
  }
  return kExitOk;
}

int cmd_measure_describe(const Options& o, std::ostream& out) {
  const auto spec = resolve_measure(o.measure);
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : spec.params) j["params"][k] = v;
  j["gamma"] = spec.gamma;
  j["sigma2"] = spec.sigma2;
  j["infinite_activity"] = {{"plus", spec.infinite_activity_plus},
                            {"minus", spec.infinite_activity_minus}};
  j["total_mass"] = {{"plus", number_or_null(spec.tail_plus.total_mass())},
                     {"minus", number_or_null(spec.tail_minus.total_mass())}};
  j["atoms"] = {{"plus", spec.tail_plus.atoms().size()}, {"minus", spec.tail_minus.atoms().size()}};
  j["support_upper"] = number_or_null(spec.tail_abs.support_upper());
  try {
    const auto c = classify_small_time(spec, decade_grid(o.x_hi, o.describe_decades, o.per_decade));
    j["small_time"] = label_name(c.label);
  } catch (const InconsistentMeasure&) {
    j["small_time"] = nullptr;
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

struct SimRow {
  double untrimmed = 0.0;
  double trimmed = 0.0;
  double qv = 0.0;
  double qv_trimmed = 0.0;
  double resolved = 0.0;
  std::vector<Jump> jumps;
};

int cmd_simulate(const Options& o, std::ostream& out) {
  if (o.n < 1) throw ConfigError("--n must be at least 1");
  require_positive(o.t, "--t");
  const auto spec = resolve_measure(o.measure);
  const TrimMode mode = resolve_mode(o);
  const VerifyConfig cfg = verify_config(o, mode);
  const PathSimulator sim(spec, o.t, cfg.sim);
  std::vector<SimRow> rows(o.n);
  parallel_draws(o.n, cfg.threads, cfg.seed, StreamPurpose::kPath,
                 [&](std::size_t i, Stream& rng) {
                   PathSample path = sim.sample(rng);
                   const TrimResult tr = trim(path, mode);
                   const QuadraticVariation qv = quadratic_variation(path, mode);
                   SimRow& row = rows[i];
                   row.untrimmed = tr.untrimmed_value;
                   row.trimmed = tr.trimmed_value;
                   row.qv = qv.total;
                   row.qv_trimmed = qv.trimmed;
                   row.resolved = static_cast<double>(path.jumps.size());
                   if (o.dump_paths) row.jumps = std::move(path.jumps);
                   return 0.0;
                 });
  Table table{"simulate", {"sample", "untrimmed", "trimmed", "qv", "qv_trimmed", "resolved_jumps"}, {}};
  Table paths{"paths", {"sample", "time", "size"}, {}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double idx = static_cast<double>(i);
    table.rows.push_back({idx, r.untrimmed, r.trimmed, r.qv, r.qv_trimmed, r.resolved});
    for (const auto& j : r.jumps) paths.rows.push_back({idx, j.time, j.size});
  }
  const fs::path dir(o.out);
  write_file_atomic(dir / "simulate.csv", table_to_csv(table));
  if (o.dump_paths) write_file_atomic(dir / "paths.csv", table_to_csv(paths));
  out << "simulate: " << o.n << " paths of " << spec.name << " at t=" << format_double(o.t) << ", "
      << mode.label() << ", epsilon " << detail::short_number(sim.epsilon()) << " -> "
      << (dir / "simulate.csv").string() << (o.dump_paths ? " (+ paths.csv)" : "") << "\n";
  return kExitOk;
}

ConvergenceTarget convergence_target(const Options& o) {
  ConvergenceTarget target;
  target.degenerate = o.degenerate;
  target.center = o.center;
  target.eta = o.eta;
  target.max_exceedance = o.max_exceedance;
  target.ks_final = o.ks_final;
  target.ks_noise = o.ks_noise;
  return target;
}

int cmd_trim_study(const Options& o, std::ostream& out) {
  require_n(o, 100);
  require_grid(o.t_grid, "--t-grid");
  const auto spec = resolve_measure(o.measure);
  const TrimMode mode = resolve_mode(o);
  const auto rep = convergence_study(spec, mode, o.t_grid, verify_config(o, mode),
                                     convergence_target(o), resolve_norming(o.norming));
  emit_reports({rep}, "trim-study", o, out);
  // A study reports evidence; only bad input fails the command.
  return kExitOk;
}

int cmd_doa(const Options& o, std::ostream& out) {
  require_positive(o.x_hi, "--x-hi");
  require_positive(o.x_decades, "--x-decades");
  const auto spec = resolve_measure(o.measure);
  const auto c = classify_small_time(spec, decade_grid(o.x_hi, o.x_decades, o.per_decade));
  Table table{"doa", {"x", "ratio", "x_tail", "nu", "rs_ratio"}, {}};
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    table.rows.push_back({c.grid[i], c.ratio[i], c.x_tail[i], c.nu[i], c.rs_ratio[i]});
  }
  const fs::path file = fs::path(o.out) / "doa.csv";
  write_file_atomic(file, table_to_csv(table));
  out << "doa: " << label_name(c.label);
  if (c.label == SmallTimeLabel::kWeakDerivative) out << " (delta " << detail::short_number(c.delta) << ")";
  out << " for " << spec.name << " over " << format_double(o.x_decades) << " decades below "
      << format_double(o.x_hi) << " -> " << file.string() << "\n";
  return kExitOk;
}

int cmd_norming(const Options& o, std::ostream& out) {
  require_grid(o.t_grid, "--t-grid");
  require_grid(o.x_grid, "--x-grid");
  const auto spec = resolve_measure(o.measure);
  const NormingMode mode = resolve_norming(o.norming);
  std::vector<NormingPoint> points;
  std::string csv = csv_line({"t", "b_t", "a_t", "construction"});
  for (double t : o.t_grid) {
    points.push_back(norming(spec, t, mode));
    const auto& p = points.back();
    csv += csv_line({format_double(p.t), format_double(p.b), format_double(p.a),
                     norming_mode_name(p.construction)});
  }
  const auto k = kallenberg_diagnostic(spec, points, o.x_grid);
  Table limits{"kallenberg", {"t", "x", "tail_plus", "tail_minus", "v_limit", "centering"}, {}};
  for (std::size_t i = 0; i < k.t_grid.size(); ++i) {
    for (std::size_t j = 0; j < k.x_grid.size(); ++j) {
      limits.rows.push_back({k.t_grid[i], k.x_grid[j], k.tail_limit_plus[i][j],
                             k.tail_limit_minus[i][j], k.v_limit[i][j], k.centering_limit[i]});
    }
  }
  const fs::path dir(o.out);
  write_file_atomic(dir / "norming.csv", csv);
  write_file_atomic(dir / "kallenberg.csv", table_to_csv(limits));
  out << "norming: " << points.size() << " points for " << spec.name << ", construction "
      << norming_mode_name(points.front().construction) << " -> " << (dir / "norming.csv").string()
      << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& which, const Options& o, std::ostream& out) {
  require_n(o, 100);
  const auto spec = resolve_measure(o.measure);
  const TrimMode mode = resolve_mode(o);
  const VerifyConfig cfg = verify_config(o, mode);
  std::vector<VerificationReport> reports;
  if (which == "rep") {
    require_positive(o.t, "--t");
    reports.push_back(check_representation(spec, o.t, mode, cfg));
  } else if (which == "jumps") {
    require_positive(o.t, "--t");
    reports.push_back(check_ordered_jump_law(spec, o.t, o.r, resolve_side(o.side), cfg));
  } else if (which == "inequality") {
    require_positive(o.t, "--t");
    for (double x : o.x_grid) require_positive(x, "--x-grid");
    reports.push_back(
        check_key_inequality(spec, o.t, mode, o.x_grid, cfg, resolve_norming(o.norming)));
  } else if (which == "charfn") {
    require_positive(o.t, "--t");
    const auto grid = linear_grid(o.theta_lo, o.theta_hi, o.theta_points);
    reports.push_back(check_charfn(spec, o.t, mode, grid, cfg, o.tolerance));
    reports.push_back(check_charfn_invariants(spec, o.t, mode, grid));
  } else if (which == "convergence") {
    require_grid(o.t_grid, "--t-grid");
    reports.push_back(convergence_study(spec, mode, o.t_grid, cfg, convergence_target(o),
                                        resolve_norming(o.norming)));
  } else {
    require_grid(o.t_grid, "--t-grid");
    require_grid(o.x_grid, "--x-grid");
    std::vector<std::pair<double, double>> xt;
    for (double t : o.t_grid) {
      for (double x : o.x_grid) xt.emplace_back(x, t);
    }
    reports.push_back(
        check_qv_convergence(spec, mode, o.t_grid, cfg, resolve_norming(o.norming)));
    reports.push_back(check_qv_equivalence(spec, xt, o.qv_tolerance));
  }
  return emit_reports(reports, "verify-" + which, o, out);
}

int cmd_all(const Options& o, std::ostream& out) {
  SuiteOptions so;
  so.seed = resolve_seed(o);
  so.threads = o.threads <= 0 ? default_threads() : o.threads;
  so.work_dir = fs::path(o.out) / "determinism";
  std::vector<int> ids = o.criteria;
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  }
  std::vector<VerificationReport> reports;
  std::string csv = csv_line({"criterion", "title", "pass"});
  bool pass = true;
  for (int id : ids) {
    auto res = run_criterion(id, so);
    out << "criterion " << id << " " << (res.pass ? "PASS" : "FAIL") << " " << res.title << ": "
        << res.detail << "\n";
    csv += csv_line({std::to_string(id), res.title, res.pass ? "true" : "false"});
    pass = pass && res.pass;
    for (auto& rep : res.reports) reports.push_back(std::move(rep));
  }
  write_file_atomic(fs::path(o.out) / "all.json", reports_to_json(reports));
  write_file_atomic(fs::path(o.out) / "all-summary.csv", csv);
  return pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------------------------
// Flag groups

void add_measure(CLI::App* app, Options& o) {
  app->add_option("--measure,-m", o.measure, "catalog id, inline JSON or path to a JSON file")
      ->required();
}

void add_out(CLI::App* app, Options& o) {
  app->add_option("--out,-o", o.out, "output directory");
}

void add_mode(CLI::App* app, Options& o) {
  app->add_option("--r", o.r, "positive trimming order (modulus order with --modulus)");
  app->add_option("--s", o.s, "negative trimming order");
  app->add_flag("--modulus", o.modulus, "trim the r largest jumps in absolute value");
}

void add_sim(CLI::App* app, Options& o) {
  app->add_option("--eps", o.eps, "jump resolution cutoff, 0 = default rule");
  app->add_option("--count-budget", o.count_budget, "maximum expected resolved jumps per path");
  app->add_option("--min-resolved", o.min_resolved, "default rule: expected jumps above the cutoff");
}

void add_tolerances(CLI::App* app, Options& o) {
  app->add_option("--slack", o.slack, "multiplier on KS critical values");
  app->add_option("--se-factor", o.se_factor, "standard errors allowed on inequality checks");
}

void add_convergence(CLI::App* app, Options& o) {
  app->add_option("--norming", o.norming, "auto|normal|relative-stability|weak-derivative");
  app->add_flag("--degenerate", o.degenerate, "test a degenerate limit instead of the normal");
  app->add_option("--center", o.center, "degenerate limit");
  app->add_option("--eta", o.eta, "degenerate check: band half-width");
  app->add_option("--max-exceedance", o.max_exceedance,
                  "degenerate check: bound on P(|S_t - center| > eta) at the smallest t");
  app->add_option("--ks-final", o.ks_final, "normal check: KS bound at the smallest t");
  app->add_option("--ks-noise", o.ks_noise, "normal check: allowed KS increase along t");
}

// Grid defaults live in the help text only; an empty list prints as "{}".
std::vector<double> default_list(const CLI::Option* opt) {
  std::string text = opt->get_default_str();
  text.erase(std::remove_if(text.begin(), text.end(), [](char ch) { return std::string_view("[]{}").find(ch) != std::string_view::npos; }),
             text.end());
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) v.push_back(std::stod(item));
  }
  return v;
}

struct Command {
  CLI::App* app;
  std::function<int()> handler;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"levytrim: trimmed Levy processes, simulation and small-time verification",
               "levytrim"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  std::vector<Command> commands;
  std::vector<std::pair<CLI::App*, CLI::Option*>> seed_options;
  auto seeded = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "worker threads, 0 = available parallelism");
    seed_options.emplace_back(
        sub, sub->add_option("--seed", o.seed, "random seed (falls back to $LEVYTRIM_SEED, then 1)"));
  };

  auto* measure = app.add_subcommand("measure", "browse the measure catalog");
  measure->require_subcommand(1);
  auto* list = measure->add_subcommand("list", "list catalog ids with their default parameters");
  commands.push_back({list, [&] { return cmd_measure_list(out); }});
  auto* describe = measure->add_subcommand("describe", "print a measure as JSON");
  add_measure(describe, o);
  describe->add_option("--x-decades", o.describe_decades, "decades for the small-time label");
  commands.push_back({describe, [&] { return cmd_measure_describe(o, out); }});

  auto* simulate = app.add_subcommand("simulate", "sample paths and write their trimmed values");
  add_measure(simulate, o);
  simulate->add_option("--t", o.t, "time horizon");
  simulate->add_option("--n", o.n, "number of paths")->default_str("1000");
  add_mode(simulate, o);
  add_sim(simulate, o);
  seeded(simulate);
  add_out(simulate, o);
  simulate->add_flag("--dump-paths", o.dump_paths, "also write every resolved jump to paths.csv");
  commands.push_back({simulate, [&] { return cmd_simulate(o, out); }});

  auto* study = app.add_subcommand("trim-study", "convergence of (X_t - a_t)/b_t along a t grid");
  add_measure(study, o);
  study->add_option("--t-grid", o.t_grid, "decreasing horizons")
      ->delimiter(',')
      ->default_str("0.1,0.01,0.001");
  study->add_option("--n", o.n, "paths per horizon (>= 100)")->default_str("20000");
  add_mode(study, o);
  add_convergence(study, o);
  add_sim(study, o);
  seeded(study);
  add_out(study, o);
  commands.push_back({study, [&] { return cmd_trim_study(o, out); }});

  auto* doa = app.add_subcommand("doa", "small-time classification from the truncated moments");
  add_measure(doa, o);
  doa->add_option("--x-decades", o.x_decades, "decades of the x grid");
  doa->add_option("--x-hi", o.x_hi, "largest x");
  doa->add_option("--per-decade", o.per_decade, "grid points per decade");
  add_out(doa, o);
  commands.push_back({doa, [&] { return cmd_doa(o, out); }});

  auto* norm = app.add_subcommand("norming", "norming constants a_t, b_t and their limits");
  add_measure(norm, o);
  norm->add_option("--t-grid", o.t_grid, "horizons")
      ->delimiter(',')
      ->default_str("0.1,0.01,0.001,0.0001,1e-05,1e-06");
  norm->add_option("--x-grid", o.x_grid, "levels x for t Pi(x b_t) and t V(x b_t)/b_t^2")
      ->delimiter(',')
      ->default_str("0.5,1,2");
  norm->add_option("--norming", o.norming, "auto|normal|relative-stability|weak-derivative");
  add_out(norm, o);
  commands.push_back({norm, [&] { return cmd_norming(o, out); }});

  auto* verify = app.add_subcommand("verify", "Monte Carlo and analytic checks");
  verify->require_subcommand(1);
  struct VerifySpec {
    const char* name;
    const char* help;
    const char* n;
  };
  const VerifySpec verifies[] = {
      {"rep", "pathwise trimming against the representation sampler (two-sample KS)", "50000"},
      {"jumps", "rank-r jump against its closed-form law (--r is the rank)", "100000"},
      {"inequality", "4 P(|trimmed - a_t| > x b_t) against P(rank-(r+1) jump > 4 x b_t)", "100000"},
      {"charfn", "quadrature characteristic function against the ECF", "100000"},
      {"convergence", "(X_t - a_t)/b_t along a t grid, trimmed and untrimmed", "20000"},
      {"qv", "quadratic variation: trimmed against untrimmed, and the tail identities", "10000"},
  };
  for (const auto& v : verifies) {
    auto* sub = verify->add_subcommand(v.name, v.help);
    add_measure(sub, o);
    const std::string name = v.name;
    if (name == "convergence" || name == "qv") {
      sub->add_option("--t-grid", o.t_grid, "decreasing horizons")
          ->delimiter(',')
          ->default_str("0.1,0.01,0.001");
    } else {
      sub->add_option("--t", o.t, "time horizon");
    }
    sub->add_option("--n", o.n, "samples (>= 100)")->default_str(v.n);
    add_mode(sub, o);
    if (name == "jumps") sub->add_option("--side", o.side, "plus|minus|modulus");
    if (name == "inequality") {
      sub->add_option("--x-grid", o.x_grid, "levels x (empty: 8 points chosen from the tail)")
          ->delimiter(',');
      sub->add_option("--norming", o.norming, "auto|normal|relative-stability|weak-derivative");
    }
    if (name == "charfn") {
      sub->add_option("--theta-lo", o.theta_lo, "smallest theta");
      sub->add_option("--theta-hi", o.theta_hi, "largest theta");
      sub->add_option("--theta-points", o.theta_points, "theta grid size");
      sub->add_option("--tol", o.tolerance, "bound on sup |quadrature - ECF|");
    }
    if (name == "convergence") add_convergence(sub, o);
    if (name == "qv") {
      sub->add_option("--norming", o.norming, "auto|normal|relative-stability|weak-derivative");
      sub->add_option("--x-grid", o.x_grid, "levels x for the tail identities")
          ->delimiter(',')
          ->default_str("0.5,1,2");
      sub->add_option("--qv-tol", o.qv_tolerance, "relative tolerance on the identities");
    }
    add_tolerances(sub, o);
    add_sim(sub, o);
    seeded(sub);
    add_out(sub, o);
    commands.push_back({sub, [&o, &out, name] { return cmd_verify(name, o, out); }});
  }

  auto* all = app.add_subcommand("all", "run the full acceptance suite (criteria 1-9)");
  all->add_option("--criteria", o.criteria, "subset of criteria, e.g. 1,6")->delimiter(',');
  seeded(all);
  add_out(all, o);
  commands.push_back({all, [&] { return cmd_all(o, out); }});

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  // Per-command defaults that differ from the shared Options defaults.
  for (const auto& [sub, opt] : seed_options) {
    if (sub->parsed()) o.seed_opt = opt;
  }
  auto unset = [](CLI::App* sub, const char* flag) {
    const auto* opt = sub->get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  for (const auto& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      if (c.app->get_option_no_throw("--n") && unset(c.app, "--n")) {
        o.n = static_cast<std::size_t>(std::stod(c.app->get_option("--n")->get_default_str()));
      }
      if (c.app->get_option_no_throw("--t-grid") && unset(c.app, "--t-grid")) {
        o.t_grid = default_list(c.app->get_option("--t-grid"));
      }
      if (c.app->get_option_no_throw("--x-grid") && unset(c.app, "--x-grid")) {
        o.x_grid = default_list(c.app->get_option("--x-grid"));
      }
      return c.handler();
    } catch (const NumericFailure& e) {
      err << "error: " << e.what() << "\n";
      return kExitCheckFailed;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfig;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitCheckFailed;
    }
  }
  err << "error: no command\n";
  return kExitConfig;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace levytrim::cli
