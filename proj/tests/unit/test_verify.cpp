#include <doctest.h>

#include "levytrim/catalog.hpp"
#include "levytrim/error.hpp"
#include "levytrim/report_io.hpp"
#include "levytrim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace levytrim;

namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

std::vector<double> uniforms(std::size_t n, std::uint64_t seed) {
  return parallel_draws(n, 1, seed, StreamPurpose::kUniformTest,
                        [](std::size_t, Stream& s) { return s.uniform(); });
}

const Statistic& stat(const VerificationReport& rep, const std::string& name) {
  for (const auto& s : rep.statistics) {
    if (s.name == name) return s;
  }
  throw std::runtime_error("no statistic " + name);
}

}  // namespace

TEST_CASE("empirical distribution") {
  const EmpiricalDistribution e({3.0, 1.0, 2.0, 2.0});
  CHECK(e.size() == 4);
  CHECK(e.sorted().front() == 1.0);
  CHECK(e.ecdf(0.5) == 0.0);
  CHECK(e.ecdf(2.0) == 0.75);
  CHECK(e.ecdf(10.0) == 1.0);
  CHECK(e.quantile(0.5) == 2.0);
  CHECK(e.quantile(0.25) == 1.0);
  CHECK(e.quantile(1.0) == 3.0);
  CHECK_THROWS_AS(EmpiricalDistribution({}), ContractError);
  CHECK_THROWS_AS(EmpiricalDistribution({1.0, std::nan("")}), ContractError);
  CHECK_THROWS_AS(e.quantile(1.5), ContractError);
}

TEST_CASE("one-sample KS exact values") {
  // Stratified points sit at the cell midpoints: the statistic is half a cell.
  for (std::size_t n : {1u, 10u, 1000u}) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back((i + 0.5) / static_cast<double>(n));
    CHECK(ks_one_sample(EmpiricalDistribution(xs), uniform_cdf) ==
          doctest::Approx(0.5 / static_cast<double>(n)));
  }
  CHECK(ks_one_sample(EmpiricalDistribution({0.5}), uniform_cdf) == doctest::Approx(0.5));
  CHECK(ks_one_sample(EmpiricalDistribution({0.0, 0.0}), uniform_cdf) == doctest::Approx(1.0));
}

TEST_CASE("one-sample KS on a discrete law uses the left limit") {
  // Bernoulli(1/2) on {0, 1} with exact frequencies.
  auto cdf = [](double x) { return x < 0.0 ? 0.0 : (x < 1.0 ? 0.5 : 1.0); };
  auto left = [](double x) { return x <= 0.0 ? 0.0 : (x <= 1.0 ? 0.5 : 1.0); };
  const EmpiricalDistribution e({0.0, 1.0, 0.0, 1.0});
  CHECK(ks_one_sample(e, cdf, left) == doctest::Approx(0.0));
  // Treating the atoms as continuous points misreads the jump.
  CHECK(ks_one_sample(e, cdf) == doctest::Approx(0.5));
  const EmpiricalDistribution skew({0.0, 0.0, 0.0, 1.0});
  CHECK(ks_one_sample(skew, cdf, left) == doctest::Approx(0.25));
}

TEST_CASE("one-sample KS of seeded uniforms stays under the critical value") {
  const std::size_t n = 100000;
  const double d = ks_one_sample(EmpiricalDistribution(uniforms(n, 11)), uniform_cdf);
  CHECK(d > 0.0);
  CHECK(d <= ks_critical_one_sample(n));
}

TEST_CASE("two-sample KS") {
  const EmpiricalDistribution a({1.0, 2.0, 3.0});
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(a, EmpiricalDistribution({4.0, 5.0})) == 1.0);
  CHECK(ks_two_sample(EmpiricalDistribution({1.0, 1.0, 2.0}), EmpiricalDistribution({1.0, 2.0, 2.0})) ==
        doctest::Approx(1.0 / 3.0));
  const std::size_t n = 50000;
  const double d =
      ks_two_sample(EmpiricalDistribution(uniforms(n, 1)), EmpiricalDistribution(uniforms(n, 2)));
  CHECK(d <= ks_critical_two_sample(n, n));
}

TEST_CASE("critical values") {
  CHECK(ks_critical_one_sample(10000) == doctest::Approx(0.0163));
  CHECK(ks_critical_two_sample(50000, 50000) == doctest::Approx(1.95 * std::sqrt(2.0 / 50000.0)));
  CHECK(1.2 * ks_critical_two_sample(50000, 50000) <= 0.015);
}

TEST_CASE("parallel draws do not depend on the worker count") {
  auto f = [](std::size_t i, Stream& s) { return s.normal() + static_cast<double>(i % 3); };
  const auto one = parallel_draws(1000, 1, 5, StreamPurpose::kGeneric, f);
  for (int th : {2, 3, 8, 0}) {
    CAPTURE(th);
    CHECK(parallel_draws(1000, th, 5, StreamPurpose::kGeneric, f) == one);
  }
  CHECK(parallel_draws(1000, 1, 6, StreamPurpose::kGeneric, f) != one);
  CHECK(parallel_draws(1000, 1, 5, StreamPurpose::kPath, f) != one);
  auto boom = [](std::size_t i, Stream&) -> double {
    if (i == 700) throw NumericFailure("boom");
    return 0.0;
  };
  CHECK_THROWS_AS(parallel_draws(1000, 4, 5, StreamPurpose::kGeneric, boom), NumericFailure);
}

TEST_CASE("report requirements") {
  VerificationReport rep;
  rep.require_le("a", 1.0, 2.0);
  CHECK(rep.pass);
  rep.require_ge("b", 1.0, 2.0);
  CHECK_FALSE(rep.pass);
  rep.require_le("c", std::nan(""), 2.0);
  CHECK_FALSE(rep.statistics.back().pass);
  rep.note("d", 3.0);
  CHECK(rep.info.back().second == 3.0);
}

TEST_CASE("linear grid") {
  const auto g = linear_grid(-5.0, 5.0, 41);
  REQUIRE(g.size() == 41);
  CHECK(g.front() == -5.0);
  CHECK(g.back() == 5.0);
  CHECK(g[20] == 0.0);
  CHECK(linear_grid(2.0, 3.0, 1) == std::vector<double>{2.0});
  CHECK_THROWS_AS(linear_grid(0.0, 1.0, 0), ConfigError);
}

TEST_CASE("representation check passes and is reproducible") {
  VerifyConfig cfg;
  cfg.n = 4000;
  cfg.seed = 21;
  const auto spec = catalog("gamma-type");
  const auto rep = check_representation(spec, 0.1, TrimMode::modulus(1), cfg);
  CHECK(rep.pass);
  CHECK(stat(rep, "ks_two_sample").value <= stat(rep, "ks_two_sample").threshold);
  cfg.threads = 4;
  const auto again = check_representation(spec, 0.1, TrimMode::modulus(1), cfg);
  CHECK(reports_to_json({rep}) == reports_to_json({again}));
}

TEST_CASE("ordered jump law check") {
  VerifyConfig cfg;
  cfg.n = 5000;
  cfg.seed = 4;
  const auto rep = check_ordered_jump_law(catalog("symmetric-stable"), 0.1, 2, Side::kPlus, cfg);
  CHECK(rep.pass);
  const auto comb = check_ordered_jump_law(catalog("atomic-comb"), 0.5, 1, Side::kModulus, cfg);
  CHECK(comb.pass);
  CHECK_THROWS_AS(check_ordered_jump_law(catalog("gamma-type"), 0.1, 0, Side::kPlus, cfg),
                  ConfigError);
}

TEST_CASE("key inequality check") {
  VerifyConfig cfg;
  cfg.n = 4000;
  cfg.seed = 8;
  const auto spec = catalog("gamma-type");
  // No normal root for a finite-variation tail at this t; auto picks b_t = t.
  const double b = norming(spec, 0.5).b;
  const auto grid = key_inequality_grid(spec, 0.5, b);
  CHECK(grid.size() >= 4);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  const auto rep = check_key_inequality(spec, 0.5, TrimMode::asymmetric(1, 1), grid, cfg);
  CHECK(rep.pass);
  CHECK_THROWS_AS(check_key_inequality(spec, 0.5, TrimMode::asymmetric(0, 0), grid, cfg),
                  ConfigError);
  const auto comb = check_key_inequality(catalog("atomic-comb"), 0.1, TrimMode::modulus(1), {}, cfg);
  CHECK(comb.pass);
}

TEST_CASE("degenerate convergence of the gamma subordinator") {
  VerifyConfig cfg;
  cfg.n = 2000;
  cfg.seed = 2;
  ConvergenceTarget target;
  target.degenerate = true;
  target.center = 0.0;
  const auto rep = convergence_study(catalog("gamma-subordinator"), TrimMode::one_sided_plus(1),
                                     {1e-2, 1e-3, 1e-4}, cfg, target);
  CHECK(rep.pass);
  CHECK_THROWS_AS(convergence_study(catalog("gamma-subordinator"), TrimMode::one_sided_plus(1),
                                    {1e-4, 1e-2}, cfg, target),
                  ConfigError);
}

TEST_CASE("charfn invariants and quadrature identities") {
  const auto spec = catalog("atomic-comb");
  CHECK(check_charfn_invariants(spec, 0.3, TrimMode::modulus(1), linear_grid(-5, 5, 21)).pass);
  CHECK(check_qv_equivalence(spec, {{0.5, 0.1}, {2.0, 0.01}}).pass);
}
