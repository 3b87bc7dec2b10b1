#include <doctest.h>

#include "levytrim/catalog.hpp"
#include "levytrim/error.hpp"
#include "levytrim/levy_measure.hpp"
#include "levytrim/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

using namespace levytrim;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

TailFunction power_tail(double alpha) {
  ContinuousTail c;
  c.tail = [=](double x) { return std::pow(x, -alpha); };
  c.density = [=](double y) { return alpha * std::pow(y, -alpha - 1.0); };
  c.inverse = [=](double v) { return std::pow(v, -1.0 / alpha); };
  c.total_mass = kInf;
  c.support_upper = kInf;
  return TailFunction::from_parts(c);
}

std::vector<LevyMeasureSpec> jump_catalog() {
  std::vector<LevyMeasureSpec> out;
  for (const auto& e : catalog_entries()) {
    if (e.name == "gaussian") continue;
    out.push_back(catalog(e.name));
  }
  out.push_back(catalog("symmetric-stable", {{"alpha", 1.5}}));
  out.push_back(catalog("atomic-comb", {{"alternating", 1.0}}));
  return out;
}

}  // namespace

TEST_CASE("inverse of a power tail") {
  const TailFunction t = power_tail(2.0);
  CHECK(t.has_analytic_inverse());
  CHECK(inverse_tail(t, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("inverse of a step tail is the infimum") {
  const TailFunction t = TailFunction::from_atoms({{1.0, 3.0}});
  CHECK(t.evaluate(0.5) == 3.0);
  CHECK(t.evaluate(1.0) == 0.0);
  CHECK(t.left_limit(1.0) == 3.0);
  CHECK(inverse_tail(t, 1.0) == 1.0);
  CHECK(inverse_tail(t, 3.0) == 0.0);
  CHECK(inverse_tail(t, 7.0) == 0.0);
}

TEST_CASE("inverse of the gamma tail by bisection") {
  const LevyMeasureSpec g = catalog("gamma-subordinator");
  CHECK(g.tail_plus.inverse(0.21938393439552027) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.infinite_activity_plus);
  CHECK_FALSE(g.infinite_activity_minus);
}

TEST_CASE("truncated moments") {
  SUBCASE("symmetric stable alpha = 1") {
    const auto s = catalog("symmetric-stable", {{"alpha", 1.0}});
    CHECK(truncated_moments(s, 1.0).big_v == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("pure gaussian") {
    const auto s = catalog("gaussian", {{"sigma2", 1.0}, {"gamma", 0.3}});
    for (double x : {1e-6, 0.5, 3.0}) {
      const auto m = truncated_moments(s, x);
      CHECK(m.big_v == 1.0);
      CHECK(m.nu == 0.3);
    }
  }
  SUBCASE("driftless gamma subordinator") {
    const auto s = catalog("gamma-subordinator");
    CHECK(truncated_moments(s, 0.1).nu == doctest::Approx(1.0 - std::exp(-0.1)).epsilon(1e-10));
    CHECK(truncated_moments(s, 0.1).nu == doctest::Approx(0.09516).epsilon(1e-4));
  }
}

TEST_CASE("tie rates on a two-point measure") {
  const auto spec = LevyMeasureSpec::make("two-point", 0.0, 0.0, TailFunction::from_atoms({{1.0, 2.0}}),
                                          TailFunction::from_atoms({{1.0, 1.0}}));
  const TieRates k = tie_rates(spec, 1.5, TieMode::kModulus);
  CHECK(k.level == 1.0);
  CHECK(k.plus == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k.minus == doctest::Approx(0.5).epsilon(1e-15));
  const TieRates rho = tie_rates(spec, 1.5, TieMode::kOneSidedPlus);
  CHECK(rho.plus == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rho.minus == 0.0);
}

TEST_CASE("tie rates vanish without atoms") {
  const auto spec = catalog("gamma-type");
  for (double v : {0.01, 1.0, 30.0}) {
    const TieRates k = tie_rates(spec, v, TieMode::kModulus);
    CHECK(k.plus == 0.0);
    CHECK(k.minus == 0.0);
  }
}

TEST_CASE("galois property and monotone inverse across the catalog") {
  Stream rng(11, substream_id(StreamPurpose::kGeneric, 0));
  for (const auto& spec : jump_catalog()) {
    CAPTURE(spec.name);
    for (const Side side : {Side::kPlus, Side::kMinus, Side::kModulus}) {
      const TailFunction& tail = spec.tail(side);
      if (tail.is_zero()) continue;
      double prev_v = 0.0;
      double prev_y = kInf;
      std::vector<double> vs;
      for (int i = 0; i < 40; ++i) vs.push_back(std::exp(-8.0 + 24.0 * rng.uniform()));
      std::sort(vs.begin(), vs.end());
      for (double v : vs) {
        const double y = tail.inverse(v);
        CAPTURE(v);
        CHECK(tail.evaluate(y) <= v);
        if (y > 1e-299) {  // levels below the floor are numerically zero
          CHECK(tail.evaluate(y * (1.0 - 1e-9)) > v);
          CHECK(tail.left_limit(y) >= v * (1.0 - 1e-6));
        }
        if (prev_v > 0.0) CHECK(y <= prev_y);
        prev_v = v;
        prev_y = y;
      }
    }
  }
}

TEST_CASE("atom bookkeeping and kappa conservation") {
  const auto comb = catalog("atomic-comb", {{"kmax", 20.0}});
  for (const Atom& a : comb.tail_abs.atoms()) {
    CHECK(comb.tail_abs.left_limit(a.location) - comb.tail_abs.evaluate(a.location) ==
          doctest::Approx(a.mass).epsilon(1e-12));
    CHECK(comb.tail_abs.atom_mass_at(a.location) == doctest::Approx(a.mass).epsilon(1e-12));
  }
  for (double v : {0.3, 1.0, 2.5, 5.0, 100.0, 1e4}) {
    const TieRates k = tie_rates(comb, v, TieMode::kModulus);
    const double L = comb.tail_abs.inverse(v);
    const double expected = comb.tail_abs.atom_mass_at(L) > 0.0 ? comb.tail_abs.left_limit(L) - v : 0.0;
    CHECK(k.plus + k.minus == doctest::Approx(expected).epsilon(1e-12));
    CHECK(k.plus / (k.plus + k.minus) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("two-sided tail is the sum of the halves") {
  for (const auto& spec : jump_catalog()) {
    CAPTURE(spec.name);
    for (double x : {1e-5, 0.01, 0.3, 0.99, 2.0}) {
      CHECK(spec.tail_abs.evaluate(x) ==
            doctest::Approx(spec.tail_plus.evaluate(x) + spec.tail_minus.evaluate(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("V is nondecreasing and its increments match quadrature") {
  using boost::math::quadrature::gauss_kronrod;
  for (const auto& spec : jump_catalog()) {
    CAPTURE(spec.name);
    double prev = -1.0;
    for (int k = -12; k <= 1; ++k) {
      const double v = truncated_moments(spec, std::pow(10.0, k)).big_v;
      CHECK(v >= spec.sigma2);
      CHECK(v >= prev);
      prev = v;
    }
    // ∫(1 ∧ x²) Π(dx) < ∞.
    CHECK(std::isfinite(spec.tail_abs.second_moment_below(1.0) + spec.tail_abs.evaluate(1.0)));
    if (!spec.tail_abs.atoms().empty()) continue;
    for (const auto& [lo, hi] : {std::pair{0.01, 0.2}, std::pair{0.2, 0.9}, std::pair{1e-4, 1e-3}}) {
      const double dv = truncated_moments(spec, hi).big_v - truncated_moments(spec, lo).big_v;
      auto f = [&](double y) {
        double d = 0.0;
        if (spec.tail_plus.has_density()) d += spec.tail_plus.density(y);
        if (spec.tail_minus.has_density()) d += spec.tail_minus.density(y);
        return y * y * d;
      };
      const double q = gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
      CHECK(dv == doctest::Approx(q).epsilon(1e-9));
    }
  }
}

TEST_CASE("V minus sigma2 vanishes at zero") {
  for (const auto& spec : jump_catalog()) {
    CAPTURE(spec.name);
    // log-doa decays only like 2/log(e/x).
    const double far = truncated_moments(spec, 1e-300).big_v - spec.sigma2;
    CHECK(far < 0.003);
    CHECK(far <= truncated_moments(spec, 1e-30).big_v - spec.sigma2);
  }
}

TEST_CASE("truncated tails vanish at the level") {
  const auto spec = catalog("gamma-type");
  const TailFunction t = spec.tail_plus.truncated_below(0.5);
  CHECK(t.evaluate(0.5) == 0.0);
  CHECK(t.evaluate(0.7) == 0.0);
  CHECK(t.evaluate(0.1) ==
        doctest::Approx(spec.tail_plus.evaluate(0.1) - spec.tail_plus.evaluate(0.5)).epsilon(1e-12));
  CHECK(t.inverse(0.0) <= 0.5);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(LevyMeasureSpec::make("bad", 0.0, -1.0, TailFunction(), TailFunction()), ConfigError);
  CHECK_THROWS_AS(TailFunction::from_atoms({{-1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(TailFunction::from_atoms({{1.0, -1.0}}), ConfigError);
}
