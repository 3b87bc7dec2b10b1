#include <doctest.h>

#include "levytrim/catalog.hpp"
#include "levytrim/error.hpp"
#include "levytrim/representation.hpp"
#include "levytrim/verify.hpp"

#include <cmath>

using namespace levytrim;

namespace {

LevyMeasureSpec single_atom() {
  return LevyMeasureSpec::make("one-atom", 0.0, 0.0, TailFunction::from_atoms({{1.0, 3.0}}), TailFunction());
}

}  // namespace

TEST_CASE("ordered jump law and bounds") {
  const auto spec = catalog("symmetric-stable", {{"alpha", 1.0}});
  // t Π̄(y) = 2/y at t = 1: ln 2 at y = 2 / ln 2.
  CHECK(ordered_jump_cdf(spec, 1.0, 0, 2.0 / std::log(2.0), Side::kModulus) == doctest::Approx(0.5).epsilon(1e-14));
  // One-sided t Π̄⁺(y) = 1 at y = 1.
  CHECK(ordered_jump_cdf(spec, 1.0, 0, 1.0, Side::kPlus) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(ordered_jump_cdf(spec, 1.0, 1, 1.0, Side::kPlus) == doctest::Approx(0.26424111765711536).epsilon(1e-14));
  const auto g = catalog("gamma-subordinator");
  CHECK(ordered_jump_cdf(g, 1.0, 0, 1.0, Side::kMinus) == 0.0);
  const OrderedJumpBounds b = ordered_jump_bounds(0, 1.0);
  CHECK(b.lower == doctest::Approx(std::exp(-1.0)));
  CHECK(b.value == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(b.upper == doctest::Approx(1.0));
  for (int r = 0; r < 4; ++r) {
    for (double lam = 1e-4; lam < 100.0; lam *= 1.7) {
      const OrderedJumpBounds s = ordered_jump_bounds(r, lam);
      CHECK(s.lower <= s.value);
      CHECK(s.value <= s.upper);
    }
  }
}

TEST_CASE("ordered jump cdf jumps only at atoms") {
  const auto comb = catalog("atomic-comb", {{"kmax", 12.0}});
  const double t = 0.5;
  for (const Atom& a : comb.tail_abs.atoms()) {
    if (t * comb.tail_abs.left_limit(a.location) > 30.0) continue;  // both sides round to 1
    const double right = ordered_jump_cdf(comb, t, 0, a.location, Side::kModulus);
    const double left = ordered_jump_cdf_left(comb, t, 0, a.location, Side::kModulus);
    CHECK(left > right);
  }
  const double mid = 0.75;
  CHECK(ordered_jump_cdf_left(comb, t, 0, mid, Side::kModulus) == ordered_jump_cdf(comb, t, 0, mid, Side::kModulus));
  const auto gamma = catalog("gamma-type");
  CHECK(ordered_jump_cdf_left(gamma, t, 1, 0.3, Side::kModulus) == ordered_jump_cdf(gamma, t, 1, 0.3, Side::kModulus));
}

TEST_CASE("truncated triplets") {
  SUBCASE("symmetric measures keep their drift") {
    const auto spec = catalog("gamma-type");
    const double v = spec.tail_abs.evaluate(0.5);
    const TruncatedTriplet tr = truncated_triplet_modulus(spec, v);
    CHECK(tr.level_plus == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(tr.shifted_gamma - spec.gamma) < 1e-10);
    CHECK(tr.tail_plus.evaluate(tr.level_plus) == 0.0);
    CHECK(tr.tail_abs.evaluate(0.6) == 0.0);
    CHECK(tr.tie_plus == 0.0);
  }
  SUBCASE("one-sided measure shifts by the removed band") {
    const auto spec = catalog("gamma-subordinator");
    const double v = spec.tail_plus.evaluate(0.5);
    const TruncatedTriplet tr = truncated_triplet_asymmetric(spec, 0.0, v);
    // ∫_{[0.5,1]} y · e^{-y}/y dy = e^{-0.5} − e^{-1}.
    CHECK(tr.shifted_gamma == doctest::Approx(spec.gamma - (std::exp(-0.5) - std::exp(-1.0))).epsilon(1e-10));
  }
  SUBCASE("levels above one leave the drift alone") {
    const auto spec = catalog("gamma-subordinator");
    const TruncatedTriplet tr = truncated_triplet_asymmetric(spec, 0.0, spec.tail_plus.evaluate(2.0));
    CHECK(tr.shifted_gamma == doctest::Approx(spec.gamma).epsilon(1e-12));
  }
  SUBCASE("tie rates at an atom") {
    const auto spec = LevyMeasureSpec::make("two-point", 0.0, 0.0, TailFunction::from_atoms({{1.0, 2.0}}),
                                            TailFunction::from_atoms({{1.0, 1.0}}));
    const TruncatedTriplet tr = truncated_triplet_modulus(spec, 1.5);
    CHECK(tr.level_plus == 1.0);
    CHECK(tr.tie_plus == doctest::Approx(1.0));
    CHECK(tr.tie_minus == doctest::Approx(0.5));
    CHECK(tr.tail_abs.is_zero());
  }
}

TEST_CASE("sampling the r-th ordered jump") {
  SUBCASE("stable median") {
    const auto spec = catalog("symmetric-stable", {{"alpha", 1.0}});
    const auto y = parallel_draws(100000, 1, 1, StreamPurpose::kOrderedJump, [&](std::size_t, Stream& rng) {
      return sample_ordered_jump(spec, 1.0, 1, Side::kModulus, rng);
    });
    CHECK(EmpiricalDistribution(y).quantile(0.5) == doctest::Approx(2.0 / std::log(2.0)).epsilon(0.05 / 2.885));
  }
  SUBCASE("ranks are stochastically ordered") {
    const auto spec = catalog("gamma-type");
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < 10000; ++i) {
      Stream a(2, substream_id(StreamPurpose::kOrderedJump, i));
      Stream b(3, substream_id(StreamPurpose::kOrderedJump, i));
      m1 += sample_ordered_jump(spec, 0.1, 1, Side::kModulus, a);
      m2 += sample_ordered_jump(spec, 0.1, 2, Side::kModulus, b);
    }
    CHECK(m2 <= m1);
  }
  SUBCASE("single atom") {
    const auto spec = single_atom();
    std::size_t ones = 0;
    const std::size_t n = 20000;
    for (std::size_t i = 0; i < n; ++i) {
      Stream rng(4, substream_id(StreamPurpose::kOrderedJump, i));
      const double y = sample_ordered_jump(spec, 1.0, 1, Side::kPlus, rng);
      REQUIRE((y == 0.0 || y == 1.0));
      if (y == 1.0) ++ones;
    }
    const double p = 1.0 - std::exp(-3.0);
    CHECK(std::abs(static_cast<double>(ones) / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
  }
  SUBCASE("an empty side has no jumps") {
    const auto spec = catalog("gamma-subordinator");
    Stream rng(1, 1);
    CHECK(sample_ordered_jump(spec, 1.0, 1, Side::kMinus, rng) == 0.0);
  }
}

TEST_CASE("joint sampler returns the ordered-jump level") {
  const auto spec = catalog("gamma-type");
  const double t = 0.1;
  const std::size_t n = 20000;
  const auto lv = parallel_draws(n, 1, 9, StreamPurpose::kRepresentation, [&](std::size_t, Stream& rng) {
    return joint_sample_trimmed_with_jump(spec, t, TrimMode::modulus(1), SimConfig{}, rng).level_plus;
  });
  const double ks = ks_one_sample(EmpiricalDistribution(lv), [&](double y) {
    return y <= 0.0 ? 0.0 : 1.0 - ordered_jump_cdf(spec, t, 0, y, Side::kModulus);
  });
  CHECK(ks <= ks_critical_one_sample(n));
}

TEST_CASE("representation sampler against pathwise trimming") {
  VerifyConfig cfg;
  cfg.n = 10000;
  cfg.seed = 21;
  SUBCASE("untrimmed") {
    const auto r = check_representation(catalog("gamma-type"), 0.1, TrimMode::asymmetric(0, 0), cfg);
    CHECK(r.pass);
  }
  SUBCASE("gamma-type modulus") {
    const auto r = check_representation(catalog("gamma-type"), 0.1, TrimMode::modulus(1), cfg);
    CHECK(r.pass);
  }
  SUBCASE("atomic comb modulus with ties") {
    const auto r = check_representation(catalog("atomic-comb"), 0.5, TrimMode::modulus(1), cfg);
    CHECK(r.pass);
  }
  SUBCASE("one-sided subordinator") {
    // At t = 0.1 the r = 2 remainder sits below double resolution of the compensator; t = 1 keeps
    // it resolvable.
    const auto r = check_representation(catalog("gamma-subordinator"), 1.0, TrimMode::one_sided_plus(2), cfg);
    CHECK(r.pass);
    const auto rs = check_representation(catalog("relative-stable-subordinator"), 0.1, TrimMode::one_sided_plus(1), cfg);
    CHECK(rs.pass);
  }
}
