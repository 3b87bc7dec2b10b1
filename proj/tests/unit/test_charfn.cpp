#include <doctest.h>

#include "levytrim/catalog.hpp"
#include "levytrim/charfn.hpp"
#include "levytrim/verify.hpp"

#include <cmath>
#include <numbers>

using namespace levytrim;

TEST_CASE("gaussian exponent") {
  const auto spec = catalog("gaussian");
  for (double th : {-3.0, 0.5, 2.0}) {
    const Complex p = psi(spec, th);
    CHECK(p.real() == doctest::Approx(-th * th / 2.0).epsilon(1e-14));
    CHECK(p.imag() == 0.0);
  }
}

TEST_CASE("gamma subordinator matches (1 - i theta)^(-t)") {
  const auto spec = catalog("gamma-subordinator");
  for (double th : {0.3, 1.0, 4.0, -2.5}) {
    for (double t : {1.0, 0.1}) {
      const Complex q = std::exp(t * psi(spec, th));
      const Complex exact = std::pow(Complex(1.0, -th), -t);
      CHECK(std::abs(q - exact) < 1e-8);
    }
  }
  CHECK(std::abs(std::exp(psi(spec, 1.0))) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));
}

TEST_CASE("exponents vanish at zero") {
  for (const auto& e : catalog_entries()) {
    const auto spec = catalog(e.name);
    CHECK(psi(spec, 0.0) == Complex(0.0, 0.0));
  }
  const auto g = catalog("gamma-type");
  CHECK(phi_trunc_modulus(g, 0.0, 1.0) == Complex(0.0, 0.0));
  CHECK(phi_trunc_asymmetric(g, 0.0, 1.0, 2.0) == Complex(0.0, 0.0));
}

TEST_CASE("truncation that removes nothing leaves the exponent alone") {
  const auto spec = catalog("log-doa");
  for (double th : {1.0, 5.0}) {
    CHECK(std::abs(phi_trunc_modulus(spec, th, 1e-14) - psi(spec, th)) < 1e-8);
    CHECK(std::abs(phi_trunc_asymmetric(spec, th, 0.0, 0.0) - psi(spec, th)) < 1e-12);
  }
}

TEST_CASE("tie terms on the two-point measure") {
  const auto spec = LevyMeasureSpec::make("two-point", 0.0, 0.0, TailFunction::from_atoms({{1.0, 2.0}}),
                                          TailFunction::from_atoms({{1.0, 1.0}}));
  // Truncated part is empty with shifted drift −(2 − 1); ties κ₊ = 1, κ₋ = 0.5 give
  // 1.0 (e^{iπ} − 1) + 0.5 (e^{−iπ} − 1) = −3.
  const Complex phi = phi_trunc_modulus(spec, std::numbers::pi, 1.5);
  CHECK(phi.real() == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(phi.imag() == doctest::Approx(-std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("trimmed characteristic function basics") {
  const auto spec = catalog("gamma-type");
  CHECK(charfn_trimmed(spec, 0.0, 0.1, TrimMode::modulus(1)) == Complex(1.0, 0.0));
  for (double th : {0.7, 3.0}) {
    const Complex untrimmed = charfn_trimmed(spec, th, 0.1, TrimMode::asymmetric(0, 0));
    CHECK(std::abs(untrimmed - std::exp(0.1 * psi(spec, th))) < 1e-14);
  }
}

TEST_CASE("gamma weight nodes integrate to one") {
  for (int r : {1, 2, 5}) {
    double w = 0.0;
    double mean = 0.0;
    for (const GammaNode& n : gamma_weight_nodes(r)) {
      w += n.weight;
      mean += n.weight * n.gamma_value;
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(r).epsilon(2e-3));
  }
}

TEST_CASE("symmetric exponents are negative definite") {
  for (const char* name : {"gamma-type", "symmetric-stable", "log-doa"}) {
    const auto spec = catalog(name);
    for (double th : {0.5, 2.0, 5.0}) {
      for (double v : {0.1, 1.0, 10.0}) CHECK(phi_trunc_modulus(spec, th, v).real() <= 0.0);
    }
  }
}

TEST_CASE("invariants on every catalog entry") {
  const auto grid = linear_grid(-5.0, 5.0, 11);
  for (const auto& e : catalog_entries()) {
    const auto spec = catalog(e.name);
    CAPTURE(e.name);
    CHECK(check_charfn_invariants(spec, 0.1, TrimMode::asymmetric(0, 0), grid).pass);
    if (spec.infinite_activity_plus && spec.infinite_activity_minus) {
      CHECK(check_charfn_invariants(spec, 0.1, TrimMode::modulus(1), grid).pass);
      CHECK(check_charfn_invariants(spec, 0.1, TrimMode::asymmetric(1, 1), grid).pass);
    } else if (spec.infinite_activity_plus) {
      CHECK(check_charfn_invariants(spec, 0.1, TrimMode::one_sided_plus(1), grid).pass);
    }
  }
}

TEST_CASE("quadrature against the empirical characteristic function") {
  VerifyConfig cfg;
  cfg.n = 20000;
  cfg.seed = 3;
  const auto rep = check_charfn(catalog("gamma-type"), 0.1, TrimMode::modulus(1), {1.0, 2.0, 5.0}, cfg);
  CHECK(rep.pass);
  const auto asym = check_charfn(catalog("atomic-comb"), 0.5, TrimMode::asymmetric(1, 1), {1.0, 3.0}, cfg);
  CHECK(asym.pass);
}
