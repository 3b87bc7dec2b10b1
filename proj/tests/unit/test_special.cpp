#include <doctest.h>

#include "levytrim/special.hpp"

#include <cmath>
#include <initializer_list>

using namespace levytrim::special;

// Reference values from 30-digit evaluations of the defining integrals.
TEST_CASE("exponential integral") {
  CHECK(expint_e1(1.0) == doctest::Approx(0.21938393439552027).epsilon(1e-14));
  CHECK(expint_e1(0.01) == doctest::Approx(4.0379295765381138).epsilon(1e-13));
  CHECK(expint_e1(10.0) == doctest::Approx(4.1569689296853243e-6).epsilon(1e-13));
  CHECK(scaled_expint_e1(50.0) == doctest::Approx(0.019615109930114870).epsilon(1e-12));
  CHECK(scaled_expint_e1(1e6) == doctest::Approx(9.99999000002e-7).epsilon(1e-10));
}

TEST_CASE("Ei minus its leading term is continuous across the series switch") {
  CHECK(expint_ei_minus_leading(40.0) == doctest::Approx(155086592685741.94).epsilon(1e-12));
  CHECK(expint_ei_minus_leading(45.0) == doctest::Approx(18074468959665480.5).epsilon(1e-12));
  const double lo = expint_ei_minus_leading(std::nextafter(40.0, 0.0));
  CHECK(lo == doctest::Approx(155086592685741.94).epsilon(1e-12));
  // Ei(2) − e²/2.
  CHECK(expint_ei_minus_leading(2.0) == doctest::Approx(1.2597063065365650).epsilon(1e-9));
}

TEST_CASE("incomplete gamma") {
  CHECK(gamma_p(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gamma_p(2.0, 1.0) == doctest::Approx(0.26424111765711536).epsilon(1e-14));
  CHECK(gamma_p(3.0, 0.0) == 0.0);
  for (double p : {1e-12, 0.01, 0.5, 0.99}) {
    CHECK(gamma_p(2.0, gamma_p_inv(2.0, p)) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(gamma2_lower(1e-8) == doctest::Approx(5e-17).epsilon(1e-8));
  CHECK(gamma2_lower(1.0) == doctest::Approx(0.26424111765711536).epsilon(1e-14));
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(normal_cdf(-40.0) >= 0.0);
}
