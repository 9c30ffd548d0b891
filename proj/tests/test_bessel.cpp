#include <doctest.h>

#include <cmath>

#include "abcage/bessel.hpp"
#include "oracles.hpp"

using abcage::bessel_j;
using abcage::bessel_j_zero;

TEST_SUITE("bessel") {

TEST_CASE("matches the long-double power series") {
  for (int n = -4; n <= 6; ++n)
    for (double x = -8.0; x <= 12.0; x += 0.173) CHECK(std::abs(bessel_j(n, x) - oracle::bessel_series(n, x)) < 1e-12);
}

TEST_CASE("matches std::cyl_bessel_j for large arguments") {
  for (int n : {0, 1, 2, 3, 10})
    for (double x : {15.0, 33.3, 100.0, 517.0}) CHECK(std::abs(bessel_j(n, x) - std::cyl_bessel_j(n, x)) < 1e-11);
}

TEST_CASE("property: recurrence J_{n-1} + J_{n+1} = (2n/x) J_n") {
  for (int n = 1; n <= 5; ++n)
    for (double x = 0.3; x < 20.0; x += 0.71)
      CHECK(std::abs(bessel_j(n - 1, x) + bessel_j(n + 1, x) - 2.0 * n / x * bessel_j(n, x)) < 1e-12);
}

TEST_CASE("zeros") {
  CHECK(bessel_j_zero(1, 1) == doctest::Approx(3.8317059702075123).epsilon(1e-13));
  CHECK(bessel_j_zero(0, 1) == doctest::Approx(2.4048255576957728).epsilon(1e-13));
  CHECK(bessel_j_zero(1, 2) == doctest::Approx(7.0155866698156187).epsilon(1e-13));
  for (int n : {1, 2, 3}) CHECK(std::abs(oracle::bessel_series(n, bessel_j_zero(n, 1))) < 1e-12);
}

TEST_CASE("argument limits") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK_THROWS(bessel_j(1, 2e4));
  CHECK_THROWS(bessel_j_zero(1, 0));
}

}
