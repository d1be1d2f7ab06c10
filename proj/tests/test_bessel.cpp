#include <doctest.h>

#include <cmath>

#include "trigamma/bessel.hpp"
#include "trigamma/constants.hpp"
#include "trigamma/error.hpp"

using namespace trigamma;

namespace {

// (1/pi) int_0^pi cos(x sin phi) dphi. The integrand is smooth and periodic, so
// the trapezoid rule converges geometrically; 4000 panels is exact to rounding for x <= 60.
double j0_oracle(double x) {
  const int n = 4000;
  const double h = units::pi / n;
  double s = 0.5 * (1.0 + std::cos(x * std::sin(units::pi)));
  for (int i = 1; i < n; ++i) s += std::cos(x * std::sin(i * h));
  return s / n;
}

}  // namespace

TEST_CASE("J0 against the integral representation") {
  double worst = 0.0;
  for (int i = 0; i <= 5000; ++i) {
    const double x = 50.0 * i / 5000.0;
    worst = std::max(worst, std::abs(bessel_j0(x) - j0_oracle(x)));
  }
  CHECK(worst <= 1e-10);
  for (double x : {55.0, 60.0, 61.0, 75.3, 120.0}) CHECK(std::abs(bessel_j0(x) - j0_oracle(x)) <= 1e-10);
}

TEST_CASE("J0 against the standard library") {
  for (double x = 0.0; x <= 200.0; x += 0.37) CHECK(std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) <= 1e-12);
}

TEST_CASE("J0 elementary values") {
  CHECK(bessel_j0(0.0) == 1.0);
  for (double x : {0.3, 4.1, 17.0, 66.6}) CHECK(bessel_j0(-x) == bessel_j0(x));
  CHECK(bessel_j0(5.0) == doctest::Approx(-0.1775967713143383).epsilon(1e-12));
}

TEST_CASE("first zero of J0") {
  // bisection on the oracle itself
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (j0_oracle(mid) > 0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(2.404825557695773).epsilon(1e-14));
  CHECK(std::abs(bessel_j0(2.404825557695773)) <= 1e-10);
}

TEST_CASE("asymptotic form") {
  CHECK(bessel_j0_asymptotic(5.0) == doctest::Approx(-0.1711).epsilon(1e-3));
  CHECK(std::abs(bessel_j0_asymptotic(5.0) / bessel_j0(5.0) - 1.0) < 0.05);
  // pointwise ratios are taken away from the zeros; the envelope-scaled error holds everywhere
  for (double x = 20.0; x <= 200.0; x += 0.01) {
    const double exact = bessel_j0(x);
    if (std::abs(exact) < 0.7 * std::sqrt(2.0 / (units::pi * x))) continue;
    CHECK(std::abs(bessel_j0_asymptotic(x) / exact - 1.0) < 0.01);
  }
  for (double x = 20.0; x <= 200.0; x += 0.01) {
    const double envelope = std::sqrt(2.0 / (units::pi * x));
    CHECK(std::abs(bessel_j0_asymptotic(x) - bessel_j0(x)) / envelope < 0.01);
  }
  for (int m = 0; m < 10; ++m) CHECK(std::abs(bessel_j0_asymptotic(0.75 * units::pi + m * units::pi)) <= 1e-15);
  CHECK_THROWS_AS(bessel_j0_asymptotic(0.0), DomainError);
  CHECK_THROWS_AS(bessel_j0_asymptotic(-1.0), DomainError);
}
