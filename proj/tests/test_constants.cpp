#include <doctest.h>

#include <cmath>

#include "trigamma/constants.hpp"
#include "trigamma/error.hpp"

using namespace trigamma;

TEST_CASE("linewidth of the 4857 s isomer") {
  const double g = natural_linewidth(4857.0);
  // hbar in eV s divided by the lifetime, by hand: 6.582119569e-16 / 4857
  CHECK(g == doctest::Approx(1.35518212e-19).epsilon(1e-8));
  CHECK(g >= 1.0e-19);
  CHECK(g <= 2.0e-19);
  CHECK(std::abs(g * 4857.0 - units::hbar_eV_s) <= 4 * std::numeric_limits<double>::epsilon() * units::hbar_eV_s);
}

TEST_CASE("linewidth scaling") {
  CHECK(natural_linewidth(2 * 4857.0) == doctest::Approx(natural_linewidth(4857.0) / 2).epsilon(1e-15));
  CHECK(natural_linewidth(1e300) < 1e-300);
  CHECK_THROWS_AS(natural_linewidth(0.0), DomainError);
  CHECK_THROWS_AS(natural_linewidth(-1.0), DomainError);
}

TEST_CASE("doppler speed of one linewidth") {
  RhodiumParams p;
  const double v = doppler_speed_per_linewidth(p);
  // c * Gamma / E: 2.99792458e8 * 1.35518212e-19 / 4e4
  CHECK(v == doctest::Approx(1.015683449e-15).epsilon(1e-8));
  CHECK(std::abs(v - 1e-15) <= 0.2e-15);

  RhodiumParams hard = p;
  hard.gamma_energy = 1e12;
  CHECK(doppler_speed_per_linewidth(hard) < 1e-22);

  RhodiumParams shorter = p;
  shorter.tau0 = p.tau0 / 3;
  CHECK(doppler_speed_per_linewidth(shorter) == doctest::Approx(3 * v).epsilon(1e-14));
}

TEST_CASE("thermal strain rate from stored energy") {
  RhodiumParams p;
  const double rate = thermal_strain_rate(p);
  // mass = 12.4e3 * 0.025 * 0.025 * 0.001 = 7.75e-3 kg
  // power = 1e-3 / 4857 W, heating = power / (m c) K/s, rate = alpha * heating
  const double by_hand = 8.5e-6 * (1e-3 / 4857.0) / (7.75e-3 * 244.0);
  CHECK(rate == doctest::Approx(by_hand).epsilon(1e-12));
  CHECK(rate == doctest::Approx(9.2546e-13).epsilon(1e-4));
  CHECK(rate >= 0.5e-12);
  CHECK(rate <= 2.0e-12);

  RhodiumParams cold = p;
  cold.stored_energy = 0.0;
  CHECK(thermal_strain_rate(cold) == 0.0);

  RhodiumParams twice = p;
  twice.stored_energy = 2 * p.stored_energy;
  CHECK(thermal_strain_rate(twice) == doctest::Approx(2 * rate).epsilon(1e-14));

  RhodiumParams dense = p;
  dense.density *= 2;
  CHECK(thermal_strain_rate(dense) == doctest::Approx(rate / 2).epsilon(1e-14));
  RhodiumParams big = p;
  big.sample_dims.x() *= 4;
  CHECK(thermal_strain_rate(big) == doctest::Approx(rate / 4).epsilon(1e-14));
}

TEST_CASE("photon wavenumber") {
  // hbar c = 1973.27 eV angstrom, so 40 keV is 20.27 per angstrom
  CHECK(photon_wavenumber(40e3) == doctest::Approx(40e3 / 1973.26980e-10).epsilon(1e-8));
  CHECK(photon_wavenumber(40e3) == doctest::Approx(2.027e11).epsilon(1e-3));
  CHECK(photon_wavenumber(80e3) == doctest::Approx(2 * photon_wavenumber(40e3)).epsilon(1e-15));
  CHECK(photon_wavenumber(units::hbar_c_eV_m) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(photon_wavenumber(0.0), DomainError);
}

TEST_CASE("parameter validation") {
  RhodiumParams p;
  CHECK_NOTHROW(validate(p));
  p.sample_dims.z() = 0.0;
  CHECK_THROWS_AS(validate(p), DomainError);
  CHECK_THROWS_AS(thermal_strain_rate(p), DomainError);
  RhodiumParams q;
  q.tau0 = -1;
  CHECK_THROWS_AS(validate(q), DomainError);
  RhodiumParams r;
  r.stored_energy = -1e-3;
  CHECK_THROWS_AS(validate(r), DomainError);
}
