#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "nsbf/bessel.hpp"
#include "nsbf/error.hpp"

using namespace nsbf;

TEST_SUITE("spherical_bessel") {

TEST_CASE("closed forms") {
  CHECK(j_batch(1.0, 0)[0].real() == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
  CHECK(std::abs(j_batch(1.0, 0)[0] - 0.8414709848078965) <= 1e-16);
  const auto z0 = j_batch(0.0, 10);
  CHECK(z0[0] == cplx(1.0));
  for (int n = 1; n <= 10; ++n) CHECK(z0[n] == cplx(0.0));
}

TEST_CASE("orders far above the argument") {
  const auto a = j_batch(1.0, 40);
  const auto b = j_batch(10.0, 40);
  CHECK(a[40].real() == doctest::Approx(1.5e-61).epsilon(0.05));
  CHECK(b[40].real() == doctest::Approx(8.4e-22).epsilon(0.05));
}

TEST_CASE("agreement with an extended-precision library for real arguments") {
  for (double x : {1e-3, 0.1, 0.5, 1.0, 3.7, 10.0, 25.0, 52.0, 105.0, 210.0}) {
    const auto j = j_batch(x, 60);
    for (int n = 0; n <= 60; ++n) {
      const long double ref = boost::math::sph_bessel(static_cast<unsigned>(n), static_cast<long double>(x));
      if (std::abs(ref) < 1e-290L) continue;
      REQUIRE_MESSAGE(std::abs(j[n].real() - ref) <= 1e-13 * std::abs(ref) + 1e-17, "x = " << x << " n = " << n);
      REQUIRE(j[n].imag() == 0.0);
    }
  }
}

TEST_CASE("complex arguments against sin and cos") {
  for (cplx z : {cplx(0.1, 0.2), cplx(1.0, 1.0), cplx(5.0, 0.5), cplx(30.0, -2.0), cplx(0.0, 10.0), cplx(100.0, 3.0)}) {
    const auto j = j_batch(z, 30);
    const cplx j0 = std::sin(z) / z;
    const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    CHECK(std::abs(j[0] - j0) <= 1e-13 * std::abs(j0));
    CHECK(std::abs(j[1] - j1) <= 1e-13 * std::max(std::abs(j1), std::abs(j0)));
    for (int n = 0; n <= 30; ++n) REQUIRE(std::abs(j[n]) <= j_magnitude_bound(z, n) * (1 + 1e-12));
  }
}

TEST_CASE("j_1 = j_0 / z - cos z / z across the range") {
  for (double r = 0.1; r <= 100.0; r *= 1.3) {
    for (double arg : {0.0, 0.3, 1.2}) {
      const cplx z = std::polar(r, arg);
      const auto j = j_batch(z, 5);
      const cplx j1 = j[0] / z - std::cos(z) / z;
      REQUIRE(std::abs(j[1] - j1) <= 1e-13 * std::max(1.0, std::abs(j1)) * std::exp(std::abs(z.imag())));
    }
  }
}

TEST_CASE("upward and downward recurrences agree where both are stable") {
  const int N = 40;
  for (double x = N; x <= 2.0 * N; x += 3.0) {
    for (cplx z : {cplx(x, 0.0), cplx(x, 0.5)}) {
      const auto up = j_batch(z, N, BesselMethod::upward);
      const auto down = j_batch(z, N, BesselMethod::downward);
      for (int n = 0; n <= N; ++n) REQUIRE(std::abs(up[n] - down[n]) <= 1e-10 * std::max(std::abs(down[n]), 1e-3 * std::abs(down[0]) + 1e-300));
    }
  }
}

TEST_CASE("small arguments use the series") {
  const cplx z(3e-5, 1e-5);
  const auto j = j_batch(z, 4);
  CHECK(std::abs(j[0] - (1.0 - z * z / 6.0)) <= 1e-17);
  CHECK(std::abs(j[1] - z / 3.0 * (1.0 - z * z / 10.0)) <= 1e-20);
  CHECK(std::abs(j[2] - z * z / 15.0 * (1.0 - z * z / 14.0)) <= 1e-15 * std::abs(z * z / 15.0));
}

TEST_CASE("errors and underflow") {
  CHECK_THROWS_AS(j_batch(1.0, kBesselOrderCap + 1), RangeError);
  CHECK_THROWS_AS(j_batch(1.0, -1), DomainError);
  std::vector<cplx> out(3);
  CHECK_THROWS_AS(j_batch_into(1.0, 5, out), DomainError);
  const auto j = j_batch(1e-3, 200);
  CHECK(j[200] == cplx(0.0));
  for (const cplx v : j) REQUIRE(std::isfinite(v.real()));
}

}
