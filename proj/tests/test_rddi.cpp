#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "sdq/rddi.hpp"
#include "sdq/rng.hpp"

using namespace sdq;
using Complex = std::complex<double>;

namespace {

// Independent kernel oracle in extended precision. Direct trigonometric
// form; long double keeps ~12 digits through the small-argument
// cancellation down to zeta ~ 0.02.
long double oracle_gamma12(long double r) {
  return 1.5L * (std::sin(r) / r + std::cos(r) / (r * r) -
                 std::sin(r) / (r * r * r));
}

long double oracle_delta(long double r) {
  return 0.75L * (-std::cos(r) / r + std::sin(r) / (r * r) +
                  std::cos(r) / (r * r * r));
}

}  // namespace

TEST_CASE("subradiant rate at the reference separation") {
  const auto cc = rddi::coupling_coefficients(0.02, M_PI / 2);
  const double gamma_minus = 1.0 - cc.gamma12;
  CHECK(std::abs(gamma_minus - 8e-5) < 0.02 * 8e-5);  // quoted to 1 digit
  // Leading-order expansion zeta^2/5 - 3 zeta^4/280.
  const double expansion = 0.02 * 0.02 / 5.0 - 3.0 * std::pow(0.02, 4) / 280.0;
  CHECK(gamma_minus == doctest::Approx(expansion).epsilon(1e-9));
}

TEST_CASE("exchange rate matches the independent kernel oracle") {
  for (double zeta : {0.02, 0.05, 0.1, 0.3, 0.5, 1.0, 2.0}) {
    const auto cc = rddi::coupling_coefficients(zeta, M_PI / 2);
    const double want_d = static_cast<double>(oracle_delta(zeta));
    const double want_g = static_cast<double>(oracle_gamma12(zeta));
    CHECK(cc.delta == doctest::Approx(want_d).epsilon(1e-12));
    CHECK(cc.gamma12 == doctest::Approx(want_g).epsilon(1e-10));
  }
  // Near-field asymptote, 0.1% at the reference point.
  const auto cc = rddi::coupling_coefficients(0.02, M_PI / 2);
  CHECK(std::abs(cc.delta - 9.375e4) / 9.375e4 < 1e-3);
}

TEST_CASE("far-separated atoms decouple") {
  const auto cc = rddi::coupling_coefficients(1e3, M_PI / 2);
  CHECK(std::abs(cc.delta) < 1e-2);
  CHECK(std::abs(cc.gamma12) < 1e-2);
}

TEST_CASE("coincident atoms are rejected") {
  CHECK_THROWS_AS(rddi::coupling_coefficients(0.0, M_PI / 2),
                  std::domain_error);
  CHECK_THROWS_AS(rddi::coupling_coefficients(-1.0, M_PI / 2),
                  std::domain_error);
}

TEST_CASE("kernel limits and bounds") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double zeta = 1e-4 + rng.uniform() * 20.0;
    const double theta = rng.uniform() * M_PI;
    const auto cc = rddi::coupling_coefficients(zeta, theta);
    CAPTURE(zeta);
    CAPTURE(theta);
    CHECK(std::abs(cc.gamma12) <= 1.0 + 1e-12);
  }
  // gamma12 -> 1 as zeta -> 0 for every orientation.
  for (double theta : {0.0, 0.3, M_PI / 2, 2.0}) {
    const auto cc = rddi::coupling_coefficients(1e-6, theta);
    CHECK(cc.gamma12 == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("dimer spectrum closed form") {
  SUBCASE("non-interacting atoms") {
    const auto s = rddi::dimer_spectrum({0.0, 0.0});
    CHECK(s.gamma_plus == 1.0);
    CHECK(s.gamma_minus == 1.0);
    CHECK(s.lambda_plus == s.lambda_minus);
  }
  SUBCASE("reference separation") {
    const auto cc = rddi::coupling_coefficients(0.02, M_PI / 2);
    const auto s = rddi::dimer_spectrum(cc);
    CHECK(s.gamma_plus == doctest::Approx(2.0 - 8e-5).epsilon(1e-6));
    CHECK(s.gamma_minus == doctest::Approx(8e-5).epsilon(0.02));
    CHECK(s.gamma_plus + s.gamma_minus == 2.0);  // exact sum rule
    CHECK(s.lambda_ground == Complex(0.0, 0.0));
    CHECK(s.gamma_double_excited == 2.0);
    // Splitting and symmetry of the real parts.
    CHECK(s.lambda_plus.real() - s.lambda_minus.real() ==
          doctest::Approx(2.0 * cc.delta));
    CHECK(s.lambda_plus.real() + s.lambda_minus.real() == 0.0);
  }
  SUBCASE("sum rule is exact for random separations") {
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
      const double zeta = 1e-3 + rng.uniform() * 3.0;
      const auto s =
          rddi::dimer_spectrum(rddi::coupling_coefficients(zeta, M_PI / 2));
      CHECK(s.gamma_plus + s.gamma_minus == 2.0);
    }
  }
}

TEST_CASE("asymptotic consistency window") {
  for (double zeta = 1e-3; zeta <= 0.05; zeta *= 1.35) {
    const auto cc = rddi::coupling_coefficients(zeta, M_PI / 2);
    const double gm = 1.0 - cc.gamma12;
    CAPTURE(zeta);
    CHECK(std::abs(gm - zeta * zeta / 5.0) / gm < 0.02);
    const double near = 3.0 / (4.0 * zeta * zeta * zeta);
    CHECK(std::abs(cc.delta - near) / cc.delta < 0.01);
  }
}

TEST_CASE("subradiant rate increases monotonically up to 0.5") {
  double prev = 0.0;
  for (int i = 1; i <= 500; ++i) {
    const double zeta = 0.5 * i / 500.0;
    const double gm =
        1.0 - rddi::coupling_coefficients(zeta, M_PI / 2).gamma12;
    CHECK(gm > prev);
    prev = gm;
  }
}

TEST_CASE("field couplings") {
  SUBCASE("perpendicular propagation leaves the dark state dark") {
    const auto om = rddi::field_dimer_couplings(30.0, 0.02, M_PI / 2);
    CHECK(std::abs(om.omega_minus) < 1e-14);
    CHECK(std::abs(om.omega_plus) == doctest::Approx(std::sqrt(2.0) * 30.0));
  }
  SUBCASE("parallel propagation maximizes the qubit coupling") {
    const auto om = rddi::field_dimer_couplings(30.0, 0.02, 0.0);
    CHECK(om.omega_minus.imag() == doctest::Approx(0.42426).epsilon(1e-3));
    CHECK(std::abs(om.omega_minus) == doctest::Approx(0.4243).epsilon(1e-3));
  }
  SUBCASE("coincident atoms couple fully symmetrically") {
    const auto om = rddi::field_dimer_couplings(Complex(3.0, 1.0), 0.0, 0.7);
    CHECK(om.omega_minus == Complex(0.0, 0.0));
    CHECK(std::abs(om.omega_plus - std::sqrt(2.0) * Complex(3.0, 1.0)) <
          1e-14);
  }
  SUBCASE("coupling conservation is an exact identity") {
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
      const Complex omega(rng.uniform() * 50.0 - 25.0,
                          rng.uniform() * 50.0 - 25.0);
      const double zeta = rng.uniform() * 5.0;
      const double phi = rng.uniform() * 2.0 * M_PI;
      const auto om = rddi::field_dimer_couplings(omega, zeta, phi);
      const double lhs = std::norm(om.omega_plus) + std::norm(om.omega_minus);
      CHECK(lhs == doctest::Approx(2.0 * std::norm(omega)).epsilon(1e-13));
    }
  }
}

TEST_CASE("interdimer exchange rates") {
  const auto r = rddi::interdimer_exchange_rates(0.02, 0.1);
  CHECK(r.delta_minus == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(r.delta_plus == doctest::Approx(1500.0).epsilon(1e-12));
  CHECK(r.delta_plus / r.delta_minus ==
        doctest::Approx(10.0 / (0.02 * 0.02)).epsilon(1e-12));
  CHECK_FALSE(r.asymptotics_strained);
  CHECK(rddi::interdimer_exchange_rates(0.02, 0.4).asymptotics_strained);
  CHECK_THROWS_AS(rddi::interdimer_exchange_rates(0.1, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(rddi::interdimer_exchange_rates(0.1, 0.05),
                  std::invalid_argument);
}
