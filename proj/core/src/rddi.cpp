#include "sdq/rddi.hpp"

#include <cmath>
#include <stdexcept>

namespace sdq::rddi {

namespace {

// sin(r)/r, stable everywhere.
double sinc(double r) {
  if (std::abs(r) < 0.05) {
    const double r2 = r * r;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
      term *= -r2 / ((2 * k) * (2 * k + 1));
      sum += term;
    }
    return sum;
  }
  return std::sin(r) / r;
}

// cos(r)/r^2 - sin(r)/r^3. Direct evaluation cancels catastrophically at
// small r; the series sum_{k>=1} (-1)^k (2k) r^{2k-2} / (2k+1)! is exact.
double cos2_minus_sin3(double r) {
  if (std::abs(r) < 0.05) {
    const double r2 = r * r;
    double sum = -1.0 / 3.0;
    double coeff = -1.0 / 3.0;  // (-1)^k (2k)/(2k+1)! at k=1
    double rp = 1.0;
    for (int k = 2; k <= 8; ++k) {
      coeff *= -1.0 / ((2 * k - 2) * (2 * k + 1));
      rp *= r2;
      sum += coeff * rp;
    }
    return sum;
  }
  return std::cos(r) / (r * r) - std::sin(r) / (r * r * r);
}

}  // namespace

double decay_kernel(double r, double theta) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double a = 1.0 - c2;
  const double b = 1.0 - 3.0 * c2;
  return 1.5 * (a * sinc(r) + b * cos2_minus_sin3(r));
}

double exchange_kernel(double r, double theta) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double a = 1.0 - c2;
  const double b = 1.0 - 3.0 * c2;
  // No cancellation here: the 1/r and 1/r^3 pieces dominate their partners.
  const double radiative = -std::cos(r) / r;
  const double near_field = std::sin(r) / (r * r) + std::cos(r) / (r * r * r);
  return 0.75 * (a * radiative + b * near_field);
}

CouplingCoefficients coupling_coefficients(double zeta, double theta) {
  if (!(zeta > 0.0)) {
    throw std::domain_error("coupling_coefficients: zeta must be positive");
  }
  return {exchange_kernel(zeta, theta), decay_kernel(zeta, theta)};
}

DimerSpectrum dimer_spectrum(const CouplingCoefficients& coeffs) {
  DimerSpectrum s;
  s.gamma_plus = 1.0 + coeffs.gamma12;
  s.gamma_minus = 1.0 - coeffs.gamma12;
  s.gamma_double_excited = 2.0;
  s.lambda_ground = {0.0, 0.0};
  s.lambda_plus = {coeffs.delta, -0.5 * s.gamma_plus};
  s.lambda_minus = {-coeffs.delta, -0.5 * s.gamma_minus};
  s.lambda_double_excited = {0.0, -1.0};
  return s;
}

FieldCouplings field_dimer_couplings(std::complex<double> omega, double zeta,
                                     double phi) {
  if (zeta < 0.0) {
    throw std::domain_error("field_dimer_couplings: zeta must be >= 0");
  }
  const double kr = zeta * std::cos(phi);
  const std::complex<double> phase = std::exp(std::complex<double>(0.0, -kr));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {inv_sqrt2 * omega * (1.0 + phase), inv_sqrt2 * omega * (1.0 - phase)};
}

InterdimerRates interdimer_exchange_rates(double zeta, double xi) {
  if (!(zeta > 0.0)) {
    throw std::domain_error("interdimer_exchange_rates: zeta must be positive");
  }
  if (!(xi > zeta)) {
    throw std::invalid_argument(
        "interdimer_exchange_rates: xi <= zeta, dimers overlap");
  }
  const double xi3 = xi * xi * xi;
  InterdimerRates r;
  r.delta_minus = 3.0 * zeta * zeta / (20.0 * xi3);
  r.delta_plus = 3.0 / (2.0 * xi3);
  r.asymptotics_strained = xi > 0.3;
  return r;
}

}  // namespace sdq::rddi
