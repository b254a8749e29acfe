#pragma once

#include <complex>

// Closed-form two-atom cooperative coefficients, dimer spectra and
// field-coupling strengths. Units throughout the library: the single-atom
// radiative rate gamma is 1, lengths are normalized separations (q*r with q
// the transition wavenumber), times are 1/gamma.

namespace sdq::rddi {

// Coherent exchange rate and cooperative decay coefficient of an atom pair.
struct CouplingCoefficients {
  double delta;    // level-shift / hopping rate
  double gamma12;  // cross-damping coefficient, |gamma12| <= 1
};

// Complex eigenvalues and decay rates of the four dimer states.
// Real parts are energy offsets from the bare transition frequency (one unit
// of the reference per excitation), imaginary parts are -rate/2.
struct DimerSpectrum {
  std::complex<double> lambda_ground;          // 0 by construction
  std::complex<double> lambda_plus;            // +delta - i*gamma_plus/2
  std::complex<double> lambda_minus;           // -delta - i*gamma_minus/2
  std::complex<double> lambda_double_excited;  // -i*gamma_double_excited/2
  double gamma_plus;            // 1 + gamma12 (superradiant)
  double gamma_minus;           // 1 - gamma12 (subradiant)
  double gamma_double_excited;  // exactly 2
};

// Rabi frequencies of a drive on the symmetric / antisymmetric transitions.
struct FieldCouplings {
  std::complex<double> omega_plus;
  std::complex<double> omega_minus;
};

// Exchange rates between two dimers on the subradiant and superradiant
// transitions (small-separation closed forms).
struct InterdimerRates {
  double delta_minus;
  double delta_plus;
  bool asymptotics_strained;  // xi > 0.3: closed forms degrade
};

// Retarded dipole-dipole kernel at separation r (in 1/q) and angle theta
// between the transition dipole axis and the separation axis.
double exchange_kernel(double r, double theta);  // coherent part
double decay_kernel(double r, double theta);     // dissipative part

// Kernel pair at normalized separation zeta. Throws std::domain_error for
// zeta <= 0 (coincident atoms are a limit, not an input).
CouplingCoefficients coupling_coefficients(double zeta, double theta);

DimerSpectrum dimer_spectrum(const CouplingCoefficients& coeffs);

// omega_pm = 2^{-1/2} * omega * [1 +- exp(-i k.r12)] with k.r12 = zeta*cos(phi).
// Exact for all zeta; requires zeta >= 0.
FieldCouplings field_dimer_couplings(std::complex<double> omega, double zeta,
                                     double phi);

// delta_minus = 3*zeta^2/(20*xi^3), delta_plus = 3/(2*xi^3).
// Throws std::invalid_argument when xi <= zeta (overlapping dimers).
InterdimerRates interdimer_exchange_rates(double zeta, double xi);

}  // namespace sdq::rddi
