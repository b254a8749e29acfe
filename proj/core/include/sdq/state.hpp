#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace sdq {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// The Hilbert space a state lives in. Atom-level spaces are tensor products
// of two-level atoms (atom 0 is the lowest bit of the basis index, so
// |g..ge⟩ has index 1). Dimer-level spaces are products of four-level dimers
// ordered {G, -, +, E} per dimer, dimer A in the low digit: index =
// a + 4*b for dimer states a, b.
enum class SpaceKind { Atoms, Dimers };

struct StateSpace {
  SpaceKind kind = SpaceKind::Atoms;
  int count = 1;  // number of atoms, or of dimers

  int dimension() const;
  bool operator==(const StateSpace&) const = default;
};

enum class Basis { Bare, Dimer, TwoDimer };

struct Population {
  std::string label;
  double value;
};

// Quantum state over a fixed labeled basis: either a pure amplitude vector
// or a density matrix.
class DensityState {
 public:
  DensityState() = default;
  static DensityState pure(StateSpace space, Vector amplitudes);
  static DensityState density(StateSpace space, Matrix rho);

  const StateSpace& space() const { return space_; }
  bool is_pure() const { return is_pure_; }
  int dimension() const { return space_.dimension(); }

  const Vector& amplitudes() const;  // throws when not pure
  Matrix density_matrix() const;     // |psi><psi| when pure

  double trace() const;

  // Checks hermiticity (1e-12), positivity (eigenvalues >= -1e-10), trace and
  // norm bounds. Throws std::invalid_argument on violation.
  void validate() const;

  // State dump: complex numbers as [re, im] pairs, basis labels included.
  std::string to_json() const;

  DensityState in_basis_of(const Matrix& unitary) const;

 private:
  StateSpace space_;
  bool is_pure_ = true;
  Vector pure_;
  Matrix rho_;
};

// Unit basis vector |index⟩ in the given space.
DensityState basis_state(StateSpace space, int index);

// Pure dimer-level product state from two labels in {"G", "-", "+", "E"}.
DensityState two_dimer_state(const std::string& a, const std::string& b);

// Single-dimer (2-atom) pure states by label.
DensityState single_dimer_state(const std::string& label);

// Basis labels for a space in the requested basis.
std::vector<std::string> basis_labels(StateSpace space, Basis basis);

// Unitary mapping bare coordinates to the requested basis (rows indexed by
// the new basis states). Throws on dimension/semantics mismatch.
Matrix basis_transform(StateSpace space, Basis basis);

// Labeled populations; they sum to the trace.
std::vector<Population> populations(const DensityState& state, Basis basis);

// Fidelity of a state against a pure target, |<target|psi>|^2 or <t|rho|t>.
double fidelity(const DensityState& state, const Vector& target);

}  // namespace sdq
