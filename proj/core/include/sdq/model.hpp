#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "sdq/state.hpp"

namespace sdq {

// A classical drive in the rotating-wave approximation. `rabi` is the drive
// matrix element on a single atom (H_drive = rabi * e^{i k.(r_j - origin)}
// sigma_j^+ + h.c.), `detuning` is the drive frequency minus the nominal
// transition frequency. Fields are active on [t_on, t_off).
struct FieldSpec {
  Complex rabi{0.0, 0.0};
  double detuning = 0.0;
  Eigen::Vector3d k_hat = Eigen::Vector3d::UnitX();
  double t_on = 0.0;
  double t_off = std::numeric_limits<double>::infinity();
  Eigen::Vector3d phase_origin = Eigen::Vector3d::Zero();
};

struct AtomSpec {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // units of 1/q
  double detuning = 0.0;  // site offset of the transition frequency
};

// N two-level atoms (N <= 4) with pairwise retarded dipole-dipole coupling,
// drives, and a rotating-frame reference (relative to the nominal
// transition frequency).
struct SystemModel {
  std::vector<AtomSpec> atoms;
  std::vector<FieldSpec> fields;
  double frame_frequency = 0.0;
  Eigen::Vector3d dipole_axis = Eigen::Vector3d::UnitZ();

  int n_atoms() const { return static_cast<int>(atoms.size()); }
  void validate() const;  // throws on empty/oversized/coincident geometry
};

struct JumpChannel {
  Matrix op;    // collective lowering operator
  double rate;  // decay rate of the channel
  std::string label;
};

// Collective decay description: the positive-semidefinite cross-damping
// matrix and its eigenchannels.
struct Dissipator {
  Eigen::MatrixXd gamma;
  std::vector<JumpChannel> channels;
};

// A drive acting on the dimer-level pair model.
struct DimerDrive {
  enum class Target { DimerA, DimerB, Chain };
  Complex rabi{0.0, 0.0};
  double detuning = 0.0;
  double t_on = 0.0;
  double t_off = std::numeric_limits<double>::infinity();
  Target target = Target::Chain;
};

// Piecewise-constant per-dimer shift of the transition frequency (the
// ac-Stark switch control).
struct StarkWindow {
  double t_on = 0.0;
  double t_off = 0.0;
  double shift_a = 0.0;
  double shift_b = 0.0;
};

// Two dimers at inter-dimer separation xi, each an exact four-level system
// from the intra-dimer kernel at zeta. Inter-dimer couplings act per
// symmetry species: the subradiant/superradiant transitions of a dimer
// couple to the like transitions of its neighbour through the point-emitter
// kernel at xi scaled by the transition width (exchange and cross-damping);
// unlike species decouple in the perpendicular geometry.
struct TwoDimerModel {
  double zeta = 0.02;
  double xi = 0.1;
  double detuning_a = 0.0;  // site offsets of the qubit transitions
  double detuning_b = 0.0;
  double frame_frequency = 0.0;
  std::vector<DimerDrive> drives;
  std::vector<StarkWindow> stark;
  bool dissipation = true;

  void validate() const;
};

// Compiled form shared by the propagation machinery: a Hermitian Hamiltonian
// at time t plus a fixed set of decay channels, with a segmentation of any
// evolution window into intervals on which the generator is constant or
// explicitly time dependent.
class EvolvableModel {
 public:
  virtual ~EvolvableModel() = default;
  virtual int dimension() const = 0;
  virtual StateSpace space() const = 0;
  virtual Matrix hamiltonian(double t) const = 0;
  virtual const std::vector<JumpChannel>& channels() const = 0;
  // Boundaries of [t0, t1] at which the generator structure changes.
  virtual std::vector<double> boundaries(double t0, double t1) const = 0;
  virtual bool constant_on(double t0, double t1) const = 0;

  // Anti-Hermitian damping part: -1/2 sum_m rate_m op_m^dag op_m.
  const Matrix& damping() const;
  // Conditional generator G(t) = -i H(t) - 1/2 sum rate op^dag op.
  Matrix conditional_generator(double t) const;

 protected:
  mutable Matrix damping_cache_;
};

std::unique_ptr<EvolvableModel> compile(const SystemModel& model);
std::unique_ptr<EvolvableModel> compile(const TwoDimerModel& model);

// Lowering operator of atom j in an n-atom product space.
Matrix atom_lowering(int atom, int n_atoms);

// Kronecker product, row-major blocks: (a ⊗ b)(ia*nb+ib, ja*nb+jb) = a*b.
Matrix kron(const Matrix& a, const Matrix& b);

// Convenience geometries (dipoles along z, intra-dimer axis along x,
// inter-dimer axis along y; the first atom of a dimer sits at the reference
// point and the drive phase is zero there).
SystemModel make_single_dimer(double zeta, double detuning_1 = 0.0,
                              double detuning_2 = 0.0);
SystemModel make_atom_pair_lattice(double zeta, double xi);  // four atoms

}  // namespace sdq
