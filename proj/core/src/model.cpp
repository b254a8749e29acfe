#include "sdq/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdq/rddi.hpp"

namespace sdq {

namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<double> merge_boundaries(std::vector<double> cuts, double t0,
                                     double t1) {
  cuts.push_back(t0);
  cuts.push_back(t1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out;
  for (double c : cuts) {
    if (c < t0 || c > t1) continue;
    if (out.empty() || c - out.back() > 1e-15 * std::max(1.0, std::abs(t1))) {
      out.push_back(c);
    }
  }
  if (out.size() < 2) out = {t0, t1};
  out.front() = t0;
  out.back() = t1;
  return out;
}

bool window_active(double on, double off, double t0, double t1) {
  return on < t1 && off > t0;
}

// Angle between the dipole axis and an interatomic separation.
double pair_angle(const Eigen::Vector3d& dipole, const Eigen::Vector3d& sep) {
  const double c = std::clamp(dipole.normalized().dot(sep.normalized()), -1.0, 1.0);
  return std::acos(c);
}

class AtomModel final : public EvolvableModel {
 public:
  explicit AtomModel(const SystemModel& m) : model_(m) {
    model_.validate();
    const int n = model_.n_atoms();
    const int dim = 1 << n;

    static_ = Matrix::Zero(dim, dim);
    for (int j = 0; j < n; ++j) {
      const Matrix num = atom_lowering(j, n).adjoint() * atom_lowering(j, n);
      static_ += (model_.atoms[j].detuning - model_.frame_frequency) * num;
    }
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Identity(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const Eigen::Vector3d sep =
            model_.atoms[j].position - model_.atoms[k].position;
        const double zeta = sep.norm();
        const double theta = pair_angle(model_.dipole_axis, sep);
        const auto cc = rddi::coupling_coefficients(zeta, theta);
        const Matrix hop = atom_lowering(j, n).adjoint() * atom_lowering(k, n);
        static_ += cc.delta * (hop + hop.adjoint());
        gamma(j, k) = gamma(k, j) = cc.gamma12;
      }
    }

    // Collective channels from the eigendecomposition of gamma_jk.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
    if (es.eigenvalues().minCoeff() < -1e-9) {
      throw std::logic_error("cross-damping matrix is not positive semidefinite");
    }
    for (int m = 0; m < n; ++m) {
      const double rate = std::max(0.0, es.eigenvalues()[m]);
      Matrix op = Matrix::Zero(dim, dim);
      for (int j = 0; j < n; ++j) {
        op += es.eigenvectors()(j, m) * atom_lowering(j, n);
      }
      channels_.push_back({std::move(op), rate, "c" + std::to_string(m)});
    }
    gamma_ = std::move(gamma);

    // Per-field raising operators with their spatial phases baked in.
    for (const auto& f : model_.fields) {
      Matrix d = Matrix::Zero(dim, dim);
      for (int j = 0; j < n; ++j) {
        const double phase = f.k_hat.normalized().dot(
            model_.atoms[j].position - f.phase_origin);
        d += f.rabi * std::exp(kI * phase) * atom_lowering(j, n).adjoint();
      }
      raisers_.push_back(std::move(d));
    }
  }

  int dimension() const override { return 1 << model_.n_atoms(); }
  StateSpace space() const override {
    return {SpaceKind::Atoms, model_.n_atoms()};
  }

  Matrix hamiltonian(double t) const override {
    Matrix h = static_;
    for (size_t i = 0; i < model_.fields.size(); ++i) {
      const auto& f = model_.fields[i];
      if (t < f.t_on || t >= f.t_off) continue;
      const double residual = model_.frame_frequency - f.detuning;
      const Complex ph = std::exp(kI * residual * t);
      h += ph * raisers_[i] + (ph * raisers_[i]).adjoint();
    }
    return h;
  }

  const std::vector<JumpChannel>& channels() const override { return channels_; }

  std::vector<double> boundaries(double t0, double t1) const override {
    std::vector<double> cuts;
    for (const auto& f : model_.fields) {
      cuts.push_back(f.t_on);
      if (std::isfinite(f.t_off)) cuts.push_back(f.t_off);
    }
    return merge_boundaries(std::move(cuts), t0, t1);
  }

  bool constant_on(double t0, double t1) const override {
    for (const auto& f : model_.fields) {
      if (!window_active(f.t_on, f.t_off, t0, t1)) continue;
      if (f.t_on > t0 || (std::isfinite(f.t_off) && f.t_off < t1)) return false;
      if (f.detuning != model_.frame_frequency) return false;
    }
    return true;
  }

  const Eigen::MatrixXd& gamma() const { return gamma_; }

 private:
  SystemModel model_;
  Matrix static_;
  std::vector<Matrix> raisers_;
  std::vector<JumpChannel> channels_;
  Eigen::MatrixXd gamma_;
};

// Per-dimer collective lowering operators in the {G, -, +, E} basis.
Matrix dimer_lowering_minus() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 1) = 1.0;   // G <- -
  c(1, 3) = -1.0;  // - <- E
  return c;
}

Matrix dimer_lowering_plus() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 2) = 1.0;  // G <- +
  c(2, 3) = 1.0;  // + <- E
  return c;
}

Matrix lift_a(const Matrix& op) { return kron(Matrix::Identity(4, 4), op); }
Matrix lift_b(const Matrix& op) { return kron(op, Matrix::Identity(4, 4)); }

class DimerPairModel final : public EvolvableModel {
 public:
  explicit DimerPairModel(const TwoDimerModel& m) : model_(m) {
    model_.validate();
    const auto cc = rddi::coupling_coefficients(model_.zeta, M_PI / 2.0);
    const auto spec = rddi::dimer_spectrum(cc);
    delta_intra_ = cc.delta;

    // Single-dimer level energies relative to the frame.
    auto levels = [&](double site) {
      Eigen::Vector4d e;
      const double d = site - model_.frame_frequency;
      e << 0.0, -delta_intra_ + d, delta_intra_ + d, 2.0 * d;
      return e;
    };
    level_a_ = levels(model_.detuning_a);
    level_b_ = levels(model_.detuning_b);

    // Same-species inter-dimer exchange through the point-emitter kernel at
    // xi, scaled by the transition widths.
    const double shape = rddi::exchange_kernel(model_.xi, M_PI / 2.0);
    const double cross = rddi::decay_kernel(model_.xi, M_PI / 2.0);
    const Matrix cm = dimer_lowering_minus();
    const Matrix cp = dimer_lowering_plus();
    hop_ = spec.gamma_minus * shape *
               (lift_a(cm).adjoint() * lift_b(cm)) +
           spec.gamma_plus * shape * (lift_a(cp).adjoint() * lift_b(cp));
    hop_ = hop_ + hop_.adjoint().eval();

    if (model_.dissipation) {
      auto species_channels = [&](const Matrix& c, double width,
                                  const std::string& tag) {
        const double sym = width * (1.0 + cross);
        const double anti = width * (1.0 - cross);
        const double s = 1.0 / std::sqrt(2.0);
        channels_.push_back({s * (lift_a(c) + lift_b(c)), sym, tag + "+"});
        channels_.push_back({s * (lift_a(c) - lift_b(c)), anti, tag + "-"});
      };
      species_channels(cm, spec.gamma_minus, "sub");
      species_channels(cp, spec.gamma_plus, "sup");
    }

    for (const auto& d : model_.drives) {
      raisers_.push_back(drive_raising(d));
    }
  }

  int dimension() const override { return 16; }
  StateSpace space() const override { return {SpaceKind::Dimers, 2}; }

  Matrix hamiltonian(double t) const override {
    Matrix h = hop_;
    Eigen::Vector4d ea = level_a_, eb = level_b_;
    for (const auto& w : model_.stark) {
      if (t < w.t_on || t >= w.t_off) continue;
      ea += w.shift_a * excitation_counts();
      eb += w.shift_b * excitation_counts();
    }
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        h(a + 4 * b, a + 4 * b) += ea[a] + eb[b];
      }
    }
    for (size_t i = 0; i < model_.drives.size(); ++i) {
      const auto& d = model_.drives[i];
      if (t < d.t_on || t >= d.t_off) continue;
      const Complex ph =
          std::exp(kI * (model_.frame_frequency - d.detuning) * t);
      h += ph * raisers_[i] + (ph * raisers_[i]).adjoint();
    }
    return h;
  }

  const std::vector<JumpChannel>& channels() const override { return channels_; }

  std::vector<double> boundaries(double t0, double t1) const override {
    std::vector<double> cuts;
    for (const auto& d : model_.drives) {
      cuts.push_back(d.t_on);
      if (std::isfinite(d.t_off)) cuts.push_back(d.t_off);
    }
    for (const auto& w : model_.stark) {
      cuts.push_back(w.t_on);
      cuts.push_back(w.t_off);
    }
    return merge_boundaries(std::move(cuts), t0, t1);
  }

  bool constant_on(double t0, double t1) const override {
    for (const auto& d : model_.drives) {
      if (!window_active(d.t_on, d.t_off, t0, t1)) continue;
      if (d.t_on > t0 || (std::isfinite(d.t_off) && d.t_off < t1)) return false;
      if (d.detuning != model_.frame_frequency) return false;
    }
    for (const auto& w : model_.stark) {
      if (!window_active(w.t_on, w.t_off, t0, t1)) continue;
      if (w.t_on > t0 || w.t_off < t1) return false;
    }
    return true;
  }

 private:
  static Eigen::Vector4d excitation_counts() {
    return Eigen::Vector4d{0.0, 1.0, 1.0, 2.0};
  }

  Matrix drive_raising(const DimerDrive& d) const {
    const Matrix cm = dimer_lowering_minus();
    const Matrix cp = dimer_lowering_plus();
    auto dimer_raiser = [&](double phi) {
      const auto om =
          rddi::field_dimer_couplings(d.rabi, model_.zeta, phi);
      return (om.omega_minus * cm.adjoint() + om.omega_plus * cp.adjoint())
          .eval();
    };
    switch (d.target) {
      case DimerDrive::Target::DimerA:
        return lift_a(dimer_raiser(0.0));
      case DimerDrive::Target::DimerB:
        return lift_b(dimer_raiser(0.0));
      case DimerDrive::Target::Chain: {
        // Propagation along the inter-dimer axis: no coupling to the qubit
        // transitions, phase exp(i xi) on dimer B.
        const Matrix r = dimer_raiser(M_PI / 2.0);
        return lift_a(r) + std::exp(kI * model_.xi) * lift_b(r);
      }
    }
    throw std::logic_error("unreachable");
  }

  TwoDimerModel model_;
  double delta_intra_;
  Eigen::Vector4d level_a_, level_b_;
  Matrix hop_;
  std::vector<Matrix> raisers_;
  std::vector<JumpChannel> channels_;
};

}  // namespace

void SystemModel::validate() const {
  if (atoms.empty() || atoms.size() > 4) {
    throw std::invalid_argument("SystemModel holds between 1 and 4 atoms");
  }
  for (size_t j = 0; j < atoms.size(); ++j) {
    if (!std::isfinite(atoms[j].detuning)) {
      throw std::invalid_argument("site detunings must be finite");
    }
    for (size_t k = j + 1; k < atoms.size(); ++k) {
      if ((atoms[j].position - atoms[k].position).norm() <= 0.0) {
        throw std::invalid_argument("atoms must have distinct positions");
      }
    }
  }
  for (const auto& f : fields) {
    if (!(f.t_on < f.t_off)) {
      throw std::invalid_argument("field window must satisfy t_on < t_off");
    }
    if (std::abs(f.k_hat.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("field k_hat must be a unit vector");
    }
  }
}

void TwoDimerModel::validate() const {
  if (!(zeta > 0.0)) throw std::domain_error("zeta must be positive");
  if (!(xi > zeta)) {
    throw std::invalid_argument("xi <= zeta, dimers overlap");
  }
  for (const auto& d : drives) {
    if (!(d.t_on < d.t_off)) {
      throw std::invalid_argument("drive window must satisfy t_on < t_off");
    }
  }
}

const Matrix& EvolvableModel::damping() const {
  if (damping_cache_.size() == 0) {
    const int dim = dimension();
    Matrix d = Matrix::Zero(dim, dim);
    for (const auto& c : channels()) {
      d += 0.5 * c.rate * (c.op.adjoint() * c.op);
    }
    damping_cache_ = std::move(d);
  }
  return damping_cache_;
}

Matrix EvolvableModel::conditional_generator(double t) const {
  return Complex(0.0, -1.0) * hamiltonian(t) - damping();
}

std::unique_ptr<EvolvableModel> compile(const SystemModel& model) {
  return std::make_unique<AtomModel>(model);
}

std::unique_ptr<EvolvableModel> compile(const TwoDimerModel& model) {
  return std::make_unique<DimerPairModel>(model);
}

Matrix atom_lowering(int atom, int n_atoms) {
  const int dim = 1 << n_atoms;
  const int bit = 1 << atom;
  Matrix op = Matrix::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    if (b & bit) op(b & ~bit, b) = 1.0;
  }
  return op;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

SystemModel make_single_dimer(double zeta, double detuning_1,
                              double detuning_2) {
  SystemModel m;
  m.atoms.push_back({Eigen::Vector3d::Zero(), detuning_1});
  m.atoms.push_back({Eigen::Vector3d(-zeta, 0.0, 0.0), detuning_2});
  return m;
}

SystemModel make_atom_pair_lattice(double zeta, double xi) {
  SystemModel m;
  m.atoms.push_back({Eigen::Vector3d(0.0, 0.0, 0.0), 0.0});
  m.atoms.push_back({Eigen::Vector3d(-zeta, 0.0, 0.0), 0.0});
  m.atoms.push_back({Eigen::Vector3d(0.0, xi, 0.0), 0.0});
  m.atoms.push_back({Eigen::Vector3d(-zeta, xi, 0.0), 0.0});
  return m;
}

}  // namespace sdq
