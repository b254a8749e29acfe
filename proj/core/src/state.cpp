#include "sdq/state.hpp"

#include <json.hpp>
#include <stdexcept>

namespace sdq {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kEigTol = 1e-10;
constexpr double kTraceTol = 1e-9;

const char* kDimerLabels[4] = {"G", "-", "+", "E"};

int dimer_label_index(const std::string& label) {
  for (int i = 0; i < 4; ++i) {
    if (label == kDimerLabels[i]) return i;
  }
  throw std::invalid_argument("unknown dimer state label: " + label);
}

// 4x4 map from a two-atom bare basis (gg, eg, ge, ee) to (G, -, +, E).
Matrix single_dimer_transform() {
  Matrix u = Matrix::Zero(4, 4);
  const double s = 1.0 / std::sqrt(2.0);
  u(0, 0) = 1.0;               // G = gg
  u(1, 1) = s;  u(1, 2) = -s;  // - = (e1 g2 - g1 e2)/sqrt2
  u(2, 1) = s;  u(2, 2) = s;   // +
  u(3, 3) = 1.0;               // E = ee
  return u;
}

// Rotation replacing the {+G, G+} pair by {M, P} in a 16-dim dimer product
// space (dimer A is the low digit).
Matrix mp_rotation() {
  Matrix u = Matrix::Identity(16, 16);
  const int pg = 2 + 4 * 0;  // |+_A G_B>
  const int gp = 0 + 4 * 2;  // |G_A +_B>
  const double s = 1.0 / std::sqrt(2.0);
  u(pg, pg) = s;  u(pg, gp) = -s;  // M
  u(gp, pg) = s;  u(gp, gp) = s;   // P
  return u;
}

std::string atom_label(int index, int n_atoms) {
  std::string s = "|";
  for (int j = 0; j < n_atoms; ++j) {
    s += (index >> j) & 1 ? 'e' : 'g';
  }
  return s + ">";
}

}  // namespace

int StateSpace::dimension() const {
  return kind == SpaceKind::Atoms ? (1 << count) : 1 << (2 * count);
}

DensityState DensityState::pure(StateSpace space, Vector amplitudes) {
  if (amplitudes.size() != space.dimension()) {
    throw std::invalid_argument("pure state dimension mismatch");
  }
  DensityState s;
  s.space_ = space;
  s.is_pure_ = true;
  s.pure_ = std::move(amplitudes);
  return s;
}

DensityState DensityState::density(StateSpace space, Matrix rho) {
  if (rho.rows() != space.dimension() || rho.cols() != space.dimension()) {
    throw std::invalid_argument("density matrix dimension mismatch");
  }
  DensityState s;
  s.space_ = space;
  s.is_pure_ = false;
  s.rho_ = std::move(rho);
  return s;
}

const Vector& DensityState::amplitudes() const {
  if (!is_pure_) throw std::logic_error("state is not pure");
  return pure_;
}

Matrix DensityState::density_matrix() const {
  if (is_pure_) return pure_ * pure_.adjoint();
  return rho_;
}

double DensityState::trace() const {
  if (is_pure_) return pure_.squaredNorm();
  return rho_.trace().real();
}

void DensityState::validate() const {
  if (is_pure_) {
    const double n = pure_.squaredNorm();
    if (!(n > 0.0) || n > 1.0 + kTraceTol) {
      throw std::invalid_argument("pure-state norm outside (0, 1]");
    }
    return;
  }
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const double tr = rho_.trace().real();
  if (!(tr > 0.0) || tr > 1.0 + kTraceTol) {
    throw std::invalid_argument("density matrix trace outside (0, 1]");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kEigTol) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
}

DensityState DensityState::in_basis_of(const Matrix& u) const {
  if (u.rows() != dimension()) {
    throw std::invalid_argument("basis transform dimension mismatch");
  }
  if (is_pure_) return DensityState::pure(space_, u * pure_);
  return DensityState::density(space_, u * rho_ * u.adjoint());
}

std::string DensityState::to_json() const {
  nlohmann::json j;
  j["space"] = space_.kind == SpaceKind::Atoms ? "atoms" : "dimers";
  j["count"] = space_.count;
  j["basis"] = basis_labels(space_, Basis::Bare);
  if (is_pure_) {
    j["kind"] = "pure";
    auto& amps = j["amplitudes"] = nlohmann::json::array();
    for (int i = 0; i < pure_.size(); ++i) {
      amps.push_back({pure_[i].real(), pure_[i].imag()});
    }
  } else {
    j["kind"] = "density";
    auto& rows = j["rho"] = nlohmann::json::array();
    for (int r = 0; r < rho_.rows(); ++r) {
      auto row = nlohmann::json::array();
      for (int c = 0; c < rho_.cols(); ++c) {
        row.push_back({rho_(r, c).real(), rho_(r, c).imag()});
      }
      rows.push_back(std::move(row));
    }
  }
  return j.dump(2);
}

DensityState basis_state(StateSpace space, int index) {
  Vector v = Vector::Zero(space.dimension());
  v[index] = 1.0;
  return DensityState::pure(space, std::move(v));
}

DensityState two_dimer_state(const std::string& a, const std::string& b) {
  const StateSpace space{SpaceKind::Dimers, 2};
  return basis_state(space, dimer_label_index(a) + 4 * dimer_label_index(b));
}

DensityState single_dimer_state(const std::string& label) {
  const StateSpace space{SpaceKind::Atoms, 2};
  const Matrix u = single_dimer_transform();
  // Rows of u are the dimer states expressed in bare coordinates.
  Vector v = u.row(dimer_label_index(label)).conjugate().transpose();
  return DensityState::pure(space, std::move(v));
}

std::vector<std::string> basis_labels(StateSpace space, Basis basis) {
  std::vector<std::string> labels;
  const int dim = space.dimension();
  if (space.kind == SpaceKind::Atoms) {
    switch (basis) {
      case Basis::Bare:
        for (int i = 0; i < dim; ++i) labels.push_back(atom_label(i, space.count));
        return labels;
      case Basis::Dimer:
        if (space.count != 2) {
          throw std::invalid_argument("dimer basis needs a 2-atom space");
        }
        return {"G", "-", "+", "E"};
      case Basis::TwoDimer:
        if (space.count != 4) {
          throw std::invalid_argument("two-dimer basis needs a 4-atom space");
        }
        break;  // falls through to the shared dimer-product labels below
    }
  } else {
    if (space.count != 2) {
      throw std::invalid_argument("dimer-level spaces hold two dimers");
    }
    if (basis == Basis::Dimer) {
      throw std::invalid_argument("single-dimer basis on a two-dimer space");
    }
  }
  // Dimer-product labels, with {M, P} replacing {+G, G+} in TwoDimer.
  for (int i = 0; i < 16; ++i) {
    const int a = i % 4, b = i / 4;
    if (basis == Basis::TwoDimer && a == 2 && b == 0) {
      labels.push_back("M");
    } else if (basis == Basis::TwoDimer && a == 0 && b == 2) {
      labels.push_back("P");
    } else {
      labels.push_back(std::string(kDimerLabels[a]) + "." + kDimerLabels[b]);
    }
  }
  return labels;
}

Matrix basis_transform(StateSpace space, Basis basis) {
  const int dim = space.dimension();
  if (space.kind == SpaceKind::Atoms) {
    switch (basis) {
      case Basis::Bare:
        return Matrix::Identity(dim, dim);
      case Basis::Dimer:
        if (space.count != 2) {
          throw std::invalid_argument("dimer basis needs a 2-atom space");
        }
        return single_dimer_transform();
      case Basis::TwoDimer: {
        if (space.count != 4) {
          throw std::invalid_argument("two-dimer basis needs a 4-atom space");
        }
        const Matrix u1 = single_dimer_transform();
        Matrix u = Matrix::Zero(16, 16);
        // Atoms (0,1) form dimer A (low digit), atoms (2,3) dimer B.
        for (int ra = 0; ra < 4; ++ra)
          for (int rb = 0; rb < 4; ++rb)
            for (int ca = 0; ca < 4; ++ca)
              for (int cb = 0; cb < 4; ++cb)
                u(ra + 4 * rb, ca + 4 * cb) = u1(ra, ca) * u1(rb, cb);
        return mp_rotation() * u;
      }
    }
  }
  if (space.count != 2) {
    throw std::invalid_argument("dimer-level spaces hold two dimers");
  }
  switch (basis) {
    case Basis::Bare:
      return Matrix::Identity(dim, dim);
    case Basis::TwoDimer:
      return mp_rotation();
    case Basis::Dimer:
      throw std::invalid_argument("single-dimer basis on a two-dimer space");
  }
  throw std::logic_error("unreachable");
}

std::vector<Population> populations(const DensityState& state, Basis basis) {
  const Matrix u = basis_transform(state.space(), basis);
  const auto labels = basis_labels(state.space(), basis);
  std::vector<Population> pops;
  pops.reserve(labels.size());
  if (state.is_pure()) {
    const Vector v = u * state.amplitudes();
    for (size_t i = 0; i < labels.size(); ++i) {
      pops.push_back({labels[i], std::norm(v[static_cast<int>(i)])});
    }
  } else {
    const Matrix rho = u * state.density_matrix() * u.adjoint();
    for (size_t i = 0; i < labels.size(); ++i) {
      const int k = static_cast<int>(i);
      pops.push_back({labels[i], rho(k, k).real()});
    }
  }
  return pops;
}

double fidelity(const DensityState& state, const Vector& target) {
  if (target.size() != state.dimension()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  if (state.is_pure()) return std::norm(target.dot(state.amplitudes()));
  return (target.adjoint() * state.density_matrix() * target)(0, 0).real();
}

}  // namespace sdq
