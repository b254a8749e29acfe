#include "sdq/propagator.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace sdq {

namespace {
constexpr Complex kI{0.0, 1.0};
}

SpectralPropagator::SpectralPropagator(Matrix generator)
    : generator_(std::move(generator)) {
  Eigen::ComplexEigenSolver<Matrix> es(generator_);
  if (es.info() == Eigen::Success) {
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
    Eigen::FullPivLU<Matrix> lu(vectors_);
    if (lu.isInvertible()) {
      inverse_ = lu.inverse();
      const Matrix recon =
          vectors_ * values_.asDiagonal() * inverse_;
      const double scale = std::max(1.0, generator_.cwiseAbs().maxCoeff());
      spectral_ok_ =
          (recon - generator_).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    }
  }
}

Vector SpectralPropagator::apply(const Vector& v, double t) const {
  if (spectral_ok_) {
    Vector phases(values_.size());
    for (int i = 0; i < values_.size(); ++i) {
      phases[i] = std::exp(values_[i] * t);
    }
    return vectors_ * (phases.asDiagonal() * (inverse_ * v));
  }
  return propagator(t) * v;
}

Matrix SpectralPropagator::propagator(double t) const {
  if (spectral_ok_) {
    Vector phases(values_.size());
    for (int i = 0; i < values_.size(); ++i) {
      phases[i] = std::exp(values_[i] * t);
    }
    return vectors_ * phases.asDiagonal() * inverse_;
  }
  return (generator_ * t).exp();
}

Matrix liouvillian(const Matrix& h, const std::vector<JumpChannel>& channels) {
  const int n = static_cast<int>(h.rows());
  const Matrix id = Matrix::Identity(n, n);
  Matrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& c : channels) {
    if (c.rate == 0.0) continue;
    const Matrix cdc = c.op.adjoint() * c.op;
    l += c.rate * (kron(c.op.conjugate(), c.op) -
                   0.5 * (kron(id, cdc) + kron(cdc.transpose(), id)));
  }
  return l;
}

LiouvillePropagator::LiouvillePropagator(
    const Matrix& h, const std::vector<JumpChannel>& channels)
    : prop_(liouvillian(h, channels)), dim_(static_cast<int>(h.rows())) {}

Matrix LiouvillePropagator::apply(const Matrix& rho, double t) const {
  const double tr0 = rho.trace().real();
  const Vector vec = Eigen::Map<const Vector>(rho.data(), dim_ * dim_);
  const Vector out = prop_.apply(vec, t);
  Matrix next = Eigen::Map<const Matrix>(out.data(), dim_, dim_);
  next = 0.5 * (next + next.adjoint()).eval();
  const double tr = next.trace().real();
  if (std::abs(tr - tr0) > 1e-6 * std::max(tr0, 1e-12)) {
    throw std::logic_error("Liouvillian lost trace; generator is malformed");
  }
  if (tr > 0.0) next *= tr0 / tr;
  return next;
}

Vector integrate_adaptive(
    const std::function<void(double, const Vector&, Vector&)>& f, Vector y,
    double t0, double t1, double tol) {
  // Cash-Karp embedded pair.
  static const double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
  static const double b21 = 0.2;
  static const double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  static const double b41 = 0.3, b42 = -0.9, b43 = 1.2;
  static const double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0,
                      b54 = 35.0 / 27.0;
  static const double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0,
                      b63 = 575.0 / 13824.0, b64 = 44275.0 / 110592.0,
                      b65 = 253.0 / 4096.0;
  static const double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0,
                      c4 = 125.0 / 594.0, c6 = 512.0 / 1771.0;
  static const double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                      d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                      d6 = c6 - 0.25;

  if (t1 <= t0) return y;
  tol = std::max(tol, 1e-14);
  const double span = t1 - t0;
  const double dt_min = span * 1e-13;

  double t = t0;
  double dt = span / 64.0;
  Vector k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()),
      k6(y.size()), ytmp(y.size()), yerr(y.size()), ynew(y.size());

  while (t < t1) {
    dt = std::min(dt, t1 - t);
    f(t, y, k1);
    ytmp = y + dt * b21 * k1;
    f(t + a2 * dt, ytmp, k2);
    ytmp = y + dt * (b31 * k1 + b32 * k2);
    f(t + a3 * dt, ytmp, k3);
    ytmp = y + dt * (b41 * k1 + b42 * k2 + b43 * k3);
    f(t + a4 * dt, ytmp, k4);
    ytmp = y + dt * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4);
    f(t + a5 * dt, ytmp, k5);
    ytmp = y + dt * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5);
    f(t + a6 * dt, ytmp, k6);

    ynew = y + dt * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    yerr = dt * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);

    const double scale = std::max(1.0, std::max(y.norm(), ynew.norm()));
    const double err = yerr.norm() / (tol * scale);
    if (err <= 1.0) {
      t += dt;
      y.swap(ynew);
      dt *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
    } else {
      dt *= std::max(0.1, 0.9 * std::pow(err, -0.25));
      if (dt < dt_min) {
        throw StiffnessError(
            "adaptive step underflow: frequency scales exceed integrator "
            "capability; rotate the frame to remove the fast scale");
      }
    }
  }
  return y;
}

}  // namespace sdq
