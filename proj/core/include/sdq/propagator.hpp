#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sdq/model.hpp"

namespace sdq {

// Raised when adaptive stepping underflows; the usual cause is a frame in
// which the drive or level splittings oscillate at frequencies far above
// 1/tolerance. Re-expressing the model in a rotating frame that removes the
// fast scale fixes it.
struct StiffnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Propagates d/dt v = G v for a fixed (generally non-Hermitian) generator.
// Uses the eigendecomposition of G when it reconstructs G accurately and
// falls back to a scaling-and-squaring matrix exponential otherwise.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(Matrix generator);

  Vector apply(const Vector& v, double t) const;
  Matrix propagator(double t) const;  // exp(G t)
  bool spectral_path() const { return spectral_ok_; }

 private:
  Matrix generator_;
  Matrix vectors_, inverse_;
  Vector values_;
  bool spectral_ok_ = false;
};

// Column-stacking Liouvillian of drho/dt = -i[H, rho] + sum_m rate_m
// (op rho op^dag - 1/2 {op^dag op, rho}).
Matrix liouvillian(const Matrix& h, const std::vector<JumpChannel>& channels);

// Exact propagation of a constant Liouvillian. Results are hermitized and
// the trace is rescaled to its initial value; a raw trace drift beyond 1e-6
// indicates a malformed generator and throws.
class LiouvillePropagator {
 public:
  explicit LiouvillePropagator(const Matrix& h,
                               const std::vector<JumpChannel>& channels);

  Matrix apply(const Matrix& rho, double t) const;

 private:
  SpectralPropagator prop_;
  int dim_;
};

// Adaptive Cash-Karp 4(5) integration of dy/dt = f(t, y) from t0 to t1.
// Throws StiffnessError when the accepted step underflows.
Vector integrate_adaptive(
    const std::function<void(double, const Vector&, Vector&)>& f, Vector y,
    double t0, double t1, double tol);

}  // namespace sdq
