#include "sdq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "sdq/rddi.hpp"
#include "sdq/rng.hpp"

namespace sdq {

namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<std::pair<double, double>> segment_list(const EvolvableModel& m,
                                                    double duration) {
  const auto cuts = m.boundaries(0.0, duration);
  std::vector<std::pair<double, double>> segs;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    segs.emplace_back(cuts[i], cuts[i + 1]);
  }
  return segs;
}

Matrix time_dependent_liouvillian(const EvolvableModel& m, double t) {
  return liouvillian(m.hamiltonian(t), m.channels());
}

}  // namespace

Matrix build_hamiltonian(const SystemModel& model, double t) {
  return compile(model)->hamiltonian(t);
}

Dissipator build_dissipator(const SystemModel& model) {
  model.validate();
  const int n = model.n_atoms();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const Eigen::Vector3d sep = model.atoms[j].position - model.atoms[k].position;
      const double c =
          std::clamp(model.dipole_axis.normalized().dot(sep.normalized()), -1.0, 1.0);
      gamma(j, k) = gamma(k, j) =
          rddi::decay_kernel(sep.norm(), std::acos(c));
    }
  }
  Dissipator d;
  d.gamma = gamma;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw std::logic_error("cross-damping matrix is not positive semidefinite");
  }
  for (int m = 0; m < n; ++m) {
    Matrix op = Matrix::Zero(1 << n, 1 << n);
    for (int j = 0; j < n; ++j) {
      op += es.eigenvectors()(j, m) * atom_lowering(j, n);
    }
    d.channels.push_back({std::move(op), std::max(0.0, es.eigenvalues()[m]),
                          "c" + std::to_string(m)});
  }
  return d;
}

Matrix effective_hamiltonian(const SystemModel& model, double t) {
  const auto compiled = compile(model);
  return compiled->hamiltonian(t) - kI * compiled->damping();
}

std::vector<Emission> TrajectoryRecord::detected_events() const {
  std::vector<Emission> out;
  for (const auto& e : emission_events) {
    if (e.detected) out.push_back(e);
  }
  return out;
}

LindbladResult evolve_lindblad(const DensityState& state,
                               const EvolvableModel& model, double duration,
                               const LindbladOptions& options) {
  if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
  if (state.dimension() != model.dimension()) {
    throw std::invalid_argument("state/model dimension mismatch");
  }
  state.validate();

  Matrix rho = state.density_matrix();
  LindbladResult result;
  auto next_sample = options.sample_times.begin();

  for (const auto& [t0, t1] : segment_list(model, duration)) {
    auto emit_samples_until = [&](auto&& advance_to) {
      while (next_sample != options.sample_times.end() && *next_sample <= t1) {
        result.samples.push_back(
            DensityState::density(model.space(), advance_to(*next_sample)));
        ++next_sample;
      }
    };
    if (model.constant_on(t0, t1)) {
      const LiouvillePropagator prop(model.hamiltonian(t0), model.channels());
      emit_samples_until(
          [&](double ts) { return prop.apply(rho, ts - t0); });
      rho = prop.apply(rho, t1 - t0);
    } else {
      const int dim = model.dimension();
      auto rhs = [&](double t, const Vector& y, Vector& dy) {
        const Matrix l = time_dependent_liouvillian(model, t);
        dy = l * y;
      };
      auto advance = [&](double from, double to, Matrix r) {
        Vector v = Eigen::Map<const Vector>(r.data(), dim * dim);
        v = integrate_adaptive(rhs, std::move(v), from, to, options.tolerance);
        Matrix out = Eigen::Map<const Matrix>(v.data(), dim, dim);
        out = 0.5 * (out + out.adjoint()).eval();
        return out;
      };
      double cursor = t0;
      emit_samples_until([&](double ts) {
        rho = advance(cursor, ts, std::move(rho));
        cursor = ts;
        return rho;
      });
      rho = advance(cursor, t1, std::move(rho));
    }
  }
  result.final_state = DensityState::density(model.space(), std::move(rho));
  return result;
}

DensityState evolve_lindblad(const DensityState& state,
                             const SystemModel& model, double duration,
                             double tolerance) {
  LindbladOptions opt;
  opt.tolerance = tolerance;
  return evolve_lindblad(state, *compile(model), duration, opt).final_state;
}

DensityState evolve_lindblad(const DensityState& state,
                             const TwoDimerModel& model, double duration,
                             double tolerance) {
  LindbladOptions opt;
  opt.tolerance = tolerance;
  return evolve_lindblad(state, *compile(model), duration, opt).final_state;
}

ConditionalResult evolve_conditional(const DensityState& state,
                                     const EvolvableModel& model,
                                     double duration, double tolerance) {
  if (!state.is_pure()) {
    throw std::invalid_argument("conditional evolution needs a pure state");
  }
  if (state.dimension() != model.dimension()) {
    throw std::invalid_argument("state/model dimension mismatch");
  }
  Vector psi = state.amplitudes();
  const double norm0 = psi.squaredNorm();

  for (const auto& [t0, t1] : segment_list(model, duration)) {
    if (model.constant_on(t0, t1)) {
      const SpectralPropagator prop(model.conditional_generator(t0));
      psi = prop.apply(psi, t1 - t0);
    } else {
      auto rhs = [&](double t, const Vector& y, Vector& dy) {
        dy = model.conditional_generator(t) * y;
      };
      psi = integrate_adaptive(rhs, std::move(psi), t0, t1, tolerance);
    }
  }
  ConditionalResult r{DensityState::pure(model.space(), psi),
                      psi.squaredNorm() / norm0};
  return r;
}

ConditionalResult evolve_conditional(const DensityState& state,
                                     const SystemModel& model, double duration,
                                     double tolerance) {
  return evolve_conditional(state, *compile(model), duration, tolerance);
}

ConditionalResult evolve_conditional(const DensityState& state,
                                     const TwoDimerModel& model,
                                     double duration, double tolerance) {
  return evolve_conditional(state, *compile(model), duration, tolerance);
}

namespace {

TrajectoryRecord run_single_trajectory(
    const Vector& initial, const std::vector<std::pair<double, double>>& segs,
    const std::vector<SpectralPropagator>& props,
    const std::vector<JumpChannel>& channels, double eta, Rng rng) {
  TrajectoryRecord rec;
  Vector psi = initial / initial.norm();
  double target = rng.uniform_positive();

  for (size_t s = 0; s < segs.size(); ++s) {
    double local = 0.0;  // time consumed inside this segment
    const double width = segs[s].second - segs[s].first;
    while (true) {
      const double remaining = width - local;
      Vector end = props[s].apply(psi, remaining);
      if (end.squaredNorm() >= target) {
        psi = std::move(end);
        break;  // no jump before the segment boundary
      }
      // First passage of |psi|^2 through the target: bisect.
      double lo = 0.0, hi = remaining;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (props[s].apply(psi, mid).squaredNorm() >= target) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double tau = 0.5 * (lo + hi);
      psi = props[s].apply(psi, tau);
      local += tau;

      // Select the collective channel and collapse.
      std::vector<double> weights(channels.size());
      double total = 0.0;
      std::vector<Vector> lowered(channels.size());
      for (size_t m = 0; m < channels.size(); ++m) {
        lowered[m] = channels[m].op * psi;
        weights[m] = channels[m].rate * lowered[m].squaredNorm();
        total += weights[m];
      }
      if (total <= 0.0) {  // dark state grazed the target within roundoff
        psi = props[s].apply(psi, width - local);
        break;
      }
      const double pick = rng.uniform() * total;
      double acc = 0.0;
      size_t chosen = channels.size() - 1;
      for (size_t m = 0; m < channels.size(); ++m) {
        acc += weights[m];
        if (pick < acc) {
          chosen = m;
          break;
        }
      }
      const bool detected = rng.uniform() < eta;
      rec.emission_events.push_back(
          {segs[s].first + local, static_cast<int>(chosen), detected});
      psi = lowered[chosen] / lowered[chosen].norm();
      target = rng.uniform_positive();
    }
  }
  rec.final_state = psi / psi.norm();
  return rec;
}

}  // namespace

std::vector<TrajectoryRecord> monte_carlo_trajectories(
    const DensityState& state, const EvolvableModel& model, double duration,
    const MonteCarloOptions& options) {
  if (options.n_trajectories < 1) {
    throw std::invalid_argument("n_trajectories must be >= 1");
  }
  if (options.detector_efficiency < 0.0 || options.detector_efficiency > 1.0) {
    throw std::invalid_argument("detector efficiency must lie in [0, 1]");
  }
  if (!state.is_pure()) {
    throw std::invalid_argument("trajectories start from a pure state");
  }

  const auto segs = segment_list(model, duration);
  std::vector<SpectralPropagator> props;
  props.reserve(segs.size());
  for (const auto& [t0, t1] : segs) {
    if (!model.constant_on(t0, t1)) {
      throw std::invalid_argument(
          "monte_carlo_trajectories needs a piecewise-constant generator; "
          "rotate the frame onto the drive");
    }
    props.emplace_back(model.conditional_generator(t0));
  }

  const int n = options.n_trajectories;
  std::vector<TrajectoryRecord> records(n);
  int workers = options.parallelism > 0
                    ? options.parallelism
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n);

  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      records[i] = run_single_trajectory(
          state.amplitudes(), segs, props, model.channels(),
          options.detector_efficiency,
          Rng::substream(options.seed, static_cast<std::uint64_t>(i)));
    }
  };
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

std::vector<TrajectoryRecord> monte_carlo_trajectories(
    const DensityState& state, const SystemModel& model, double duration,
    const MonteCarloOptions& options) {
  return monte_carlo_trajectories(state, *compile(model), duration, options);
}

std::vector<TrajectoryRecord> monte_carlo_trajectories(
    const DensityState& state, const TwoDimerModel& model, double duration,
    const MonteCarloOptions& options) {
  return monte_carlo_trajectories(state, *compile(model), duration, options);
}

std::vector<double> channel_emissions(const DensityState& state,
                                      const EvolvableModel& model,
                                      double duration,
                                      int samples_per_segment) {
  if (!state.is_pure()) {
    throw std::invalid_argument("channel attribution needs a pure state");
  }
  const auto& channels = model.channels();
  std::vector<double> acc(channels.size(), 0.0);
  Vector psi = state.amplitudes();
  psi /= psi.norm();

  const int n = samples_per_segment + samples_per_segment % 2;  // even
  for (const auto& [t0, t1] : segment_list(model, duration)) {
    if (!model.constant_on(t0, t1)) {
      throw std::invalid_argument(
          "channel attribution needs a piecewise-constant generator");
    }
    const SpectralPropagator prop(model.conditional_generator(t0));
    const double h = (t1 - t0) / n;
    for (size_t m = 0; m < channels.size(); ++m) {
      double integral = 0.0;
      for (int k = 0; k <= n; ++k) {
        const Vector p = prop.apply(psi, k * h);
        const double f = channels[m].rate * (channels[m].op * p).squaredNorm();
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        integral += w * f;
      }
      acc[m] += integral * h / 3.0;
    }
    psi = prop.apply(psi, t1 - t0);
  }
  return acc;
}

std::string trajectories_to_csv(const std::vector<TrajectoryRecord>& records) {
  std::ostringstream os;
  os << "trajectory_id,time,channel,detected\n";
  os.precision(12);
  for (size_t i = 0; i < records.size(); ++i) {
    for (const auto& e : records[i].emission_events) {
      os << i << ',' << e.time << ',' << e.channel << ',' << (e.detected ? 1 : 0)
         << '\n';
    }
  }
  return os.str();
}

}  // namespace sdq
