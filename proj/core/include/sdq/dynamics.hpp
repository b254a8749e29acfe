#pragma once

#include <cstdint>
#include <vector>

#include "sdq/model.hpp"
#include "sdq/propagator.hpp"
#include "sdq/state.hpp"

namespace sdq {

// Hermitian Hamiltonian of the model at time t (site terms, pairwise
// exchange, active drives).
Matrix build_hamiltonian(const SystemModel& model, double t);

// Cross-damping matrix gamma_jk and its collective eigenchannels.
Dissipator build_dissipator(const SystemModel& model);

// Non-Hermitian generator of the no-jump evolution, H - (i/2) sum_m
// rate_m op_m^dag op_m.
Matrix effective_hamiltonian(const SystemModel& model, double t);

struct Emission {
  double time;
  int channel;
  bool detected;
};

struct TrajectoryRecord {
  std::vector<Emission> emission_events;  // strictly increasing times
  Vector final_state;                     // normalized amplitudes

  std::vector<Emission> detected_events() const;
};

struct LindbladOptions {
  double tolerance = 1e-10;
  std::vector<double> sample_times;  // sorted, within [0, duration]
};

struct LindbladResult {
  DensityState final_state;
  std::vector<DensityState> samples;
};

LindbladResult evolve_lindblad(const DensityState& state,
                               const EvolvableModel& model, double duration,
                               const LindbladOptions& options = {});
DensityState evolve_lindblad(const DensityState& state,
                             const SystemModel& model, double duration,
                             double tolerance = 1e-10);
DensityState evolve_lindblad(const DensityState& state,
                             const TwoDimerModel& model, double duration,
                             double tolerance = 1e-10);

struct ConditionalResult {
  DensityState state;  // pure, unnormalized
  double survival;     // probability of zero emissions
};

ConditionalResult evolve_conditional(const DensityState& state,
                                     const EvolvableModel& model,
                                     double duration, double tolerance = 1e-10);
ConditionalResult evolve_conditional(const DensityState& state,
                                     const SystemModel& model, double duration,
                                     double tolerance = 1e-10);
ConditionalResult evolve_conditional(const DensityState& state,
                                     const TwoDimerModel& model,
                                     double duration, double tolerance = 1e-10);

struct MonteCarloOptions {
  int n_trajectories = 1;
  std::uint64_t seed = 0;
  double detector_efficiency = 1.0;
  int parallelism = 0;  // 0: number of hardware threads
};

// Jump unravelling over collective channels with first-passage jump times.
// Each emission is retained as detected with probability
// detector_efficiency. Sub-seeds derive from (seed, trajectory index), so
// parallel and serial runs agree bit for bit. Requires a piecewise-constant
// generator (drives resonant in frame).
std::vector<TrajectoryRecord> monte_carlo_trajectories(
    const DensityState& state, const EvolvableModel& model, double duration,
    const MonteCarloOptions& options);
std::vector<TrajectoryRecord> monte_carlo_trajectories(
    const DensityState& state, const SystemModel& model, double duration,
    const MonteCarloOptions& options);
std::vector<TrajectoryRecord> monte_carlo_trajectories(
    const DensityState& state, const TwoDimerModel& model, double duration,
    const MonteCarloOptions& options);

// Emission probability resolved by collective channel, integrated along the
// no-jump path: integral of rate_m |op_m psi(t)|^2 dt. The sum over channels
// equals 1 - survival.
std::vector<double> channel_emissions(const DensityState& state,
                                      const EvolvableModel& model,
                                      double duration,
                                      int samples_per_segment = 512);

// Trajectory event log as CSV (trajectory_id, time, channel, detected).
std::string trajectories_to_csv(const std::vector<TrajectoryRecord>& records);

}  // namespace sdq
