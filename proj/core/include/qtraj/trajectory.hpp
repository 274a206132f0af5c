#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qtraj/models.hpp"
#include "qtraj/unravelings.hpp"

namespace qtraj {

/// Sampled time series of state summaries plus the jump-event log for one
/// stochastic trajectory. Fully determined by (model, psi0, options, seed,
/// stream_id); the equality operator is bitwise and is what the replay
/// tests compare.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Complex> mean_a;
  std::vector<double> mean_n;
  std::vector<double> width;       // delta alpha^2 per sample
  std::vector<double> norm_drift;  // |pre-renormalization norm - 1|
  std::vector<JumpEvent> jumps;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t model_fingerprint = 0;
  double max_tail_mass = 0.0;
  long multi_fire_count = 0;
  long drift_warning_count = 0;

  bool operator==(const TrajectoryRecord&) const = default;
};

struct TrajectoryOptions {
  Stepper stepper = Stepper::qsd;
  double dt = 1e-3;
  double t_final = 1.0;
  int sample_every = 1;
};

/// Called after every step (and once for the initial state) with the step
/// index and the current normalized state; used by the ensemble runner to
/// accumulate projectors at checkpoints.
using StepCallback =
    std::function<void(long step, double t, const ComplexVector& psi)>;

/// Iterates the chosen stepper, recording samples at step 0, every
/// `sample_every` steps, and the final step. Numerical failures are
/// rethrown with the failure time and stream id attached.
TrajectoryRecord run_trajectory(const ModelSpec& model,
                                const ComplexVector& psi0,
                                const TrajectoryOptions& options,
                                std::uint64_t seed, std::uint64_t stream_id,
                                const StepCallback& on_step = {});

}  // namespace qtraj
