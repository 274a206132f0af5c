#pragma once

#include <vector>

#include "qtraj/frame.hpp"
#include "qtraj/master.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj {

struct ChannelJumpStats {
  long count = 0;
  double rate = 0.0;            // jumps per unit time per trajectory
  double mean_magnitude = 0.0;  // mean ||psi_after - psi_before||
};

struct EnsembleOptions {
  Stepper stepper = Stepper::qsd;
  double dt = 1e-3;
  double t_final = 1.0;
  int sample_every = 1;
  int n_traj = 1;
  std::uint64_t seed = 0;
  /// Times at which |psi><psi| is averaged across trajectories.
  std::vector<double> checkpoints;
  /// Integrate the master equation alongside and report the trace distance
  /// at every checkpoint.
  bool compare_master = true;
  /// Moving-basis propagation (requires model.displaced).
  bool frame_enabled = false;
  int frame_dim = 0;
  double recenter_threshold = 0.1;
  /// 0 = one worker per core (or the QTRAJ_WORKERS environment variable).
  int workers = 0;
};

struct EnsembleSummary {
  int n_traj = 0;
  std::vector<double> checkpoint_times;
  std::vector<ComplexMatrix> averaged_rho;
  std::vector<double> trace_distance_to_master;
  std::vector<ChannelJumpStats> jump_stats;  // over the whole run
  std::vector<TrajectoryRecord> records;     // one per trajectory, in order
};

/// Runs n_traj independent trajectories on streams (seed, 0..n_traj-1).
/// Trajectories are processed by a worker pool in fixed-size chunks and all
/// reductions happen in stream-id order, so results are bit-identical for
/// any worker count. A failing trajectory aborts the ensemble with its
/// stream id and failure time in the message.
EnsembleSummary run_ensemble(const ModelSpec& model, const ComplexVector& psi0,
                             const EnsembleOptions& options);

/// Number of workers run_ensemble would use.
int effective_worker_count(int requested);

/// Phase-space points (q, p) = (sqrt(2) Re<a>, sqrt(2) Im<a>) strobed at
/// t = t_skip + k * period, linearly interpolated between samples. Throws
/// when the record is sampled more coarsely than half the period.
std::vector<PhasePoint> poincare_points(const TrajectoryRecord& record,
                                        double period, double t_skip);

/// Per-channel jump rate and mean magnitude over the time window
/// [window_start, window_end], aggregated across records.
std::vector<ChannelJumpStats> jump_statistics(
    const std::vector<TrajectoryRecord>& records, int n_channels,
    double window_start, double window_end);

}  // namespace qtraj
