#include "qtraj/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "qtraj/fock.hpp"

namespace qtraj {

namespace {

constexpr int kChunk = 16;  // trajectories per reduction chunk, fixed so
                            // results do not depend on the worker count

std::vector<long> checkpoint_steps(const EnsembleOptions& options) {
  std::vector<long> steps;
  const auto total = static_cast<long>(
      std::llround(options.t_final / options.dt));
  steps.reserve(options.checkpoints.size());
  for (double t : options.checkpoints) {
    const auto s = static_cast<long>(std::llround(t / options.dt));
    if (s < 0 || s > total) {
      throw ArgumentError("checkpoint t = " + std::to_string(t) +
                          " outside the run window");
    }
    steps.push_back(s);
  }
  return steps;
}

// Accumulated projectors for one chunk of trajectories.
struct ChunkSums {
  std::vector<ComplexMatrix> rho;  // one per checkpoint
  void init(std::size_t n, int dim) {
    rho.assign(n, ComplexMatrix::Zero(dim, dim));
  }
};

}  // namespace

int effective_worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QTRAJ_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

EnsembleSummary run_ensemble(const ModelSpec& model, const ComplexVector& psi0,
                             const EnsembleOptions& options) {
  if (options.n_traj < 1) throw ArgumentError("n_traj must be >= 1");
  if (options.frame_enabled && options.frame_dim < 2) {
    throw ArgumentError("frame_dim must be >= 2 when the frame is enabled");
  }
  if (options.frame_enabled && !options.checkpoints.empty()) {
    throw ArgumentError(
        "checkpoint accumulation is not supported with the moving frame; "
        "run at the full dimension for oracle comparisons");
  }
  const std::vector<long> cp_steps = checkpoint_steps(options);

  EnsembleSummary summary;
  summary.n_traj = options.n_traj;
  summary.checkpoint_times.reserve(cp_steps.size());
  for (long s : cp_steps) {
    summary.checkpoint_times.push_back(static_cast<double>(s) * options.dt);
  }
  summary.records.resize(options.n_traj);

  const TrajectoryOptions traj_options{options.stepper, options.dt,
                                       options.t_final, options.sample_every};

  const int n_chunks = (options.n_traj + kChunk - 1) / kChunk;
  std::vector<ChunkSums> chunk_sums(n_chunks);
  std::vector<std::exception_ptr> failures(n_chunks);
  std::atomic<int> next_chunk{0};

  auto work = [&]() {
    for (;;) {
      const int chunk = next_chunk.fetch_add(1);
      if (chunk >= n_chunks) return;
      if (!cp_steps.empty()) {
        chunk_sums[chunk].init(cp_steps.size(), model.dim);
      }
      try {
        const int begin = chunk * kChunk;
        const int end = std::min(options.n_traj, begin + kChunk);
        for (int i = begin; i < end; ++i) {
          if (options.frame_enabled) {
            summary.records[i] =
                moving_frame_run(model, psi0, traj_options, options.frame_dim,
                                 options.recenter_threshold, options.seed,
                                 static_cast<std::uint64_t>(i))
                    .record;
          } else {
            auto on_step = [&](long step, double, const ComplexVector& psi) {
              for (std::size_t c = 0; c < cp_steps.size(); ++c) {
                if (cp_steps[c] == step) {
                  chunk_sums[chunk].rho[c].noalias() +=
                      psi * psi.adjoint();
                }
              }
            };
            summary.records[i] = run_trajectory(
                model, psi0, traj_options, options.seed,
                static_cast<std::uint64_t>(i),
                cp_steps.empty() ? StepCallback{} : StepCallback{on_step});
          }
        }
      } catch (...) {
        failures[chunk] = std::current_exception();
      }
    }
  };

  const int n_workers =
      std::min(effective_worker_count(options.workers), n_chunks);
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  // Deterministic reduction in chunk (= stream id) order.
  if (!cp_steps.empty()) {
    summary.averaged_rho.assign(cp_steps.size(),
                                ComplexMatrix::Zero(model.dim, model.dim));
    for (int chunk = 0; chunk < n_chunks; ++chunk) {
      for (std::size_t c = 0; c < cp_steps.size(); ++c) {
        summary.averaged_rho[c] += chunk_sums[chunk].rho[c];
      }
    }
    for (auto& rho : summary.averaged_rho) {
      rho /= static_cast<double>(options.n_traj);
    }
  }

  if (options.compare_master && !cp_steps.empty()) {
    const ComplexVector psi0n = normalize(psi0);
    const ComplexMatrix rho0 = psi0n * psi0n.adjoint();
    const std::vector<ComplexMatrix> oracle = evolve_master_checkpoints(
        model, rho0, options.dt, summary.checkpoint_times);
    summary.trace_distance_to_master.reserve(oracle.size());
    for (std::size_t c = 0; c < oracle.size(); ++c) {
      summary.trace_distance_to_master.push_back(
          trace_distance(summary.averaged_rho[c], oracle[c]));
    }
  }

  summary.jump_stats = jump_statistics(summary.records, model.channels(), 0.0,
                                       options.t_final > 0 ? options.t_final
                                                           : options.dt);
  return summary;
}

std::vector<PhasePoint> poincare_points(const TrajectoryRecord& record,
                                        double period, double t_skip) {
  if (period <= 0) throw ArgumentError("period must be > 0");
  if (record.times.size() < 2) {
    throw ArgumentError("record too short for a Poincare section");
  }
  const double interval = record.times[1] - record.times[0];
  if (period < 2.0 * interval) {
    throw ArgumentError("poincare_points: record undersampled (interval " +
                        std::to_string(interval) + ", period " +
                        std::to_string(period) + ")");
  }

  std::vector<PhasePoint> points;
  const double t_end = record.times.back();
  for (double t = t_skip; t <= t_end + 1e-9 * period; t += period) {
    if (t < record.times.front()) continue;
    // Uniform sampling grid: locate the bracketing samples directly.
    auto idx = static_cast<std::size_t>((t - record.times.front()) / interval);
    if (idx + 1 >= record.times.size()) idx = record.times.size() - 2;
    const double t0 = record.times[idx];
    const double t1 = record.times[idx + 1];
    const double w = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
    const Complex a =
        (1.0 - w) * record.mean_a[idx] + w * record.mean_a[idx + 1];
    const double s = std::sqrt(2.0);
    points.push_back({s * a.real(), s * a.imag()});
  }
  return points;
}

std::vector<ChannelJumpStats> jump_statistics(
    const std::vector<TrajectoryRecord>& records, int n_channels,
    double window_start, double window_end) {
  if (records.empty()) throw ArgumentError("jump_statistics: no records");
  if (!(window_end > window_start)) {
    throw ArgumentError("jump_statistics: empty window");
  }
  if (n_channels < 0) throw ArgumentError("n_channels must be >= 0");

  std::vector<ChannelJumpStats> stats(n_channels);
  for (const auto& record : records) {
    for (const auto& jump : record.jumps) {
      if (jump.time < window_start || jump.time > window_end) continue;
      if (jump.channel < 0 || jump.channel >= n_channels) {
        throw ArgumentError("jump channel " + std::to_string(jump.channel) +
                            " outside the declared channel count");
      }
      auto& s = stats[jump.channel];
      ++s.count;
      s.mean_magnitude += jump.magnitude;
    }
  }
  const double denom =
      static_cast<double>(records.size()) * (window_end - window_start);
  for (auto& s : stats) {
    if (s.count > 0) s.mean_magnitude /= static_cast<double>(s.count);
    s.rate = static_cast<double>(s.count) / denom;
  }
  return stats;
}

}  // namespace qtraj
