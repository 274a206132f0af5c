#include "qtraj/trajectory.hpp"

#include <cmath>
#include <string>

#include "qtraj/fock.hpp"

namespace qtraj {

namespace {

void sample_into(TrajectoryRecord& record, double t, const ComplexVector& psi,
                 double norm_drift) {
  const Complex a = mean_annihilation(psi);
  const double n = mean_number(psi);
  record.times.push_back(t);
  record.mean_a.push_back(a);
  record.mean_n.push_back(n);
  record.width.push_back(n - std::norm(a));
  record.norm_drift.push_back(norm_drift);
}

}  // namespace

TrajectoryRecord run_trajectory(const ModelSpec& model,
                                const ComplexVector& psi0,
                                const TrajectoryOptions& options,
                                std::uint64_t seed, std::uint64_t stream_id,
                                const StepCallback& on_step) {
  if (options.dt <= 0) throw ArgumentError("dt must be > 0");
  if (options.sample_every < 1) {
    throw ArgumentError("sample_every must be >= 1");
  }

  TrajectoryRecord record;
  record.seed = seed;
  record.stream_id = stream_id;
  record.model_fingerprint = model.fingerprint();

  NoiseStream stream(seed, stream_id);
  StepContext ctx(model);
  const auto steps = static_cast<long>(std::llround(options.t_final / options.dt));
  record.times.reserve(steps / options.sample_every + 2);

  ComplexVector psi = normalize(psi0);
  sample_into(record, 0.0, psi, 0.0);
  if (on_step) on_step(0, 0.0, psi);

  StepDiag diag;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * options.dt;
    try {
      psi = ctx.step(options.stepper, psi, t, options.dt, stream,
                     record.jumps, &diag);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " [stream " +
                           std::to_string(stream_id) + ", t = " +
                           std::to_string(t) + "]");
    }
    record.max_tail_mass = std::max(record.max_tail_mass, diag.tail_mass);
    if (diag.multi_fire) ++record.multi_fire_count;
    if (diag.drift_warning) ++record.drift_warning_count;

    const double t_next = static_cast<double>(k + 1) * options.dt;
    if (k + 1 == steps || (k + 1) % options.sample_every == 0) {
      sample_into(record, t_next, psi, std::abs(diag.pre_norm - 1.0));
    }
    if (on_step) on_step(k + 1, t_next, psi);
  }
  return record;
}

}  // namespace qtraj
