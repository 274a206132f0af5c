#include "qtraj/frame.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "qtraj/fock.hpp"

namespace qtraj {

double delta_alpha_sq(const ComplexVector& psi) {
  return mean_number(psi) - std::norm(mean_annihilation(psi));
}

DisplacedState to_displaced_frame(const ComplexVector& psi) {
  const Complex alpha = mean_annihilation(psi);
  const int dim = static_cast<int>(psi.size());
  ComplexVector phi =
      normalize(displacement_operator(-alpha, dim) * psi);
  const double tail = tail_mass(phi);
  if (tail > 1e-6) {
    throw FrameTruncationError(
        "to_displaced_frame: tail mass " + std::to_string(tail) +
        " after displacement; dimension too small for this state");
  }
  return {alpha, std::move(phi)};
}

ComplexVector from_displaced_frame(const DisplacedState& ds) {
  const int dim = static_cast<int>(ds.phi.size());
  return normalize(displacement_operator(ds.alpha, dim) * ds.phi);
}

ComplexVector project_to_dim(const ComplexVector& psi, int dim,
                             double tail_tolerance) {
  if (dim < 2) throw ArgumentError("projection dim must be >= 2");
  if (dim >= psi.size()) {
    ComplexVector out = ComplexVector::Zero(dim);
    out.head(psi.size()) = psi;
    return out;
  }
  const double discarded = psi.tail(psi.size() - dim).squaredNorm();
  if (discarded > tail_tolerance) {
    throw FrameTruncationError("project_to_dim: discarding mass " +
                               std::to_string(discarded) + " at dim " +
                               std::to_string(dim));
  }
  return normalize(psi.head(dim).eval());
}

namespace {

void sample_lab_frame(TrajectoryRecord& record, double t, Complex alpha,
                      const ComplexVector& phi, double norm_drift) {
  // <a>_lab = alpha + <a>_phi; the width is frame-invariant.
  const Complex a_phi = mean_annihilation(phi);
  const double n_phi = mean_number(phi);
  const Complex a_lab = alpha + a_phi;
  record.times.push_back(t);
  record.mean_a.push_back(a_lab);
  record.mean_n.push_back(n_phi + 2.0 * (std::conj(alpha) * a_phi).real() +
                          std::norm(alpha));
  record.width.push_back(n_phi - std::norm(a_phi));
  record.norm_drift.push_back(norm_drift);
}

}  // namespace

MovingFrameResult moving_frame_run(const ModelSpec& model,
                                   const ComplexVector& psi0,
                                   const TrajectoryOptions& options,
                                   int frame_dim, double recenter_threshold,
                                   std::uint64_t seed,
                                   std::uint64_t stream_id) {
  if (!model.displaced) {
    throw ArgumentError(
        "moving_frame_run requires a model with a displaced-rebuild hook");
  }
  if (options.dt <= 0) throw ArgumentError("dt must be > 0");
  if (recenter_threshold < 0) {
    throw ArgumentError("recenter_threshold must be >= 0");
  }

  MovingFrameResult result;
  TrajectoryRecord& record = result.record;
  record.seed = seed;
  record.stream_id = stream_id;
  record.model_fingerprint = model.fingerprint();

  // Initial frame: center on <a>, displace at the state's own dimension,
  // then project onto the small frame.
  ComplexVector psi = normalize(psi0);
  Complex alpha = mean_annihilation(psi);
  ComplexVector phi = project_to_dim(
      normalize(displacement_operator(-alpha, psi.size()) * psi), frame_dim);

  ModelSpec frame_model = model.displaced(frame_dim, alpha);
  auto ctx = std::make_unique<StepContext>(frame_model);

  NoiseStream stream(seed, stream_id);
  const auto steps =
      static_cast<long>(std::llround(options.t_final / options.dt));
  sample_lab_frame(record, 0.0, alpha, phi, 0.0);

  StepDiag diag;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * options.dt;
    try {
      phi = ctx->step(options.stepper, phi, t, options.dt, stream,
                      record.jumps, &diag);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " [frame stream " +
                           std::to_string(stream_id) + ", t = " +
                           std::to_string(t) + "]");
    }
    record.max_tail_mass = std::max(record.max_tail_mass, diag.tail_mass);
    if (diag.multi_fire) ++record.multi_fire_count;
    if (diag.drift_warning) ++record.drift_warning_count;
    if (diag.tail_mass > 1e-4) {
      throw FrameTruncationError(
          "moving_frame_run: state spread beyond the frame (tail mass " +
          std::to_string(diag.tail_mass) + " at t = " +
          std::to_string(t + options.dt) + ")");
    }

    const Complex a_phi = mean_annihilation(phi);
    if (std::abs(a_phi) > recenter_threshold) {
      alpha += a_phi;
      phi = normalize(displacement_operator(-a_phi, frame_dim) * phi);
      frame_model = model.displaced(frame_dim, alpha);
      ctx = std::make_unique<StepContext>(frame_model);
      ++result.recenter_count;
    }

    if (k + 1 == steps || (k + 1) % options.sample_every == 0) {
      sample_lab_frame(record, static_cast<double>(k + 1) * options.dt, alpha,
                       phi, std::abs(diag.pre_norm - 1.0));
    }
  }
  return result;
}

}  // namespace qtraj
