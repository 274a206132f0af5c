#pragma once

#include "qtraj/trajectory.hpp"

namespace qtraj {

/// Localization width Delta alpha^2 = <a^dag a> - |<a>|^2; zero exactly
/// for coherent states.
double delta_alpha_sq(const ComplexVector& psi);

/// A state |phi> = D(-alpha)|psi> in the frame centered on its own mean,
/// so <a>_phi = 0 (up to truncation).
struct DisplacedState {
  Complex alpha;
  ComplexVector phi;
};

/// Centers the frame on <a>_psi. Throws FrameTruncationError when the
/// displaced state's tail mass exceeds 1e-6.
DisplacedState to_displaced_frame(const ComplexVector& psi);

/// Inverse frame change D(alpha)|phi>, renormalized.
ComplexVector from_displaced_frame(const DisplacedState& ds);

/// Copies the leading `dim` amplitudes and renormalizes. Throws
/// FrameTruncationError when the discarded mass exceeds `tail_tolerance`.
ComplexVector project_to_dim(const ComplexVector& psi, int dim,
                             double tail_tolerance = 1e-6);

/// Propagates the trajectory in a small displaced frame that is re-centered
/// (by an exact displacement on the frame) whenever |<a>_phi| exceeds
/// `recenter_threshold`; between re-centerings the frame is held fixed and
/// the steppers run on the displaced operators from model.displaced().
/// Lab-frame observables are recorded; they match a plain run at sufficient
/// ambient dimension with the same noise stream.
struct MovingFrameResult {
  TrajectoryRecord record;
  long recenter_count = 0;
};

MovingFrameResult moving_frame_run(const ModelSpec& model,
                                   const ComplexVector& psi0,
                                   const TrajectoryOptions& options,
                                   int frame_dim, double recenter_threshold,
                                   std::uint64_t seed, std::uint64_t stream_id);

}  // namespace qtraj
