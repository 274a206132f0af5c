#pragma once

#include <vector>

#include "qtraj/errors.hpp"
#include "qtraj/models.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/types.hpp"

namespace qtraj {

enum class Stepper { qsd, qj, qj_diffusive };

const char* stepper_name(Stepper s);

/// One discontinuous quantum-jump event.
struct JumpEvent {
  double time = 0.0;
  int channel = 0;
  /// <L^dag L> on the state the firing decision was made from.
  double rate = 0.0;
  /// ||psi_after - psi_before|| across the jump (in [0, 2]).
  double magnitude = 0.0;

  bool operator==(const JumpEvent&) const = default;
};

/// Per-step diagnostics a caller may collect.
struct StepDiag {
  double pre_norm = 1.0;  // norm before the post-step renormalization
  double tail_mass = 0.0;
  bool multi_fire = false;     // more than one jump channel fired
  bool drift_warning = false;  // deterministic drift moved the state > 0.1
};

/// Reusable stepper state for one trajectory: precomputed L^dag L products
/// and workspace vectors. The model must outlive the context.
class StepContext {
 public:
  explicit StepContext(const ModelSpec& model);

  /// Euler-Maruyama step of the quantum-state-diffusion equation
  ///   |dpsi> = -i H |psi> dt
  ///            - 1/2 sum_j (L_j^dag L_j - 2 <L_j^dag> L_j + |<L_j>|^2) |psi> dt
  ///            + sum_j (L_j - <L_j>) |psi> d_xi_j
  /// with one complex Wiener increment per channel, then renormalization.
  ComplexVector qsd(const ComplexVector& psi, double t, double dt,
                    NoiseStream& stream, StepDiag* diag = nullptr);

  /// Quantum-jump step: each channel fires with probability
  /// <L_j^dag L_j> dt; on a no-fire step the non-Hermitian drift
  ///   -i H dt - 1/2 sum_j (L_j^dag L_j - <L_j^dag L_j>) dt
  /// is applied and the state renormalized. Fired jumps replace the state
  /// by L_j|psi>/||L_j|psi>|| at the end of the step (lowest channel wins
  /// when several fire in one step; the extras are O(dt^2) and counted in
  /// the diagnostics).
  ComplexVector qj(const ComplexVector& psi, double t, double dt,
                   NoiseStream& stream, std::vector<JumpEvent>& jumps,
                   StepDiag* diag = nullptr);

  /// Diffusive limit of the quantum-jump equation: the QSD drift with the
  /// noise replaced by one real Wiener increment per channel times the
  /// unit-modulus phase <L_j^dag>/|<L_j>|. Throws PhaseSingularityError
  /// when |<L_j>| < 1e-12, where that phase is undefined.
  ComplexVector qj_diffusive(const ComplexVector& psi, double t, double dt,
                             NoiseStream& stream, StepDiag* diag = nullptr);

  ComplexVector step(Stepper which, const ComplexVector& psi, double t,
                     double dt, NoiseStream& stream,
                     std::vector<JumpEvent>& jumps, StepDiag* diag = nullptr);

  const ModelSpec& model() const { return *model_; }

 private:
  void require_state(const ComplexVector& psi) const;
  ComplexVector finish(ComplexVector out, double t, StepDiag* diag,
                       double drift_norm);

  const ModelSpec* model_;
  std::vector<ComplexMatrix> lind_dag_lind_;
  // workspaces
  ComplexVector h_psi_;
  std::vector<ComplexVector> l_psi_;
  ComplexVector ldl_psi_;
  ComplexVector drift_;
};

/// Normalized L_channel |psi>, the post-jump state. Throws
/// DegenerateJumpError when L_channel |psi> is numerically zero.
ComplexVector apply_jump(const ModelSpec& model, const ComplexVector& psi,
                         int channel);

/// Single-shot conveniences matching the per-operation contracts; for hot
/// loops build one StepContext per trajectory instead.
ComplexVector qsd_step(const ModelSpec& model, const ComplexVector& psi,
                       double t, double dt, NoiseStream& stream,
                       StepDiag* diag = nullptr);
ComplexVector qj_step(const ModelSpec& model, const ComplexVector& psi,
                      double t, double dt, NoiseStream& stream,
                      std::vector<JumpEvent>& jumps, StepDiag* diag = nullptr);
ComplexVector qj_diffusive_step(const ModelSpec& model,
                                const ComplexVector& psi, double t, double dt,
                                NoiseStream& stream, StepDiag* diag = nullptr);

}  // namespace qtraj
