#pragma once

#include <vector>

#include "qtraj/errors.hpp"
#include "qtraj/models.hpp"
#include "qtraj/types.hpp"

namespace qtraj {

/// Right-hand side of the Lindblad master equation
///   rho_dot = -i [H(t), rho] + sum_m ( L_m rho L_m^dag
///             - 1/2 { L_m^dag L_m, rho } ).
/// The result is traceless and Hermitian to integrator precision.
ComplexMatrix lindblad_rhs(const ModelSpec& model, const ComplexMatrix& rho,
                           double t);

struct MasterRun {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  /// Pre-renormalization |1 - tr(rho)| of the step each sample landed on.
  std::vector<double> sample_trace_drift;
  /// Accumulated |1 - tr(rho)| repaired across all steps.
  double total_trace_repair = 0.0;
  /// Accumulated max-elementwise anti-Hermitian part repaired.
  double total_hermiticity_repair = 0.0;
  double max_step_trace_drift = 0.0;

  const ComplexMatrix& final_state() const { return states.back(); }
};

/// Classical fixed-step RK4 integration of lindblad_rhs. Hermiticity is
/// enforced by symmetrization and the trace renormalized every step, with
/// the repair magnitudes logged. Sampled every `sample_every` steps
/// (t = 0 and the final step always included). Throws StepSizeError when
/// the per-step trace drift exceeds 1e-6.
MasterRun evolve_master(const ModelSpec& model, const ComplexMatrix& rho0,
                        double dt, double t_final, int sample_every = 1,
                        Diagnostics* diag = nullptr);

/// Same integrator, returning rho only at the requested times (rounded to
/// the step grid); used for ensemble-vs-oracle comparisons.
std::vector<ComplexMatrix> evolve_master_checkpoints(
    const ModelSpec& model, const ComplexMatrix& rho0, double dt,
    const std::vector<double>& times, Diagnostics* diag = nullptr);

/// Trace distance (1/2) sum |eigenvalues of rho1 - rho2|.
double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2);

/// Smallest eigenvalue of a Hermitian matrix (positivity checks).
double min_eigenvalue(const ComplexMatrix& hermitian);

/// Max elementwise |rho - rho^dag| (Hermiticity checks).
double hermiticity_deviation(const ComplexMatrix& rho);

}  // namespace qtraj
