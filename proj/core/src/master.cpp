#include "qtraj/master.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace qtraj {

namespace {

void require_square_match(const ModelSpec& model, const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() != model.dim) {
    throw ShapeError("density matrix is " + std::to_string(rho.rows()) + "x" +
                     std::to_string(rho.cols()) + " but model dim is " +
                     std::to_string(model.dim));
  }
}

// Precomputed pieces that do not change over a run.
struct RhsWorkspace {
  std::vector<ComplexMatrix> lind_dag_lind;  // L^dag L per channel
  explicit RhsWorkspace(const ModelSpec& model) {
    lind_dag_lind.reserve(model.lindblads.size());
    for (const auto& l : model.lindblads) {
      lind_dag_lind.push_back(l.adjoint() * l);
    }
  }
};

ComplexMatrix rhs_with_workspace(const ModelSpec& model,
                                 const RhsWorkspace& ws,
                                 const ComplexMatrix& rho, double t) {
  const ComplexMatrix h = model.hamiltonian.at(t);
  const ComplexMatrix h_rho = h * rho;
  // [H, rho] = H rho - (H rho)^dag for Hermitian H, rho.
  ComplexMatrix out = -imag_unit * (h_rho - h_rho.adjoint().eval());
  for (std::size_t m = 0; m < model.lindblads.size(); ++m) {
    const ComplexMatrix& l = model.lindblads[m];
    const ComplexMatrix l_rho = l * rho;
    out.noalias() += l_rho * l.adjoint();
    const ComplexMatrix ldl_rho = ws.lind_dag_lind[m] * rho;
    out -= 0.5 * (ldl_rho + ldl_rho.adjoint());
  }
  return out;
}

// RK4 with per-step Hermiticity/trace repair; `sink` sees the state after
// every step. Repair magnitudes are reported through `run` fields.
void integrate_master(
    const ModelSpec& model, ComplexMatrix& rho, double dt, long steps,
    MasterRun& run, Diagnostics* diag,
    const std::function<void(long, const ComplexMatrix&, double)>& sink) {
  const double h_norm =
      model.hamiltonian.at(0.0).cwiseAbs().rowwise().sum().maxCoeff();
  warn_if(diag, dt * h_norm > 0.5,
          "evolve_master: dt * |H| = " + std::to_string(dt * h_norm) +
              " is large; expect step-size artifacts");

  RhsWorkspace ws(model);
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const ComplexMatrix k1 = rhs_with_workspace(model, ws, rho, t);
    const ComplexMatrix k2 = rhs_with_workspace(
        model, ws, (rho + 0.5 * dt * k1).eval(), t + 0.5 * dt);
    const ComplexMatrix k3 = rhs_with_workspace(
        model, ws, (rho + 0.5 * dt * k2).eval(), t + 0.5 * dt);
    const ComplexMatrix k4 =
        rhs_with_workspace(model, ws, (rho + dt * k3).eval(), t + dt);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    ComplexMatrix herm = 0.5 * (rho + rho.adjoint().eval());
    run.total_hermiticity_repair += (rho - herm).cwiseAbs().maxCoeff();
    rho = std::move(herm);

    const double tr = rho.trace().real();
    const double drift = std::abs(1.0 - tr);
    run.max_step_trace_drift = std::max(run.max_step_trace_drift, drift);
    if (!(drift <= 1e-6)) {  // negated so NaN also lands here
      throw StepSizeError("evolve_master: trace drift " +
                          std::to_string(drift) + " in one step at t = " +
                          std::to_string(t + dt) + "; reduce dt");
    }
    run.total_trace_repair += drift;
    rho /= tr;

    sink(k + 1, rho, drift);
  }
}

}  // namespace

ComplexMatrix lindblad_rhs(const ModelSpec& model, const ComplexMatrix& rho,
                           double t) {
  require_square_match(model, rho);
  RhsWorkspace ws(model);
  return rhs_with_workspace(model, ws, rho, t);
}

MasterRun evolve_master(const ModelSpec& model, const ComplexMatrix& rho0,
                        double dt, double t_final, int sample_every,
                        Diagnostics* diag) {
  require_square_match(model, rho0);
  if (dt <= 0) throw ArgumentError("dt must be > 0");
  if (sample_every < 1) throw ArgumentError("sample_every must be >= 1");

  const auto steps = static_cast<long>(std::llround(t_final / dt));
  MasterRun run;
  run.times.reserve(steps / sample_every + 2);
  run.states.reserve(steps / sample_every + 2);

  ComplexMatrix rho = rho0;
  run.times.push_back(0.0);
  run.states.push_back(rho);
  run.sample_trace_drift.push_back(0.0);
  integrate_master(model, rho, dt, steps, run, diag,
                   [&](long k, const ComplexMatrix& state, double drift) {
                     if (k == steps || k % sample_every == 0) {
                       run.times.push_back(static_cast<double>(k) * dt);
                       run.states.push_back(state);
                       run.sample_trace_drift.push_back(drift);
                     }
                   });
  return run;
}

std::vector<ComplexMatrix> evolve_master_checkpoints(
    const ModelSpec& model, const ComplexMatrix& rho0, double dt,
    const std::vector<double>& times, Diagnostics* diag) {
  require_square_match(model, rho0);
  if (dt <= 0) throw ArgumentError("dt must be > 0");
  if (times.empty()) return {};

  std::vector<long> target_steps;
  long max_step = 0;
  target_steps.reserve(times.size());
  for (double t : times) {
    const auto s = static_cast<long>(std::llround(t / dt));
    if (s < 0) throw ArgumentError("checkpoint before t = 0");
    target_steps.push_back(s);
    max_step = std::max(max_step, s);
  }

  std::vector<ComplexMatrix> out(times.size());
  ComplexMatrix rho = rho0;
  auto store_matching = [&](long k, const ComplexMatrix& state, double) {
    for (std::size_t i = 0; i < target_steps.size(); ++i) {
      if (target_steps[i] == k) out[i] = state;
    }
  };
  store_matching(0, rho, 0.0);
  MasterRun run;
  integrate_master(model, rho, dt, max_step, run, diag, store_matching);
  return out;
}

double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols()) {
    throw ShapeError("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho1 - rho2,
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian,
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double hermiticity_deviation(const ComplexMatrix& rho) {
  return (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
}

}  // namespace qtraj
