#include "qtraj/verify.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "qtraj/ensemble.hpp"
#include "qtraj/fock.hpp"
#include "qtraj/stats.hpp"

namespace qtraj {

namespace {

struct Report {
  std::ostream& out;
  bool all_passed = true;
  void line(const std::string& name, bool passed, const std::string& detail) {
    out << (passed ? "PASS" : "FAIL") << "  " << name;
    if (!detail.empty()) out << "  (" << detail << ")";
    out << "\n";
    all_passed = all_passed && passed;
  }
};

ModelSpec thermal_forced_ho(int dim) {
  HOParams params;
  params.omega = 1.0;
  params.gamma = 1.0;
  params.nbar = 0.2;
  params.force = 1.0;
  params.dim = dim;
  return damped_ho(params);
}

// Every emitted state unit-norm within 1e-12, all steppers, all seeds.
void check_norm_preservation(Report& report,
                             const std::vector<std::uint64_t>& seeds) {
  const ModelSpec model = thermal_forced_ho(16);
  const ComplexVector psi0 = coherent_state({1.0, 0.0}, 16);
  double worst = 0.0;
  for (const Stepper stepper :
       {Stepper::qsd, Stepper::qj, Stepper::qj_diffusive}) {
    for (const auto seed : seeds) {
      StepContext ctx(model);
      NoiseStream stream(seed, 0);
      std::vector<JumpEvent> jumps;
      ComplexVector psi = psi0;
      for (int k = 0; k < 400; ++k) {
        psi = ctx.step(stepper, psi, k * 1e-3, 1e-3, stream, jumps);
        worst = std::max(worst, std::abs(psi.norm() - 1.0));
      }
    }
  }
  std::ostringstream detail;
  detail << "max |norm - 1| = " << worst;
  report.line("norm preservation (post-renormalization, 1e-12)",
              worst <= 1e-12, detail.str());
}

// Hermiticity 1e-10, trace 1e-9, positivity -1e-8 along master runs.
void check_master_invariants(Report& report) {
  double worst_herm = 0.0, worst_trace = 0.0, worst_eig = 0.0;
  auto scan = [&](const ModelSpec& model, const ComplexVector& psi0,
                  double t_final) {
    const ComplexMatrix rho0 = psi0 * psi0.adjoint();
    const MasterRun run = evolve_master(model, rho0, 1e-3, t_final, 200);
    for (const auto& rho : run.states) {
      worst_herm = std::max(worst_herm, hermiticity_deviation(rho));
      worst_trace = std::max(worst_trace, std::abs(rho.trace().real() - 1.0));
      worst_eig = std::min(worst_eig, min_eigenvalue(rho));
    }
  };
  scan(thermal_forced_ho(12), coherent_state({1.0, 0.0}, 12), 2.0);
  DuffingParams duffing_params;
  duffing_params.beta = 1.0;
  duffing_params.dim = 20;
  scan(duffing(duffing_params), coherent_state({0.7, 0.0}, 20), 5.0);

  std::ostringstream detail;
  detail << "hermiticity " << worst_herm << ", trace " << worst_trace
         << ", min eigenvalue " << worst_eig;
  report.line("master-oracle hermiticity/trace/positivity bounds",
              worst_herm <= 1e-10 && worst_trace <= 1e-9 && worst_eig >= -1e-8,
              detail.str());
}

// Halving dt shrinks the error against a dt/10 reference ~16x.
void check_rk4_order(Report& report) {
  HOParams params;
  params.omega = 1.0;
  params.gamma = 0.5;
  params.dim = 10;
  const ModelSpec model = damped_ho(params);
  ComplexMatrix rho0 = ComplexMatrix::Zero(10, 10);
  rho0(1, 1) = 1.0;
  // Coarse steps exaggerate the truncation error so the ratio is clean.
  const double dt = 0.05;
  auto final_state = [&](double step) {
    return evolve_master(model, rho0, step, 1.0,
                         static_cast<int>(std::llround(1.0 / step)))
        .final_state();
  };
  const ComplexMatrix reference = final_state(dt / 10.0);
  const double err_coarse = trace_distance(final_state(dt), reference);
  const double err_fine = trace_distance(final_state(dt / 2.0), reference);
  const double ratio = err_coarse / err_fine;
  std::ostringstream detail;
  detail << "error ratio " << ratio << " (expect ~16)";
  report.line("rk4 convergence order", ratio > 10.0 && ratio < 24.0,
              detail.str());
}

// Identical (seed, stream) reproduces records bit-for-bit.
void check_replay(Report& report, const std::vector<std::uint64_t>& seeds) {
  const ModelSpec model = thermal_forced_ho(12);
  const ComplexVector psi0 = coherent_state({1.0, 0.0}, 12);
  bool ok = true;
  for (const Stepper stepper :
       {Stepper::qsd, Stepper::qj, Stepper::qj_diffusive}) {
    TrajectoryOptions options;
    options.stepper = stepper;
    options.dt = 1e-3;
    options.t_final = 0.3;
    options.sample_every = 5;
    for (const auto seed : seeds) {
      const TrajectoryRecord a = run_trajectory(model, psi0, options, seed, 3);
      const TrajectoryRecord b = run_trajectory(model, psi0, options, seed, 3);
      ok = ok && a == b;
    }
  }
  report.line("bit-exact replay from (seed, stream)", ok, "");
}

// Jump counts from a held coherent state are Poisson with rate <L^dag L>.
void check_jump_poisson(Report& report,
                        const std::vector<std::uint64_t>& seeds) {
  HOParams params;
  params.omega = 1.0;
  params.gamma = 1.0;
  params.dim = 30;
  const ModelSpec model = damped_ho(params);
  const ComplexVector psi = coherent_state({2.0, 0.0}, 30);
  StepContext ctx(model);
  const double dt = 1e-3;
  const int steps_per_window = 1000;
  const int windows = 400;

  // Exact per-step rate of the truncated state.
  const double rate = (model.lindblads[0] * psi).squaredNorm();
  const double lambda = rate * dt * steps_per_window;

  bool ok = true;
  double min_p = 1.0;
  for (const auto seed : seeds) {
    NoiseStream stream(seed, 0);
    std::vector<long> counts;
    counts.reserve(windows);
    for (int w = 0; w < windows; ++w) {
      std::vector<JumpEvent> jumps;
      for (int k = 0; k < steps_per_window; ++k) {
        // State held fixed: only the firing statistics are sampled.
        ctx.qj(psi, 0.0, dt, stream, jumps);
      }
      counts.push_back(static_cast<long>(jumps.size()));
    }
    const Chi2Result chi2 = chi_square_poisson(counts, lambda);
    min_p = std::min(min_p, chi2.p_value);
    ok = ok && chi2.p_value >= 0.01;
  }
  std::ostringstream detail;
  detail << "lambda " << lambda << ", min p-value " << min_p;
  report.line("poisson jump counts (chi-square at 0.01)", ok, detail.str());
}

}  // namespace

std::vector<std::uint64_t> default_verify_seeds() {
  return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

bool run_verify(std::ostream& out, const std::vector<std::uint64_t>& seeds) {
  Report report{out};
  check_norm_preservation(report, seeds);
  check_master_invariants(report);
  check_rk4_order(report);
  check_replay(report, seeds);
  check_jump_poisson(report, seeds);
  return report.all_passed;
}

}  // namespace qtraj
