#include "qtraj/unravelings.hpp"

#include <cmath>
#include <string>

#include "qtraj/fock.hpp"

namespace qtraj {

const char* stepper_name(Stepper s) {
  switch (s) {
    case Stepper::qsd: return "qsd";
    case Stepper::qj: return "qj";
    case Stepper::qj_diffusive: return "qj_diffusive";
  }
  return "?";
}

StepContext::StepContext(const ModelSpec& model) : model_(&model) {
  lind_dag_lind_.reserve(model.lindblads.size());
  for (const auto& l : model.lindblads) {
    lind_dag_lind_.push_back(l.adjoint() * l);
  }
  h_psi_.resize(model.dim);
  ldl_psi_.resize(model.dim);
  drift_.resize(model.dim);
  l_psi_.resize(model.lindblads.size());
  for (auto& v : l_psi_) v.resize(model.dim);
}

void StepContext::require_state(const ComplexVector& psi) const {
  if (psi.size() != model_->dim) {
    throw ShapeError("state dim " + std::to_string(psi.size()) +
                     " does not match model dim " +
                     std::to_string(model_->dim));
  }
}

ComplexVector StepContext::finish(ComplexVector out, double t, StepDiag* diag,
                                  double drift_norm) {
  const double n = out.norm();
  if (!std::isfinite(n) || n <= 0.0) {
    throw NumericalBlowupError(
        "non-finite amplitudes in stochastic step at t = " + std::to_string(t),
        t);
  }
  out /= n;
  if (diag != nullptr) {
    diag->pre_norm = n;
    diag->tail_mass = tail_mass(out);
    diag->drift_warning = drift_norm > 0.1;
  }
  return out;
}

ComplexVector StepContext::qsd(const ComplexVector& psi, double t, double dt,
                               NoiseStream& stream, StepDiag* diag) {
  require_state(psi);
  model_->hamiltonian.apply(t, psi, h_psi_);
  drift_ = -imag_unit * dt * h_psi_;
  ComplexVector noise = ComplexVector::Zero(model_->dim);
  for (std::size_t j = 0; j < lind_dag_lind_.size(); ++j) {
    l_psi_[j].noalias() = model_->lindblads[j] * psi;
    ldl_psi_.noalias() = lind_dag_lind_[j] * psi;
    const Complex exp_l = psi.dot(l_psi_[j]);
    drift_ += -0.5 * dt *
              (ldl_psi_ - 2.0 * std::conj(exp_l) * l_psi_[j] +
               std::norm(exp_l) * psi);
    noise += (l_psi_[j] - exp_l * psi) * stream.complex_wiener(dt);
  }
  return finish(psi + drift_ + noise, t, diag, drift_.norm());
}

ComplexVector StepContext::qj(const ComplexVector& psi, double t, double dt,
                              NoiseStream& stream,
                              std::vector<JumpEvent>& jumps, StepDiag* diag) {
  require_state(psi);
  const int channels = model_->channels();

  // Firing decisions come from the state at the start of the step; one
  // uniform is always drawn per channel so the stream position does not
  // depend on outcomes.
  double total_rate = 0.0;
  int fired = -1;
  bool multi = false;
  std::vector<double> rates(channels);
  for (int j = 0; j < channels; ++j) {
    l_psi_[j].noalias() = model_->lindblads[j] * psi;
    rates[j] = l_psi_[j].squaredNorm();
    total_rate += rates[j];
  }
  for (int j = 0; j < channels; ++j) {
    const double u = stream.uniform();
    if (u < rates[j] * dt) {
      if (fired < 0) {
        fired = j;
      } else {
        multi = true;
      }
    }
  }

  // Deterministic drift of the no-jump evolution, applied first; a fired
  // jump then acts on the drifted state.
  model_->hamiltonian.apply(t, psi, h_psi_);
  drift_ = -imag_unit * dt * h_psi_;
  for (int j = 0; j < channels; ++j) {
    ldl_psi_.noalias() = lind_dag_lind_[j] * psi;
    drift_ += -0.5 * dt * (ldl_psi_ - rates[j] * psi);
  }
  ComplexVector out =
      finish(psi + drift_, t, diag, drift_.norm());
  if (diag != nullptr) {
    diag->multi_fire = multi;
    diag->drift_warning = diag->drift_warning || total_rate * dt > 0.1;
  }

  if (fired >= 0) {
    if (rates[fired] < 1e-14) {
      throw DegenerateJumpError(
          "jump fired on channel " + std::to_string(fired) +
              " with vanishing rate " + std::to_string(rates[fired]),
          fired);
    }
    ComplexVector jumped = model_->lindblads[fired] * out;
    const double n = jumped.norm();
    if (n <= 1e-150 || !std::isfinite(n)) {
      throw DegenerateJumpError(
          "jump annihilated the state on channel " + std::to_string(fired),
          fired);
    }
    jumped /= n;
    jumps.push_back(JumpEvent{t + dt, fired, rates[fired],
                              (jumped - out).norm()});
    out = std::move(jumped);
    if (diag != nullptr) diag->tail_mass = tail_mass(out);
  }
  return out;
}

ComplexVector StepContext::qj_diffusive(const ComplexVector& psi, double t,
                                        double dt, NoiseStream& stream,
                                        StepDiag* diag) {
  require_state(psi);
  model_->hamiltonian.apply(t, psi, h_psi_);
  drift_ = -imag_unit * dt * h_psi_;
  ComplexVector noise = ComplexVector::Zero(model_->dim);
  for (std::size_t j = 0; j < lind_dag_lind_.size(); ++j) {
    l_psi_[j].noalias() = model_->lindblads[j] * psi;
    const Complex exp_l = psi.dot(l_psi_[j]);
    const double mod = std::abs(exp_l);
    if (mod < 1e-12) {
      throw PhaseSingularityError(
          "qj_diffusive: |<L>| = " + std::to_string(mod) + " on channel " +
              std::to_string(j) +
              "; the noise phase <L^dag>/|<L>| is undefined here",
          static_cast<int>(j));
    }
    ldl_psi_.noalias() = lind_dag_lind_[j] * psi;
    drift_ += -0.5 * dt *
              (ldl_psi_ - 2.0 * std::conj(exp_l) * l_psi_[j] + mod * mod * psi);
    const Complex phase = std::conj(exp_l) / mod;
    noise += (l_psi_[j] - exp_l * psi) * (phase * stream.real_wiener(dt));
  }
  return finish(psi + drift_ + noise, t, diag, drift_.norm());
}

ComplexVector StepContext::step(Stepper which, const ComplexVector& psi,
                                double t, double dt, NoiseStream& stream,
                                std::vector<JumpEvent>& jumps,
                                StepDiag* diag) {
  switch (which) {
    case Stepper::qsd: return qsd(psi, t, dt, stream, diag);
    case Stepper::qj: return qj(psi, t, dt, stream, jumps, diag);
    case Stepper::qj_diffusive: return qj_diffusive(psi, t, dt, stream, diag);
  }
  throw ArgumentError("unknown stepper");
}

ComplexVector apply_jump(const ModelSpec& model, const ComplexVector& psi,
                         int channel) {
  if (channel < 0 || channel >= model.channels()) {
    throw ArgumentError("jump channel " + std::to_string(channel) +
                        " out of range");
  }
  ComplexVector jumped = model.lindblads[channel] * psi;
  const double n = jumped.norm();
  if (n <= 1e-150 || !std::isfinite(n)) {
    throw DegenerateJumpError("jump annihilated the state on channel " +
                                  std::to_string(channel),
                              channel);
  }
  return jumped / n;
}

ComplexVector qsd_step(const ModelSpec& model, const ComplexVector& psi,
                       double t, double dt, NoiseStream& stream,
                       StepDiag* diag) {
  StepContext ctx(model);
  return ctx.qsd(psi, t, dt, stream, diag);
}

ComplexVector qj_step(const ModelSpec& model, const ComplexVector& psi,
                      double t, double dt, NoiseStream& stream,
                      std::vector<JumpEvent>& jumps, StepDiag* diag) {
  StepContext ctx(model);
  return ctx.qj(psi, t, dt, stream, jumps, diag);
}

ComplexVector qj_diffusive_step(const ModelSpec& model,
                                const ComplexVector& psi, double t, double dt,
                                NoiseStream& stream, StepDiag* diag) {
  StepContext ctx(model);
  return ctx.qj_diffusive(psi, t, dt, stream, diag);
}

}  // namespace qtraj
