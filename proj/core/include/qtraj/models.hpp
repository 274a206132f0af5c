#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qtraj/errors.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/types.hpp"

namespace qtraj {

/// Hamiltonian of the form H(t) = h0 + cos(drive_frequency * t) * h1.
/// Everything in units of hbar = 1.
struct Hamiltonian {
  ComplexMatrix h0;
  ComplexMatrix h1;  // zero-size when undriven
  double drive_frequency = 0.0;

  bool driven() const { return h1.size() > 0; }
  int dim() const { return static_cast<int>(h0.rows()); }

  ComplexMatrix at(double t) const;

  /// out = H(t) * psi, no allocation beyond Eigen temporaries.
  void apply(double t, const ComplexVector& psi, ComplexVector& out) const;
};

/// A Hamiltonian plus its list of environment operators L_m. All operators
/// share one truncation dimension. `displaced`, when set by the builder,
/// rebuilds the same physical model with every operator conjugated by
/// D(alpha) (i.e. a -> a + alpha) at an arbitrary dimension; this is what
/// the moving-basis propagation uses.
struct ModelSpec {
  std::string name;
  int dim = 0;
  Hamiltonian hamiltonian;
  std::vector<ComplexMatrix> lindblads;
  std::function<ModelSpec(int, Complex)> displaced;

  int channels() const { return static_cast<int>(lindblads.size()); }

  /// Hash of the operator content; stamped into trajectory records so
  /// output files are traceable to the exact model.
  std::uint64_t fingerprint() const;
};

/// Damped harmonic oscillator at finite temperature, optionally displaced
/// by a constant force:
///   H   = omega a^dag a + force (a + a^dag)/sqrt(2)
///   L_1 = sqrt(nbar gamma) a^dag   (omitted when nbar = 0)
///   L_2 = sqrt((nbar+1) gamma) a
struct HOParams {
  double omega = 1.0;
  double gamma = 1.0;
  double nbar = 0.0;
  double force = 0.0;
  int dim = 2;
};

ModelSpec damped_ho(const HOParams& params);

/// Mean-field steady state of the forced damped HO,
/// -i omega a - (gamma/2) a - i force/sqrt(2) = 0.
Complex forced_ho_alpha_eq(const HOParams& params);

/// Forced damped Duffing oscillator in the double-well chaotic regime.
/// beta sets the scale of the system (well minima at q = +-beta); the
/// classical limit is beta -> infinity at fixed hbar = 1:
///   H(t) = p^2/2 + q^4/(4 beta^2) - q^2/2 + g beta q cos(W t)
///          + (damping/2)(qp + pq),   L = sqrt(2 damping) a
/// (vacuum energy subtracted; constants in H are global phase only).
struct DuffingParams {
  double beta = 1.0;
  double damping = 0.125;
  double drive_amplitude = 0.3;
  double drive_frequency = 1.0;
  int dim = 2;
};

ModelSpec duffing(const DuffingParams& params);

/// Euler-Maruyama integration of the classical stochastic mean-field law
///   d alpha = (-i omega - gamma/2) alpha dt - i force/sqrt(2) dt
///             + sqrt(nbar gamma) d_xi.
/// Returns the per-step series including t = 0.
std::vector<Complex> classical_alpha_evolve(const HOParams& params,
                                            Complex alpha0, double dt,
                                            double t_final,
                                            NoiseStream& stream);

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

/// RK4 integration of the classical Duffing flow matching `duffing`:
///   dq/dt = p
///   dp/dt = q - q^3/beta^2 - 2 damping p - g beta cos(W t)
/// Returns the per-step series including t = 0.
std::vector<PhasePoint> classical_duffing_evolve(const DuffingParams& params,
                                                 double q0, double p0,
                                                 double dt, double t_final);

/// Classical Duffing energy p^2/2 + q^4/(4 beta^2) - q^2/2 + beta^2/4.
double classical_duffing_energy(const DuffingParams& params, double q,
                                double p);

}  // namespace qtraj
