#include "qtraj/models.hpp"

#include <cmath>
#include <cstring>

#include "qtraj/fock.hpp"

namespace qtraj {

ComplexMatrix Hamiltonian::at(double t) const {
  if (!driven()) return h0;
  return h0 + std::cos(drive_frequency * t) * h1;
}

void Hamiltonian::apply(double t, const ComplexVector& psi,
                        ComplexVector& out) const {
  out.noalias() = h0 * psi;
  if (driven()) {
    out.noalias() += std::cos(drive_frequency * t) * (h1 * psi);
  }
}

namespace {

// FNV-1a over raw little-endian bytes; stable across runs of one build.
struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void feed(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  }
  void feed(const ComplexMatrix& m) {
    if (m.size() > 0) feed(m.data(), sizeof(Complex) * m.size());
  }
  void feed(double x) { feed(&x, sizeof(x)); }
};

void check_params(const HOParams& p) {
  if (p.gamma < 0) throw ArgumentError("gamma must be >= 0");
  if (p.nbar < 0) throw ArgumentError("nbar must be >= 0");
  if (p.dim < 2) throw ArgumentError("dim must be >= 2");
}

void check_params(const DuffingParams& p) {
  if (p.beta <= 0) throw ArgumentError("beta must be > 0");
  if (p.damping < 0) throw ArgumentError("damping must be >= 0");
  if (p.drive_frequency <= 0) throw ArgumentError("drive_frequency must be > 0");
  if (p.dim < 2) throw ArgumentError("dim must be >= 2");
}

// Builds the damped-HO operators with a -> a + alpha. The scalar piece of
// H is dropped: it only shifts the global phase and would otherwise
// dominate the drift norm when |alpha| is large.
ModelSpec build_ho(const HOParams& params, int dim, Complex alpha) {
  ModelSpec model;
  model.name = params.force != 0.0 ? "forced_ho" : "damped_ho";
  model.dim = dim;

  const ComplexMatrix a = make_annihilation(dim);
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);

  // omega (a^dag + a*)(a + alpha) + force ((a + alpha) + h.c.)/sqrt(2),
  // scalar part removed.
  ComplexMatrix h = params.omega * (ad * a);
  if (alpha != Complex{0.0, 0.0}) {
    h += params.omega * (std::conj(alpha) * a + alpha * ad);
  }
  if (params.force != 0.0) {
    h += params.force / std::sqrt(2.0) * (a + ad);
  }
  model.hamiltonian.h0 = std::move(h);

  const double up = std::sqrt(params.nbar * params.gamma);
  const double down = std::sqrt((params.nbar + 1.0) * params.gamma);
  if (up > 0.0) {
    model.lindblads.push_back(up * (ad + std::conj(alpha) * id));
  }
  if (down > 0.0) {
    model.lindblads.push_back(down * (a + alpha * id));
  }

  HOParams captured = params;
  model.displaced = [captured](int d, Complex al) {
    return build_ho(captured, d, al);
  };
  return model;
}

ModelSpec build_duffing(const DuffingParams& params, int dim, Complex alpha) {
  ModelSpec model;
  model.name = "duffing";
  model.dim = dim;

  const ComplexMatrix a = make_annihilation(dim);
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix q =
      make_position(dim) + std::sqrt(2.0) * alpha.real() * id;
  const ComplexMatrix p =
      make_momentum(dim) + std::sqrt(2.0) * alpha.imag() * id;

  const double b2 = params.beta * params.beta;
  const ComplexMatrix q2 = q * q;
  ComplexMatrix h0 = 0.5 * (p * p) + (q2 * q2) / (4.0 * b2) - 0.5 * q2 +
                     0.5 * params.damping * (q * p + p * q);
  // Remove the frame vacuum energy: it is a global phase, and keeping it
  // would make the stepper multiply the state by a large pure-phase rate.
  h0 -= h0(0, 0).real() * id;
  model.hamiltonian.h0 = std::move(h0);
  // The displaced part of the drive is a scalar (another global phase),
  // so the drive couples through the frame-local quadrature only.
  if (params.drive_amplitude != 0.0) {
    model.hamiltonian.h1 =
        params.drive_amplitude * params.beta * make_position(dim);
    model.hamiltonian.drive_frequency = params.drive_frequency;
  }

  model.lindblads.push_back(std::sqrt(2.0 * params.damping) *
                            (a + alpha * id));

  DuffingParams captured = params;
  model.displaced = [captured](int d, Complex al) {
    return build_duffing(captured, d, al);
  };
  return model;
}

}  // namespace

std::uint64_t ModelSpec::fingerprint() const {
  Fnv f;
  f.feed(name.data(), name.size());
  f.feed(static_cast<double>(dim));
  f.feed(hamiltonian.h0);
  f.feed(hamiltonian.h1);
  f.feed(hamiltonian.drive_frequency);
  for (const auto& l : lindblads) f.feed(l);
  return f.h;
}

ModelSpec damped_ho(const HOParams& params) {
  check_params(params);
  return build_ho(params, params.dim, Complex{0.0, 0.0});
}

Complex forced_ho_alpha_eq(const HOParams& params) {
  return -imag_unit * params.force / std::sqrt(2.0) /
         Complex{0.5 * params.gamma, params.omega};
}

ModelSpec duffing(const DuffingParams& params) {
  check_params(params);
  return build_duffing(params, params.dim, Complex{0.0, 0.0});
}

std::vector<Complex> classical_alpha_evolve(const HOParams& params,
                                            Complex alpha0, double dt,
                                            double t_final,
                                            NoiseStream& stream) {
  if (dt <= 0) throw ArgumentError("dt must be > 0");
  const auto steps = static_cast<long>(std::llround(t_final / dt));
  const Complex drift_rate{-0.5 * params.gamma, -params.omega};
  const Complex force_drift =
      -imag_unit * params.force / std::sqrt(2.0);
  const double noise_amp = std::sqrt(params.nbar * params.gamma);

  std::vector<Complex> series;
  series.reserve(steps + 1);
  Complex alpha = alpha0;
  series.push_back(alpha);
  for (long k = 0; k < steps; ++k) {
    alpha += (drift_rate * alpha + force_drift) * dt;
    if (noise_amp > 0.0) alpha += noise_amp * stream.complex_wiener(dt);
    series.push_back(alpha);
  }
  return series;
}

double classical_duffing_energy(const DuffingParams& params, double q,
                                double p) {
  const double b2 = params.beta * params.beta;
  return 0.5 * p * p + q * q * q * q / (4.0 * b2) - 0.5 * q * q + 0.25 * b2;
}

std::vector<PhasePoint> classical_duffing_evolve(const DuffingParams& params,
                                                 double q0, double p0,
                                                 double dt, double t_final) {
  if (dt <= 0) throw ArgumentError("dt must be > 0");
  check_params(params);
  const double b2 = params.beta * params.beta;
  const double g = params.drive_amplitude * params.beta;
  const double two_damping = 2.0 * params.damping;
  const double w = params.drive_frequency;

  auto accel = [&](double q, double p, double t) {
    return q - q * q * q / b2 - two_damping * p - g * std::cos(w * t);
  };

  const auto steps = static_cast<long>(std::llround(t_final / dt));
  std::vector<PhasePoint> series;
  series.reserve(steps + 1);
  double q = q0, p = p0;
  series.push_back({q, p});
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double k1q = p, k1p = accel(q, p, t);
    const double k2q = p + 0.5 * dt * k1p,
                 k2p = accel(q + 0.5 * dt * k1q, p + 0.5 * dt * k1p, t + 0.5 * dt);
    const double k3q = p + 0.5 * dt * k2p,
                 k3p = accel(q + 0.5 * dt * k2q, p + 0.5 * dt * k2p, t + 0.5 * dt);
    const double k4q = p + dt * k3p,
                 k4p = accel(q + dt * k3q, p + dt * k3p, t + dt);
    q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    series.push_back({q, p});
  }
  return series;
}

}  // namespace qtraj
