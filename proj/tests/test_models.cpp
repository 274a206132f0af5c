#include <doctest.h>

#include <cmath>

#include "qtraj/fock.hpp"
#include "qtraj/master.hpp"
#include "qtraj/models.hpp"

using namespace qtraj;

TEST_CASE("damped ho at zero temperature has only the decay channel") {
  HOParams params;
  params.gamma = 0.9;
  params.nbar = 0.0;
  params.dim = 6;
  const ModelSpec model = damped_ho(params);
  REQUIRE(model.channels() == 1);
  const ComplexMatrix expected = std::sqrt(0.9) * make_annihilation(6);
  CHECK((model.lindblads[0] - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(!model.hamiltonian.driven());
}

TEST_CASE("thermal model carries both channels in (up, down) order") {
  HOParams params;
  params.gamma = 1.0;
  params.nbar = 0.2;
  params.dim = 6;
  const ModelSpec model = damped_ho(params);
  REQUIRE(model.channels() == 2);
  CHECK((model.lindblads[0] - std::sqrt(0.2) * make_creation(6))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((model.lindblads[1] - std::sqrt(1.2) * make_annihilation(6))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
}

TEST_CASE("forced steady state matches the mean-field fixed point") {
  HOParams params;
  params.omega = 1.0;
  params.gamma = 1.0;
  params.nbar = 0.0;
  params.force = 1.5;
  params.dim = 24;
  const ModelSpec model = damped_ho(params);
  const Complex alpha_eq = forced_ho_alpha_eq(params);

  // Displacement relaxes at gamma/2; start halfway so t = 20 leaves a
  // residual well under the tolerance.
  const ComplexVector psi0 = coherent_state(0.5 * alpha_eq, 24);
  const ComplexMatrix rho0 = psi0 * psi0.adjoint();
  const MasterRun run = evolve_master(model, rho0, 1e-3, 20.0, 20000);
  const ComplexMatrix a = make_annihilation(24);
  const Complex mean = (a * run.final_state()).trace();
  CHECK(std::abs(mean - alpha_eq) < 2e-4);
  // |alpha_eq| grows linearly with the force
  params.force = 3.0;
  CHECK(std::abs(forced_ho_alpha_eq(params)) ==
        doctest::Approx(2.0 * std::abs(alpha_eq)));
}

TEST_CASE("classical alpha evolution: closed-form decay") {
  HOParams params;
  params.omega = 1.0;
  params.gamma = 0.8;
  params.nbar = 0.0;
  NoiseStream stream(1, 0);
  const Complex alpha0{1.5, -0.5};
  const double dt = 1e-4, t_final = 2.0;
  const auto series =
      classical_alpha_evolve(params, alpha0, dt, t_final, stream);
  const Complex expected =
      alpha0 * std::exp(Complex{-0.4 * t_final, -t_final});
  CHECK(std::abs(series.back() - expected) < 5e-4);
}

TEST_CASE("classical alpha evolution: pure rotation preserves magnitude") {
  HOParams params;
  params.omega = 1.0;
  params.gamma = 0.0;
  NoiseStream stream(2, 0);
  const auto series =
      classical_alpha_evolve(params, {2.0, 0.0}, 1e-4, 3.0, stream);
  CHECK(std::abs(std::abs(series.back()) - 2.0) < 2e-3);
}

TEST_CASE("classical alpha evolution: OU stationary second moment is nbar") {
  HOParams params;
  params.omega = 1.0;
  params.gamma = 1.0;
  params.nbar = 0.2;
  const int runs = 2000;
  double acc = 0.0;
  for (int i = 0; i < runs; ++i) {
    NoiseStream stream(99, static_cast<std::uint64_t>(i));
    const auto series =
        classical_alpha_evolve(params, {0.0, 0.0}, 1e-2, 12.0, stream);
    acc += std::norm(series.back());
  }
  const double second_moment = acc / runs;
  CHECK(std::abs(second_moment - params.nbar) / params.nbar < 0.05);
}

TEST_CASE("duffing hamiltonian structure") {
  DuffingParams params;
  params.beta = 1.0;
  params.damping = 0.125;
  params.drive_amplitude = 0.0;
  params.dim = 20;
  const ModelSpec undriven = duffing(params);
  CHECK(!undriven.hamiltonian.driven());
  CHECK(hermiticity_deviation(undriven.hamiltonian.h0) < 1e-12);
  CHECK(undriven.channels() == 1);

  params.drive_amplitude = 0.3;
  const ModelSpec driven = duffing(params);
  CHECK(driven.hamiltonian.driven());
  CHECK(hermiticity_deviation(driven.hamiltonian.at(0.37)) < 1e-12);
}

TEST_CASE("canonical commutator [q, p] = i below the truncation edge") {
  const int dim = 16;
  const ComplexMatrix q = make_position(dim);
  const ComplexMatrix p = make_momentum(dim);
  const ComplexMatrix comm = q * p - p * q;
  for (int n = 0; n < dim - 1; ++n) {
    ComplexVector fock = ComplexVector::Zero(dim);
    fock(n) = 1.0;
    CHECK(std::abs(expectation(comm, fock) - imag_unit) < 1e-12);
  }
}

TEST_CASE("displaced rebuild agrees with conjugation by D(alpha)") {
  const Complex alpha{0.7, -0.3};
  const int dim = 60, block = 40;

  SUBCASE("harmonic oscillator") {
    HOParams params;
    params.omega = 1.2;
    params.gamma = 0.8;
    params.nbar = 0.2;
    params.force = 0.5;
    params.dim = dim;
    const ModelSpec model = damped_ho(params);
    const ModelSpec disp = model.displaced(dim, alpha);
    const ComplexMatrix d = displacement_operator(alpha, dim);

    ComplexMatrix h_conj = d.adjoint() * model.hamiltonian.h0 * d;
    h_conj -= h_conj(0, 0) * ComplexMatrix::Identity(dim, dim);
    CHECK((h_conj - disp.hamiltonian.h0)
              .topLeftCorner(block, block)
              .cwiseAbs()
              .maxCoeff() < 1e-8);
    for (int m = 0; m < model.channels(); ++m) {
      const ComplexMatrix l_conj = d.adjoint() * model.lindblads[m] * d;
      CHECK((l_conj - disp.lindblads[m])
                .topLeftCorner(block, block)
                .cwiseAbs()
                .maxCoeff() < 1e-8);
    }
  }

  SUBCASE("duffing") {
    DuffingParams params;
    params.beta = 2.0;
    params.dim = dim;
    const ModelSpec model = duffing(params);
    const ModelSpec disp = model.displaced(dim, alpha);
    const ComplexMatrix d = displacement_operator(alpha, dim);

    ComplexMatrix h_conj = d.adjoint() * model.hamiltonian.h0 * d;
    h_conj -= h_conj(0, 0) * ComplexMatrix::Identity(dim, dim);
    CHECK((h_conj - disp.hamiltonian.h0)
              .topLeftCorner(block, block)
              .cwiseAbs()
              .maxCoeff() < 1e-5);
    const ComplexMatrix l_conj = d.adjoint() * model.lindblads[0] * d;
    CHECK((l_conj - disp.lindblads[0])
              .topLeftCorner(block, block)
              .cwiseAbs()
              .maxCoeff() < 1e-8);
  }
}

TEST_CASE("dissipative quantum duffing relaxes toward the wells") {
  DuffingParams params;
  params.beta = 1.0;
  params.damping = 0.125;
  params.drive_amplitude = 0.0;
  params.dim = 24;
  const ModelSpec model = duffing(params);

  const ComplexVector psi0 = coherent_state({1.3, 0.0}, 24);
  const ComplexMatrix rho0 = psi0 * psi0.adjoint();
  const double period = 2.0 * M_PI;
  const int periods = 6;
  const MasterRun run =
      evolve_master(model, rho0, 1e-3, periods * period,
                    static_cast<int>(std::llround(period / 1e-3)));

  std::vector<double> energies;
  for (const auto& rho : run.states) {
    energies.push_back((model.hamiltonian.h0 * rho).trace().real());
  }
  REQUIRE(energies.size() >= 4);
  // Eventual monotone trend: per-period energies never increase beyond
  // tolerance and end strictly below the start.
  for (std::size_t w = 1; w + 1 < energies.size(); ++w) {
    CHECK(energies[w + 1] <= energies[w] + 1e-6);
  }
  CHECK(energies.back() < energies.front());
}

TEST_CASE("classical duffing: well minimum is a fixed point") {
  DuffingParams params;
  params.beta = 1.7;
  params.damping = 0.0;
  params.drive_amplitude = 0.0;
  const auto series =
      classical_duffing_evolve(params, params.beta, 0.0, 1e-3, 5.0);
  for (const auto& point : series) {
    CHECK(std::abs(point.q - params.beta) < 1e-8);
    CHECK(std::abs(point.p) < 1e-8);
  }
}

TEST_CASE("classical duffing: damping dissipates energy") {
  DuffingParams params;
  params.beta = 1.0;
  params.damping = 0.1;
  params.drive_amplitude = 0.0;
  const auto series = classical_duffing_evolve(params, 1.8, 0.0, 1e-3, 20.0);
  double prev =
      classical_duffing_energy(params, series.front().q, series.front().p);
  const double first = prev;
  for (std::size_t k = 1; k < series.size(); ++k) {
    const double e =
        classical_duffing_energy(params, series[k].q, series[k].p);
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
  CHECK(prev < first);
}

TEST_CASE("classical duffing: chaotic strobe stays bounded, never settles") {
  DuffingParams params;  // defaults are the chaotic set
  params.beta = 1.0;
  const double period = 2.0 * M_PI / params.drive_frequency;
  const int periods = 500;
  const double dt = period / 2048;
  const auto series =
      classical_duffing_evolve(params, 0.5, 0.3, dt, periods * period);

  std::vector<PhasePoint> strobe;
  for (int k = 100; k < periods; ++k) {
    strobe.push_back(series[static_cast<std::size_t>(k) * 2048]);
  }
  double q_min = 1e9, q_max = -1e9, p_min = 1e9, p_max = -1e9;
  for (const auto& s : strobe) {
    q_min = std::min(q_min, s.q);
    q_max = std::max(q_max, s.q);
    p_min = std::min(p_min, s.p);
    p_max = std::max(p_max, s.p);
  }
  // bounded
  CHECK(q_max < 10.0 * params.beta);
  CHECK(p_max < 10.0 * params.beta);
  CHECK(q_min > -10.0 * params.beta);
  CHECK(p_min > -10.0 * params.beta);
  // fills a region of nonzero area instead of collapsing to a point
  CHECK(q_max - q_min > 0.2);
  CHECK(p_max - p_min > 0.2);
  // non-periodic: consecutive strobes keep moving
  int moved = 0;
  for (std::size_t k = 1; k < strobe.size(); ++k) {
    const double dq = strobe[k].q - strobe[k - 1].q;
    const double dp = strobe[k].p - strobe[k - 1].p;
    if (std::hypot(dq, dp) > 1e-3) ++moved;
  }
  CHECK(moved > static_cast<int>(strobe.size()) / 2);
}

TEST_CASE("parameter validation") {
  HOParams bad_ho;
  bad_ho.gamma = -1.0;
  CHECK_THROWS_AS(damped_ho(bad_ho), ArgumentError);
  DuffingParams bad_duffing;
  bad_duffing.beta = 0.0;
  CHECK_THROWS_AS(duffing(bad_duffing), ArgumentError);
}

TEST_CASE("model fingerprint tracks content") {
  HOParams params;
  params.dim = 8;
  const ModelSpec a = damped_ho(params);
  const ModelSpec b = damped_ho(params);
  CHECK(a.fingerprint() == b.fingerprint());
  params.gamma = 0.5;
  const ModelSpec c = damped_ho(params);
  CHECK(a.fingerprint() != c.fingerprint());
}
