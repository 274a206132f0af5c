#include <doctest.h>

#include <cmath>

#include "qtraj/fock.hpp"
#include "qtraj/master.hpp"

using namespace qtraj;

namespace {

ModelSpec plain_damped_ho(double omega, double gamma, double nbar, int dim) {
  HOParams params;
  params.omega = omega;
  params.gamma = gamma;
  params.nbar = nbar;
  params.dim = dim;
  return damped_ho(params);
}

ComplexMatrix fock_projector(int level, int dim) {
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(level, level) = 1.0;
  return rho;
}

}  // namespace

TEST_CASE("lindblad rhs for |1><1| under pure decay") {
  const int dim = 6;
  const double gamma = 0.8;
  const ModelSpec model = plain_damped_ho(1.0, gamma, 0.0, dim);
  const ComplexMatrix rhs = lindblad_rhs(model, fock_projector(1, dim), 0.0);
  ComplexMatrix expected = ComplexMatrix::Zero(dim, dim);
  expected(0, 0) = gamma;
  expected(1, 1) = -gamma;
  CHECK((rhs - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ground state is stationary without environment") {
  const ModelSpec model = plain_damped_ho(1.0, 0.0, 0.0, 5);
  const ComplexMatrix rhs = lindblad_rhs(model, fock_projector(0, 5), 0.0);
  CHECK(rhs.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mean-field drift of <a> matches -i omega - gamma/2") {
  const int dim = 40;
  const double omega = 1.3, gamma = 0.7;
  const ModelSpec model = plain_damped_ho(omega, gamma, 0.0, dim);
  const ComplexVector psi = coherent_state({1.1, -0.6}, dim);
  const ComplexMatrix rho = psi * psi.adjoint();
  const ComplexMatrix rhs = lindblad_rhs(model, rho, 0.0);
  const ComplexMatrix a = make_annihilation(dim);
  const Complex da_dt = (a * rhs).trace();
  const Complex expected = Complex{-0.5 * gamma, -omega} * (a * rho).trace();
  CHECK(std::abs(da_dt - expected) / std::abs(expected) < 1e-6);
}

TEST_CASE("rhs is traceless and Hermitian for random inputs") {
  NoiseStream stream(17, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 4 + trial % 9;  // up to 12
    auto random_matrix = [&]() {
      ComplexMatrix m(dim, dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          auto [re, im] = stream.normal_pair();
          m(i, j) = Complex{re, im};
        }
      }
      return m;
    };
    ModelSpec model;
    model.name = "random";
    model.dim = dim;
    const ComplexMatrix h = random_matrix();
    model.hamiltonian.h0 = 0.5 * (h + h.adjoint().eval());
    model.lindblads.push_back(random_matrix());
    model.lindblads.push_back(random_matrix());

    const ComplexMatrix m = random_matrix();
    ComplexMatrix rho = m * m.adjoint();
    rho /= rho.trace().real();

    const ComplexMatrix rhs = lindblad_rhs(model, rho, 0.0);
    CHECK(std::abs(rhs.trace()) < 1e-10);
    CHECK(hermiticity_deviation(rhs) < 1e-10);
  }
}

TEST_CASE("photon number decays exponentially") {
  const int dim = 8;
  const double gamma = 0.5;
  const ModelSpec model = plain_damped_ho(1.0, gamma, 0.0, dim);
  const MasterRun run =
      evolve_master(model, fock_projector(1, dim), 1e-3, 1.0, 1000);
  const ComplexMatrix n = make_number(dim);
  const double n_final = (n * run.final_state()).trace().real();
  CHECK(std::abs(n_final - std::exp(-gamma * 1.0)) < 1e-6);
}

TEST_CASE("thermal steady state reaches nbar") {
  const int dim = 14;
  const ModelSpec model = plain_damped_ho(1.0, 1.0, 0.2, dim);
  const MasterRun run =
      evolve_master(model, fock_projector(0, dim), 1e-3, 9.0, 3000);
  const ComplexMatrix n = make_number(dim);
  const double n_final = (n * run.final_state()).trace().real();
  CHECK(std::abs(n_final - 0.2) < 1e-3);
}

TEST_CASE("unitary evolution preserves the spectrum") {
  const int dim = 8;
  HOParams params;
  params.omega = 1.0;
  params.gamma = 0.0;
  params.force = 0.7;
  params.dim = dim;
  const ModelSpec model = damped_ho(params);
  CHECK(model.channels() == 0);

  const ComplexVector psi1 = coherent_state({0.4, 0.2}, dim);
  ComplexVector psi2 = ComplexVector::Zero(dim);
  psi2(1) = 1.0;
  const ComplexMatrix rho0 =
      0.7 * psi1 * psi1.adjoint() + 0.3 * psi2 * psi2.adjoint();

  const MasterRun run = evolve_master(model, rho0, 1e-3, 1.0, 1000);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> start(rho0);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> end(run.final_state());
  CHECK((start.eigenvalues() - end.eigenvalues()).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("rk4 is fourth order against a fine reference") {
  const int dim = 8;
  const ModelSpec model = plain_damped_ho(1.0, 0.5, 0.0, dim);
  const ComplexMatrix rho0 = fock_projector(1, dim);
  auto final_at = [&](double dt) {
    return evolve_master(model, rho0, dt, 1.0,
                         static_cast<int>(std::llround(1.0 / dt)))
        .final_state();
  };
  const ComplexMatrix reference = final_at(0.005);
  const double coarse = trace_distance(final_at(0.05), reference);
  const double fine = trace_distance(final_at(0.025), reference);
  CHECK(coarse / fine > 10.0);
  CHECK(coarse / fine < 24.0);
}

TEST_CASE("trace distance basics") {
  const ComplexMatrix zero = fock_projector(0, 4);
  const ComplexMatrix one = fock_projector(1, 4);
  CHECK(trace_distance(zero, zero) == doctest::Approx(0.0));
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0));
  const ComplexMatrix mixed = 0.5 * (zero + one);
  CHECK(trace_distance(zero, mixed) == doctest::Approx(0.5));
  CHECK_THROWS_AS(trace_distance(zero, ComplexMatrix::Zero(5, 5)), ShapeError);
}

TEST_CASE("oversized steps raise a step-size error") {
  const ModelSpec model = plain_damped_ho(1.0, 6.0, 0.0, 10);
  ComplexMatrix rho0 = fock_projector(8, 10);
  CHECK_THROWS_AS(evolve_master(model, rho0, 0.8, 8.0), StepSizeError);
}

TEST_CASE("dimension mismatch raises a shape error") {
  const ModelSpec model = plain_damped_ho(1.0, 1.0, 0.0, 6);
  CHECK_THROWS_AS(lindblad_rhs(model, ComplexMatrix::Zero(5, 5), 0.0),
                  ShapeError);
}

TEST_CASE("dt * |H| diagnostic") {
  const ModelSpec model = plain_damped_ho(1.0, 0.1, 0.0, 30);
  Diagnostics diag;
  evolve_master(model, fock_projector(0, 30), 0.05, 0.05, 1, &diag);
  CHECK(!diag.empty());
}

TEST_CASE("checkpoint evolution matches full sampling") {
  const int dim = 10;
  const ModelSpec model = plain_damped_ho(1.0, 1.0, 0.2, dim);
  const ComplexVector psi = coherent_state({0.8, 0.1}, dim);
  const ComplexMatrix rho0 = psi * psi.adjoint();
  const auto at =
      evolve_master_checkpoints(model, rho0, 1e-3, {0.0, 0.25, 0.5});
  const MasterRun run = evolve_master(model, rho0, 1e-3, 0.5, 250);
  REQUIRE(at.size() == 3);
  CHECK((at[0] - rho0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((at[1] - run.states[1]).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((at[2] - run.states[2]).cwiseAbs().maxCoeff() < 1e-14);
}
