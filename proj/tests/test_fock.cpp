#include <doctest.h>

#include <cmath>

#include "qtraj/errors.hpp"
#include "qtraj/fock.hpp"

using namespace qtraj;

TEST_CASE("annihilation operator entries") {
  const ComplexMatrix a3 = make_annihilation(3);
  CHECK(a3(0, 1) == Complex{1.0, 0.0});
  CHECK(a3(1, 2) == Complex{std::sqrt(2.0), 0.0});
  CHECK(a3.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));

  const ComplexMatrix a2 = make_annihilation(2);
  CHECK(a2(0, 0) == Complex{0.0, 0.0});
  CHECK(a2(0, 1) == Complex{1.0, 0.0});
  CHECK(a2(1, 0) == Complex{0.0, 0.0});
  CHECK(a2(1, 1) == Complex{0.0, 0.0});
}

TEST_CASE("number operator diagonal via a^dag a") {
  const int dim = 30;
  const ComplexMatrix a = make_annihilation(dim);
  const ComplexMatrix n = a.adjoint() * a;
  for (int k = 0; k < dim; ++k) {
    ComplexVector fock = ComplexVector::Zero(dim);
    fock(k) = 1.0;
    CHECK(expectation(n, fock).real() == doctest::Approx(k).epsilon(1e-12));
  }
}

TEST_CASE("creation is bitwise the conjugate transpose of annihilation") {
  const int dim = 17;
  const ComplexMatrix a = make_annihilation(dim);
  const ComplexMatrix adag = make_creation(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      CHECK(adag(i, j).real() == a(j, i).real());
      CHECK(adag(i, j).imag() == -a(j, i).imag());
    }
  }
}

TEST_CASE("commutator [a, a_dag] is 1 below the truncation edge") {
  const int dim = 12;
  const ComplexMatrix a = make_annihilation(dim);
  const ComplexMatrix comm = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n < dim - 1; ++n) {
    ComplexVector fock = ComplexVector::Zero(dim);
    fock(n) = 1.0;
    CHECK(expectation(comm, fock).real() ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("invalid dimension rejected") {
  CHECK_THROWS_AS(make_annihilation(1), ShapeError);
  CHECK_THROWS_AS(coherent_state({0.0, 0.0}, 0), ShapeError);
}

TEST_CASE("expectation dimension mismatch rejected") {
  const ComplexMatrix a = make_annihilation(4);
  ComplexVector psi = ComplexVector::Zero(5);
  psi(0) = 1.0;
  CHECK_THROWS_AS(expectation(a, psi), ShapeError);
}

TEST_CASE("expectation basics") {
  const int dim = 8;
  const ComplexMatrix a = make_annihilation(dim);
  ComplexVector one = ComplexVector::Zero(dim);
  one(1) = 1.0;
  CHECK(expectation(a.adjoint() * a, one).real() == doctest::Approx(1.0));
  ComplexVector vac = ComplexVector::Zero(dim);
  vac(0) = 1.0;
  CHECK(std::abs(expectation(a, vac)) == doctest::Approx(0.0));
}

TEST_CASE("expectation is conjugate-symmetric for random operators") {
  const int dim = 9;
  NoiseStream stream(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix op(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        auto [re, im] = stream.normal_pair();
        op(i, j) = Complex{re, im};
      }
    }
    const ComplexVector psi = random_state(dim, stream);
    const Complex forward = expectation(op, psi);
    const Complex adjoint = expectation(op.adjoint().eval(), psi);
    CHECK(std::abs(adjoint - std::conj(forward)) < 1e-12);
  }
}

TEST_CASE("coherent state: alpha = 0 is the vacuum") {
  const ComplexVector psi = coherent_state({0.0, 0.0}, 10);
  CHECK(psi(0) == Complex{1.0, 0.0});
  CHECK(psi.tail(9).norm() == 0.0);
}

TEST_CASE("coherent state is an eigenstate of a") {
  const ComplexVector psi = coherent_state({1.0, 0.0}, 30);
  CHECK(std::abs(mean_annihilation(psi) - Complex{1.0, 0.0}) < 1e-6);
  // width <a^dag a> - |<a>|^2 vanishes for coherent states
  CHECK(mean_number(psi) - std::norm(mean_annihilation(psi)) < 1e-8);

  const ComplexVector half = coherent_state({0.5, 0.0}, 30);
  CHECK(std::abs(mean_annihilation(half) - Complex{0.5, 0.0}) < 1e-8);
}

TEST_CASE("coherent state truncation warning") {
  Diagnostics diag;
  coherent_state({1.0, 0.0}, 30, &diag);
  CHECK(diag.empty());
  coherent_state({3.0, 0.0}, 10, &diag);  // heavy tail at dim 10
  CHECK(!diag.empty());
}

TEST_CASE("displacement operator: D(0) = identity") {
  const ComplexMatrix d = displacement_operator({0.0, 0.0}, 12);
  CHECK((d - ComplexMatrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("displacement operator unitary on the low-lying block") {
  const int dim = 24;
  const Complex alpha{0.9, -0.4};
  const ComplexMatrix d = displacement_operator(alpha, dim);
  const ComplexMatrix should_be_identity = d.adjoint() * d;
  const int safe = dim - static_cast<int>(std::ceil(4.0 * std::abs(alpha)));
  const ComplexMatrix block =
      should_be_identity.topLeftCorner(safe, safe) -
      ComplexMatrix::Identity(safe, safe);
  CHECK(block.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("displaced vacuum equals the coherent state") {
  const int dim = 40;
  const Complex alpha{1.0, 0.0};
  ComplexVector vac = ComplexVector::Zero(dim);
  vac(0) = 1.0;
  const ComplexVector displaced = displacement_operator(alpha, dim) * vac;
  const ComplexVector coherent = coherent_state(alpha, dim);
  CHECK((displaced - coherent).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("normalize") {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = 2.0;
  CHECK(normalize(psi)(0) == Complex{1.0, 0.0});

  ComplexVector pair(2);
  pair << Complex{3.0, 0.0}, Complex{3.0, 0.0};
  const ComplexVector n = normalize(pair);
  CHECK(n(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(n(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));

  NoiseStream stream(3, 0);
  const ComplexVector already = random_state(6, stream);
  CHECK((normalize(already) - already).norm() < 1e-12);

  CHECK_THROWS_AS(normalize(ComplexVector::Zero(4)), DegenerateStateError);
}

TEST_CASE("tail mass") {
  ComplexVector psi = ComplexVector::Zero(20);
  psi(0) = 1.0;
  CHECK(tail_mass(psi) == 0.0);
  psi(19) = 1.0;
  CHECK(tail_mass(normalize(psi)) == doctest::Approx(0.5));
}
