#include "qtraj/fock.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace qtraj {

namespace {
void require_dim(int dim) {
  if (dim < 2) {
    throw ShapeError("Fock truncation dimension must be >= 2, got " +
                     std::to_string(dim));
  }
}
}  // namespace

ComplexMatrix make_annihilation(int dim) {
  require_dim(dim);
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

ComplexMatrix make_creation(int dim) {
  return make_annihilation(dim).adjoint();
}

ComplexMatrix make_number(int dim) {
  require_dim(dim);
  ComplexMatrix n = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

ComplexMatrix make_position(int dim) {
  const ComplexMatrix a = make_annihilation(dim);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

ComplexMatrix make_momentum(int dim) {
  const ComplexMatrix a = make_annihilation(dim);
  return (a - a.adjoint()) / (imag_unit * std::sqrt(2.0));
}

Complex expectation(const ComplexMatrix& op, const ComplexVector& psi) {
  if (op.rows() != op.cols() || op.cols() != psi.size()) {
    throw ShapeError("operator is " + std::to_string(op.rows()) + "x" +
                     std::to_string(op.cols()) + " but state has dim " +
                     std::to_string(psi.size()));
  }
  return psi.dot(op * psi);
}

Complex mean_annihilation(const ComplexVector& psi) {
  Complex acc{0.0, 0.0};
  for (int n = 1; n < psi.size(); ++n) {
    acc += std::conj(psi(n - 1)) * psi(n) * std::sqrt(static_cast<double>(n));
  }
  return acc;
}

double mean_number(const ComplexVector& psi) {
  double acc = 0.0;
  for (int n = 1; n < psi.size(); ++n) {
    acc += static_cast<double>(n) * std::norm(psi(n));
  }
  return acc;
}

ComplexVector normalize(ComplexVector psi) {
  const double n = psi.norm();
  if (!(n > 1e-150) || !std::isfinite(n)) {
    throw DegenerateStateError("cannot normalize a zero-norm state");
  }
  psi /= n;
  return psi;
}

double tail_mass(const ComplexVector& psi) {
  const int dim = static_cast<int>(psi.size());
  const int tail = std::max(1, dim / 10);
  return psi.tail(tail).squaredNorm();
}

ComplexVector coherent_state(Complex alpha, int dim, Diagnostics* diag) {
  require_dim(dim);
  ComplexVector psi(dim);
  // c_n = e^{-|a|^2/2} alpha^n / sqrt(n!) built up recursively.
  Complex c = std::exp(-0.5 * std::norm(alpha));
  psi(0) = c;
  for (int n = 1; n < dim; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    psi(n) = c;
  }
  const double kept = psi.squaredNorm();
  warn_if(diag, 1.0 - kept > 1e-8,
          "coherent_state truncation tail " + std::to_string(1.0 - kept) +
              " at dim " + std::to_string(dim));
  return normalize(std::move(psi));
}

ComplexMatrix displacement_operator(Complex alpha, int dim) {
  require_dim(dim);
  const ComplexMatrix a = make_annihilation(dim);
  const ComplexMatrix gen =
      alpha * a.adjoint() - std::conj(alpha) * a;  // anti-Hermitian
  return gen.exp();
}

ComplexVector random_state(int dim, NoiseStream& stream) {
  require_dim(dim);
  ComplexVector psi(dim);
  for (int n = 0; n < dim; ++n) {
    const auto [re, im] = stream.normal_pair();
    psi(n) = Complex{re, im};
  }
  return normalize(std::move(psi));
}

}  // namespace qtraj
