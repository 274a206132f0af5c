#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qtraj {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

constexpr Complex imag_unit{0.0, 1.0};

}  // namespace qtraj
