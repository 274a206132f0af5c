#pragma once

#include "qtraj/errors.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/types.hpp"

namespace qtraj {

/// Truncated-Fock-space building blocks: ladder operators, coherent
/// states, displacement operators, expectation values. All dense; the
/// basis is |0> .. |dim-1>.

/// Annihilation operator a with a[n-1, n] = sqrt(n).
ComplexMatrix make_annihilation(int dim);

/// Creation operator, exactly the conjugate transpose of make_annihilation.
ComplexMatrix make_creation(int dim);

/// Number operator a^dag a (diagonal 0..dim-1).
ComplexMatrix make_number(int dim);

/// Position and momentum quadratures q = (a + a^dag)/sqrt(2),
/// p = (a - a^dag)/(i sqrt(2)), so that [q, p] = i on the low block.
ComplexMatrix make_position(int dim);
ComplexMatrix make_momentum(int dim);

/// <psi| op |psi>. Throws ShapeError on dimension mismatch.
Complex expectation(const ComplexMatrix& op, const ComplexVector& psi);

/// <a> without building the matrix: sum conj(c_n) c_{n+1} sqrt(n+1).
Complex mean_annihilation(const ComplexVector& psi);

/// <a^dag a> without building the matrix: sum n |c_n|^2.
double mean_number(const ComplexVector& psi);

/// Rescales to unit norm. Throws DegenerateStateError when the input norm
/// is numerically zero (a jump applied to an annihilated component).
ComplexVector normalize(ComplexVector psi);

/// Probability mass in the top 10% of basis states; the truncation-failure
/// indicator reported by the steppers.
double tail_mass(const ComplexVector& psi);

/// Coherent state |alpha>: amplitudes e^{-|a|^2/2} alpha^n / sqrt(n!),
/// renormalized after truncation. Warns through `diag` when the discarded
/// tail exceeds 1e-8.
ComplexVector coherent_state(Complex alpha, int dim, Diagnostics* diag = nullptr);

/// Displacement operator D(alpha) = exp(alpha a^dag - alpha^* a),
/// unitary up to truncation error.
ComplexMatrix displacement_operator(Complex alpha, int dim);

/// Haar-ish random pure state: i.i.d. complex normal amplitudes from the
/// given stream, normalized.
ComplexVector random_state(int dim, NoiseStream& stream);

}  // namespace qtraj
