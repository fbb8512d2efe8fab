#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "mannctl/matrix.hpp"

namespace mannctl {

// LU solve with partial pivoting; rhs may have multiple columns.
// Throws SingularSystem on a vanishing pivot.
Matrix solve_linear(Matrix a, Matrix rhs);

// Eigenvalues of a (small) real square matrix via the characteristic
// polynomial (Faddeev-LeVerrier) and Durand-Kerner root iteration. Intended
// for n <= 4 stability checks, not a general-purpose eigensolver.
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

double max_real_eigenvalue(const Matrix& a);
bool is_hurwitz(const Matrix& a, double margin = 1e-9);

struct SymEig {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column i pairs with values[i]
};

// Cyclic Jacobi on (M + M^T)/2. Throws NotSymmetric when the input is not
// symmetric to 1e-9 relative tolerance.
SymEig sym_eig(const Matrix& m);
std::vector<double> sym_eigvals(const Matrix& m);

bool is_stabilizable(const Matrix& a, const Matrix& b);

// Solves A_ref^T P + P A_ref = -Q for Hurwitz A_ref and symmetric PD Q by
// Kronecker vectorization with one step of iterative refinement. The result
// is symmetrized.
Matrix solve_lyapunov(const Matrix& a_ref, const Matrix& q);

// Solves A^T P + P A - P B R^{-1} B^T P + Q = 0 (stabilizing solution) by
// Newton-Kleinman iteration; the initial stabilizing gain comes from a
// Bass-style eigenvalue shift unless supplied.
Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                  const std::optional<Matrix>& k0 = std::nullopt);

// K = R^{-1} B^T P.
Matrix lqr_gain(const Matrix& p, const Matrix& b, const Matrix& r);

}  // namespace mannctl
