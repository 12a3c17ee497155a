#pragma once

#include <cstddef>
#include <vector>

#include "kacz/matrix.hpp"

namespace kacz {

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, same order as values
};

// Row-pivoted elimination. Throws SingularMatrix when a pivot falls below
// n * eps * max|A_ij|.
Vector solve_direct(const Matrix& a, const Vector& b);

// Pivoted elimination with sign tracking; returns 0 on a vanishing pivot.
double determinant(const Matrix& a);

// Unique minimizer of ||x|| among minimizers of ||Ax - b|| (pseudoinverse
// action), via one-sided Jacobi SVD with rank tolerance max(m,n)*eps*sigma_max.
Vector min_norm_least_squares(const Matrix& a, const Vector& b);

// Cyclic Jacobi rotations. Precondition ||S - S^T||_F <= 1e-10 ||S||_F,
// otherwise NotSymmetric.
EigenDecomposition symmetric_eigen(const Matrix& s);

// Square roots of the eigenvalues of the smaller Gram matrix, clamped at 0,
// sorted descending; min(m,n) values.
Vector singular_values(const Matrix& a);

// sigma_max / sigma_min; RankDeficient when sigma_min <= max(m,n)*eps*sigma_max.
double condition_number(const Matrix& a);

// Solves L y = b for lower-triangular L (forward substitution).
Vector forward_substitution(const Matrix& lower, const Vector& b);

// Column-wise forward substitution: solves L Y = B.
Matrix forward_substitution_multi(const Matrix& lower, const Matrix& b);

// Thin SVD helpers used by min_norm_least_squares and tests.
struct Svd {
  Matrix u;              // m x k orthonormal columns, k = min(m,n)
  std::vector<double> sigma;  // descending, length k
  Matrix v;              // n x k orthonormal columns
};
Svd jacobi_svd(const Matrix& a);

// Indices of a maximal linearly independent row subset, chosen by pivoted
// Gram-Schmidt with tolerance max(m,n)*eps*max_row_norm.
std::vector<std::size_t> select_independent_rows(const Matrix& a);

}  // namespace kacz
