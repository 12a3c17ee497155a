#pragma once

#include <cstddef>

#include "kacz/matrix.hpp"

namespace kacz {

// Composite reflection R_A (n x n) together with the lower-triangular W with
// W + W^T = 2 A A^T. W strictly respects lower-triangular sparsity.
struct ReflectionFactorization {
  Matrix r_a;
  Matrix w;
  std::size_t source_rows;
  std::size_t source_cols;
};

// v - 2 (a.v / ||a||^2) a. ZeroRow when ||a|| <= eps * dim.
Vector reflect(const Vector& v, const Vector& a);

// x + alpha (b_i - a.x)/||a||^2 a, alpha in (0, 2].
Vector kaczmarz_step(const Vector& x, const Vector& a, double b_i, double alpha);

// One cyclic pass over the rows, row 1 first.
Vector sweep(const Vector& x, const Matrix& a, const Vector& b, double alpha = 2.0);

// R_A = R_m ... R_1, built by applying rank-1 reflections column-by-column.
Matrix composite_reflection(const Matrix& a);

// W_ii = ||A_i||^2, W_ij = 2 (A A^T)_ij for i > j, zero above the diagonal.
Matrix gram_lower_triangular(const Matrix& a);

// R_A = I - 2 A^T W^-1 A with W^-1 applied by forward substitution.
ReflectionFactorization brady_watt_reflection(const Matrix& a);

// n x m matrix with column j = (2/||A_j||^2) R_m...R_{j+1} A_j; F A = I - R_A.
Matrix f_matrix(const Matrix& a);

// u = F b, computed by the sweep recursion and cross-checked against F b.
Vector u_vector(const Matrix& a, const Vector& b);

}  // namespace kacz
