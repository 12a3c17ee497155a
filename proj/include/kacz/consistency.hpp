#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "kacz/matrix.hpp"

namespace kacz {

struct AugmentedSystem {
  Matrix a_aug;
  Vector b_aug;
  std::size_t added_rows = 0;
  // Rows are the lambda-coefficient vectors used; absent when nothing was added.
  std::optional<Matrix> combinators;
};

// Stacks rows lambda^T A with entries lambda^T b below (A, b). ZeroRow when a
// combination vanishes.
AugmentedSystem augment_combination(const Matrix& a, const Vector& b,
                                    const Matrix& lambdas);

// Skew-symmetric P with P_ij = c_i^T W c_j for i > j, W the lower-triangular
// Gram factor of V. RankDeficient when the rows of V are dependent.
Matrix skew_p(const Matrix& v, const Matrix& c);

// Multiplicity of eigenvalue 1 of the composite reflection of A.
std::size_t eigen1_multiplicity(const Matrix& a);

// True iff the eigenvalue-1 multiplicity and eigenspace of R_A agree with
// those of a maximal independent row subset (principal angles <= 1e-7).
bool is_reflection_consistent(const Matrix& a);

// Appends 1 or 2 random-combination rows (making the row excess even) until
// the reflection-consistency test passes; ExhaustedTries after max_tries.
// The system must be consistent (caller's responsibility).
AugmentedSystem make_reflection_consistent(const Matrix& a, const Vector& b,
                                           std::uint64_t seed,
                                           std::size_t max_tries);

// ((A; mu I), (b; 0)); the stack has full column rank for any A.
std::pair<Matrix, Vector> tikhonov_stack(const Matrix& a, const Vector& b,
                                         double mu);

// Solves (I - R_A) x = u, cross-checked against the W-weighted path
// (A^T W^-1 A)^-1 A^T W^-1 b to 1e-8 relative.
Vector normal_like_solution(const Matrix& a, const Vector& b);

// kappa_A^2 * kappa_W * ||b - A x_LS||.
double ls_gap_bound(const Matrix& a, const Vector& b);

}  // namespace kacz
