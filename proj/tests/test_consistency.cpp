#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kacz/consistency.hpp"
#include "kacz/errors.hpp"
#include "kacz/linalg.hpp"
#include "kacz/matrix.hpp"
#include "kacz/reflect.hpp"
#include "kacz/rng.hpp"
#include "kacz/solvers.hpp"

using namespace kacz;

namespace {

Matrix random_matrix(Rng& rng, std::size_t m, std::size_t n) {
  Matrix a(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  return a;
}

Vector random_vector(Rng& rng, std::size_t n) {
  Vector v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = rng.normal();
  return v;
}

// Rank-3 5x4 system whose extra rows are a perpendicular pair inside the row
// space: even row excess but mismatched eigenvalue-1 eigenspaces.
Matrix perp_pair_5x4() {
  Matrix a(5, 4);
  a(0, 0) = 1;
  a(1, 1) = 1;
  a(2, 2) = 1;
  double s = 1.0 / std::sqrt(2.0);
  a(3, 0) = s;
  a(3, 1) = s;
  a(4, 0) = s;
  a(4, 1) = -s;
  return a;
}

// 4x4 of rank 3: three identity rows plus a random combination (odd excess).
Matrix odd_excess_4x4(Rng& rng) {
  Matrix a(4, 4);
  Vector lam = random_vector(rng, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    a(j, j) = 1;
    a(3, j) = lam[j];
  }
  return a;
}

double rowspace_residual(const Matrix& a, const Vector& row) {
  Vector coeffs = min_norm_least_squares(transpose(a), row);
  return norm(transpose(a) * coeffs - row);
}

}  // namespace

TEST_CASE("augment_combination duplicates a row for lambda = e1") {
  Rng rng(80);
  Matrix a = random_matrix(rng, 4, 3);
  Vector b = random_vector(rng, 4);
  Matrix lambdas(1, 4);
  lambdas(0, 0) = 1.0;
  AugmentedSystem aug = augment_combination(a, b, lambdas);
  CHECK(aug.added_rows == 1);
  CHECK(aug.a_aug.rows() == 5);
  for (std::size_t j = 0; j < 3; ++j) CHECK(aug.a_aug(4, j) == a(0, j));
  CHECK(aug.b_aug[4] == b[0]);
  REQUIRE(aug.combinators.has_value());
  CHECK(aug.combinators->rows() == 1);
}

TEST_CASE("augment_combination preserves solutions and the row space") {
  Rng rng(81);
  Matrix a = random_matrix(rng, 4, 4);
  Vector x_star = random_vector(rng, 4);
  Vector b = a * x_star;
  Matrix lambdas(2, 4);
  lambdas(0, 0) = 1.0;
  lambdas(0, 1) = 1.0;
  lambdas(1, 0) = -2.0;
  lambdas(1, 2) = 0.5;
  lambdas(1, 3) = 1.5;
  AugmentedSystem aug = augment_combination(a, b, lambdas);
  REQUIRE(aug.added_rows == 2);
  CHECK(aug.a_aug(4, 0) == doctest::Approx(a(0, 0) + a(1, 0)).epsilon(1e-15));
  CHECK(aug.b_aug[4] == doctest::Approx(b[0] + b[1]).epsilon(1e-15));
  CHECK(norm(aug.a_aug * x_star - aug.b_aug) <= 1e-9 * norm(aug.b_aug));
  for (std::size_t i = 4; i < 6; ++i) {
    CHECK(rowspace_residual(a, aug.a_aug.row_copy(i)) <= 1e-9);
  }
}

TEST_CASE("augment_combination rejects vanishing combinations") {
  Matrix a(2, 3);
  a(0, 0) = 1;
  a(0, 2) = 2;
  a(1, 0) = 1;
  a(1, 2) = 2;  // duplicate row
  Vector b{1, 1};
  Matrix lambdas(1, 2);
  lambdas(0, 0) = 1.0;
  lambdas(0, 1) = -1.0;
  CHECK_THROWS_AS(augment_combination(a, b, lambdas), ZeroRow);
}

TEST_CASE("skew_p is exactly skew-symmetric and matches the W form") {
  Rng rng(82);
  Matrix v = random_matrix(rng, 4, 6);
  Matrix c = random_matrix(rng, 3, 4);
  Matrix p = skew_p(v, c);
  REQUIRE(p.rows() == 3);
  REQUIRE(p.cols() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(p(i, i) == 0.0);
    for (std::size_t j = 0; j < 3; ++j) CHECK(p(i, j) == -p(j, i));
  }
  Matrix w = gram_lower_triangular(v);
  for (std::size_t i = 1; i < 3; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double expect = dot(c.row_copy(i), w * c.row_copy(j));
      CHECK(p(i, j) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("skew_p determinant vanishes for odd block sizes") {
  Matrix v1(2, 3);
  v1(0, 0) = 1;
  v1(1, 1) = 1;
  Matrix c1(1, 2);
  c1(0, 0) = 3.0;
  c1(0, 1) = -1.0;
  Matrix p1 = skew_p(v1, c1);
  CHECK(p1(0, 0) == 0.0);
  CHECK(determinant(p1) == 0.0);

  Rng rng(83);
  for (std::size_t l : {1u, 3u, 5u}) {
    Matrix v = random_matrix(rng, 5, 7);
    for (std::size_t i = 0; i < 5; ++i) {
      double r = norm(v.row_copy(i));
      for (std::size_t j = 0; j < 7; ++j) v(i, j) /= r;
    }
    Matrix c = random_matrix(rng, l, 5);
    CHECK(std::abs(determinant(skew_p(v, c))) <= 1e-10);
  }
}

TEST_CASE("skew_p determinant is generically nonzero for even sizes") {
  Rng rng(84);
  Matrix v = random_matrix(rng, 4, 6);
  int nonzero = 0;
  for (int t = 0; t < 100; ++t) {
    Matrix c = random_matrix(rng, 2, 4);
    if (std::abs(determinant(skew_p(v, c))) > 1e-12) ++nonzero;
  }
  CHECK(nonzero == 100);
}

TEST_CASE("skew_p rejects rank-deficient V") {
  Matrix v(2, 3);
  v(0, 0) = 1;
  v(1, 0) = 2;  // dependent rows
  Matrix c(2, 2);
  c(0, 0) = 1;
  c(1, 1) = 1;
  CHECK_THROWS_AS(skew_p(v, c), RankDeficient);
}

TEST_CASE("eigen1_multiplicity counts fixed directions") {
  CHECK(eigen1_multiplicity(Matrix::identity(4)) == 0);
  Rng rng(85);
  Matrix wide = random_matrix(rng, 3, 5);
  CHECK(eigen1_multiplicity(wide) == 2);
  // Duplicated-row square system: odd excess forces an extra fixed direction.
  Matrix b3 = random_matrix(rng, 3, 3);
  Matrix dup(4, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) dup(i, j) = b3(i, j);
  }
  for (std::size_t j = 0; j < 3; ++j) dup(3, j) = b3(0, j);
  CHECK(eigen1_multiplicity(dup) > 0);  // dim ker = 0
}

TEST_CASE("is_reflection_consistent on invertible and full-row-rank inputs") {
  Rng rng(86);
  CHECK(is_reflection_consistent(random_matrix(rng, 5, 5)));
  CHECK(is_reflection_consistent(random_matrix(rng, 4, 6)));
}

TEST_CASE("doubled square systems are not reflection consistent") {
  Rng rng(87);
  Matrix b3 = random_matrix(rng, 3, 3);
  Matrix doubled(6, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      doubled(i, j) = b3(i, j);
      doubled(i + 3, j) = b3(i, j);
    }
  }
  CHECK_FALSE(is_reflection_consistent(doubled));
}

TEST_CASE("make_reflection_consistent leaves good systems unchanged") {
  Rng rng(88);
  Matrix a = random_matrix(rng, 4, 6);
  Vector b = a * random_vector(rng, 6);
  AugmentedSystem aug = make_reflection_consistent(a, b, 1, 5);
  CHECK(aug.added_rows == 0);
  CHECK(aug.a_aug.rows() == 4);
  CHECK_FALSE(aug.combinators.has_value());
}

TEST_CASE("make_reflection_consistent repairs an even-excess mismatch with 2 rows") {
  Matrix a = perp_pair_5x4();
  Rng rng(89);
  Vector x_star = random_vector(rng, 4);
  Vector b = a * x_star;
  REQUIRE_FALSE(is_reflection_consistent(a));
  AugmentedSystem aug = make_reflection_consistent(a, b, 17, 10);
  CHECK(aug.added_rows == 2);
  CHECK(is_reflection_consistent(aug.a_aug));
  CHECK(norm(aug.a_aug * x_star - aug.b_aug) <= 1e-9 * std::max(1.0, norm(b)));
}

TEST_CASE("make_reflection_consistent repairs odd excess with 1 row") {
  Rng rng(90);
  Matrix a = odd_excess_4x4(rng);
  Vector x_star = random_vector(rng, 4);
  Vector b = a * x_star;
  AugmentedSystem aug = make_reflection_consistent(a, b, 23, 10);
  CHECK(aug.added_rows == 1);
  CHECK(is_reflection_consistent(aug.a_aug));
  CHECK(norm(aug.a_aug * x_star - aug.b_aug) <= 1e-9 * std::max(1.0, norm(b)));
}

TEST_CASE("tikhonov_stack shape and smallest singular value") {
  Rng rng(91);
  Matrix a = random_matrix(rng, 3, 2);
  Vector b = random_vector(rng, 3);
  auto [stacked, padded] = tikhonov_stack(a, b, 1.0);
  REQUIRE(stacked.rows() == 5);
  REQUIRE(stacked.cols() == 2);
  REQUIRE(padded.dim() == 5);
  CHECK(padded[3] == 0.0);
  CHECK(padded[4] == 0.0);
  Vector sv = singular_values(stacked);
  CHECK(sv[sv.dim() - 1] >= 1.0);
  for (double mu : {0.5, 2.0}) {
    auto [s2, p2] = tikhonov_stack(random_matrix(rng, 4, 3), random_vector(rng, 4), mu);
    Vector sv2 = singular_values(s2);
    CHECK(sv2[sv2.dim() - 1] >= mu);
  }
  CHECK_THROWS_AS(tikhonov_stack(a, b, 0.0), NonPositiveMu);
  CHECK_THROWS_AS(tikhonov_stack(a, b, -1.0), NonPositiveMu);
}

TEST_CASE("tikhonov ridge solution collapses to zero for large mu") {
  Rng rng(92);
  Matrix a = random_matrix(rng, 4, 4);
  Vector b = random_vector(rng, 4);
  double mu = 1e6;
  auto [stacked, padded] = tikhonov_stack(a, b, mu);
  Vector ridge = min_norm_least_squares(stacked, padded);
  double a_norm = singular_values(a)[0];
  CHECK(norm(ridge) <= 1e-4 * norm(b) * a_norm / mu);
}

TEST_CASE("tikhonov ridge solution approaches the exact solution for small mu") {
  Rng rng(93);
  Matrix a = random_matrix(rng, 4, 4);
  Vector x_star = random_vector(rng, 4);
  Vector b = a * x_star;
  CHECK(norm(solve_direct(a, b) - x_star) <= 1e-10 * norm(x_star));
  for (double mu : {1e-2, 1e-3}) {
    auto [stacked, padded] = tikhonov_stack(a, b, mu);
    Vector ridge = min_norm_least_squares(stacked, padded);
    CHECK(norm(ridge - x_star) <= mu * norm(x_star));
  }
}

TEST_CASE("normal_like_solution inverts square systems") {
  Rng rng(94);
  Matrix a = random_matrix(rng, 5, 5);
  Vector b = random_vector(rng, 5);
  Vector direct = solve_direct(a, b);
  Vector nl = normal_like_solution(a, b);
  CHECK(norm(nl - direct) <= 1e-8 * norm(direct));
}

TEST_CASE("normal_like_solution solves consistent overdetermined systems") {
  Rng rng(95);
  Matrix a = random_matrix(rng, 6, 4);
  Vector x_star = random_vector(rng, 4);
  Vector b = a * x_star;
  Vector nl = normal_like_solution(a, b);
  CHECK(norm(nl - x_star) <= 1e-8 * norm(x_star));
  // Unique solution: agrees with least squares and with the reflective limit.
  Vector ls = min_norm_least_squares(a, b);
  CHECK(norm(nl - ls) <= 1e-8 * norm(ls));
  SolverConfig cfg;
  cfg.variant = Variant::reflective_outer;
  cfg.epsilon = 1e-6;
  cfg.max_sweeps = 2000000;
  auto [result, trace] = solve(a, b, cfg);
  REQUIRE(result.stop_reason == StopReason::target_met);
  CHECK(norm(result.solution - nl) <= 1e-3 * norm(nl));
}

TEST_CASE("normal_like_solution rejects rank- and parity-degenerate inputs") {
  Rng rng(96);
  Matrix a(6, 4);
  for (std::size_t i = 0; i < 6; ++i) {
    double r0 = rng.normal(), r1 = rng.normal(), r3 = rng.normal();
    a(i, 0) = r0;
    a(i, 1) = r1;
    a(i, 2) = r0 + r1;  // dependent column
    a(i, 3) = r3;
  }
  CHECK_THROWS_AS(normal_like_solution(a, random_vector(rng, 6)), RankDeficient);
  // Odd row excess forces eigenvalue 1, so I - R is singular.
  Matrix tall = random_matrix(rng, 30, 5);
  CHECK_THROWS_AS(normal_like_solution(tall, random_vector(rng, 30)), SingularSystem);
}

TEST_CASE("normal-like gap on inconsistent systems is within ls_gap_bound") {
  Rng rng(97);
  Matrix a = random_matrix(rng, 31, 5);
  Vector b = random_vector(rng, 31);
  Vector nl = normal_like_solution(a, b);
  Vector ls = min_norm_least_squares(a, b);
  CHECK(norm(nl - ls) <= ls_gap_bound(a, b));
}

TEST_CASE("ls_gap_bound vanishes on consistent systems") {
  Rng rng(98);
  Matrix a = random_matrix(rng, 7, 3);
  Vector x_star = random_vector(rng, 3);
  Vector b = a * x_star;
  CHECK(ls_gap_bound(a, b) <= 1e-8 * norm(x_star));
}

TEST_CASE("ls_gap_bound covers a contradictory-row system softened by Tikhonov") {
  Rng rng(99);
  Matrix g = random_matrix(rng, 3, 3);
  Vector b{1, 2, 3};
  Matrix a(4, 3);
  Vector bb(4);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = g(i, j);
    bb[i] = b[i];
  }
  for (std::size_t j = 0; j < 3; ++j) a(3, j) = g(0, j);
  bb[3] = b[0] + 1.0;  // contradicts row 0
  auto [stacked, padded] = tikhonov_stack(a, bb, 0.5);
  Vector nl = normal_like_solution(stacked, padded);
  Vector ls = min_norm_least_squares(stacked, padded);
  double bound = ls_gap_bound(stacked, padded);
  CHECK(bound > 0.0);
  CHECK(norm(nl - ls) <= bound);
}

TEST_CASE("I minus R is invertible for full-column-rank consistent inputs") {
  Rng rng(100);
  Matrix a = random_matrix(rng, 6, 4);
  REQUIRE(is_reflection_consistent(a));
  Matrix r = composite_reflection(a);
  Matrix i_minus_r = Matrix::identity(4) - r;
  Vector sv = singular_values(i_minus_r);
  CHECK(sv[sv.dim() - 1] > 1e-8);
}
