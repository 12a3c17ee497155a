#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "kacz/errors.hpp"
#include "kacz/geometry.hpp"
#include "kacz/linalg.hpp"
#include "kacz/matrix.hpp"
#include "kacz/reflect.hpp"
#include "kacz/rng.hpp"
#include "kacz/solvers.hpp"
#include "kacz/spectral.hpp"

using namespace kacz;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

Trace full_trace_run(const Matrix& a, const Vector& b, const Vector& x0,
                     std::size_t sweeps) {
  SolverConfig cfg;
  cfg.variant = Variant::reflective_outer;
  cfg.max_sweeps = sweeps;
  cfg.epsilon = 1e-300;
  cfg.trace_mode = TraceMode::full;
  cfg.check_every = 1u << 30;
  return solve(a, b, x0, cfg).second;
}

}  // namespace

TEST_CASE("empirical_center basics") {
  Vector p{1, 2, 3};
  std::vector<Vector> one{p};
  Vector c = empirical_center(one);
  for (std::size_t j = 0; j < 3; ++j) CHECK(c[j] == p[j]);

  Vector center{2, -1};
  Vector d{0.5, 4};
  std::vector<Vector> pair{center + d, center - d};
  Vector mid = empirical_center(pair);
  CHECK(norm(mid - center) <= 1e-15);

  CHECK_THROWS_AS(empirical_center(std::vector<Vector>{}), Empty);
}

TEST_CASE("S0 of an identity run collapses to the start point") {
  std::size_t n = 4;
  Matrix a = Matrix::identity(n);
  Rng rng(110);
  Vector x_star = random_vector(rng, n);
  Vector x0 = random_vector(rng, n);
  Trace trace = full_trace_run(a, x_star, x0, 12);
  std::vector<Vector> s0 = subset_trace(trace, n, 0, 0);
  REQUIRE(s0.size() >= 2);
  Vector c = empirical_center(s0);
  CHECK(norm(c - x0) <= 1e-12 * std::max(1.0, norm(x0)));
  CHECK(affine_dimension(s0, 1e-9) == 0);
}

TEST_CASE("sphere_deviation degenerate and perturbed cases") {
  Vector p{1, 1};
  std::vector<Vector> same{p, p, p};
  SphereFit fit = sphere_deviation(same, Vector{5, 5});
  CHECK(fit.max_deviation == 0.0);
  CHECK(fit.radius == doctest::Approx(std::sqrt(32.0)).epsilon(1e-14));

  // Perturbing one point of a circle by delta moves the worst deviation by
  // at least delta/2.
  double delta = 0.125;
  std::vector<Vector> circle;
  for (int k = 0; k < 8; ++k) {
    double t = 2.0 * kPi * k / 8;
    circle.push_back(Vector{std::cos(t), std::sin(t)});
  }
  circle[3] = (1.0 + delta) * circle[3];
  SphereFit bumped = sphere_deviation(circle, Vector{0, 0});
  CHECK(bumped.max_deviation >= delta / 2);

  // max_deviation recomputable from the inputs.
  double worst = 0.0;
  for (const Vector& q : circle) {
    worst = std::max(worst, std::abs(norm(q) - bumped.radius));
  }
  CHECK(std::abs(worst - bumped.max_deviation) <= 1e-12);

  CHECK_THROWS_AS(sphere_deviation(std::vector<Vector>{p}, p), Empty);
}

TEST_CASE("consistent-run trace lies on a sphere around the min-distance solution") {
  Rng rng(111);
  Matrix a = random_matrix(rng, 3, 5);
  Vector b = a * random_vector(rng, 5);
  Vector x0 = random_vector(rng, 5);
  Trace trace = full_trace_run(a, b, x0, 40);
  Vector x_md = min_distance_solution(a, b, x0);
  SphereFit fit = sphere_deviation(trace.iterates, x_md);
  CHECK(fit.max_deviation <= 1e-9 * fit.radius);
}

TEST_CASE("predicted centers mirror around the solution for every k") {
  Rng rng(112);
  for (std::size_t n : {3u, 4u, 5u}) {
    Matrix a = random_matrix(rng, n, n);
    Vector x_star = random_vector(rng, n);
    Vector x0 = random_vector(rng, n);
    for (std::size_t k = 0; k < n; ++k) {
      auto [c0, c1] = predicted_centers(a, x_star, x0, k);
      CHECK(norm(c0 + c1 - 2.0 * x_star) <= 1e-9 * std::max(1.0, norm(x_star)));
    }
  }
}

TEST_CASE("predicted centers equal the solution when no direction is inverted") {
  // 2x2 rotation-like composite with no eigenvalue -1.
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  a(1, 0) = std::cos(0.9);
  a(1, 1) = std::sin(0.9);
  auto report = eigenphases(composite_reflection(a));
  REQUIRE(report.mult_minus_one == 0);
  Rng rng(113);
  Vector x_star = random_vector(rng, 2);
  Vector x0 = random_vector(rng, 2);
  auto [c0, c1] = predicted_centers(a, x_star, x0, 0);
  CHECK(norm(c0 - x_star) <= 1e-12);
  CHECK(norm(c1 - x_star) <= 1e-12);
}

TEST_CASE("predicted_centers validates inputs") {
  Matrix a(2, 2);
  a(0, 0) = 1.0;  // second row zero
  Vector v{0, 0};
  CHECK_THROWS_AS(predicted_centers(a, v, v, 0), ZeroRow);
  Matrix good = Matrix::identity(2);
  CHECK_THROWS_AS(predicted_centers(good, v, v, 3), DomainError);
}

TEST_CASE("empirical subset centers match predictions at the averaging rate") {
  Rng rng(114);
  std::size_t n = 3;
  Matrix a = random_matrix(rng, n, n);
  Vector x_star = random_vector(rng, n);
  Vector b = a * x_star;
  Vector x0 = random_vector(rng, n);
  double theta = *eigenphases(composite_reflection(a)).theta_min_nonzero;
  std::size_t big_k = 2000;
  Trace trace = full_trace_run(a, b, x0, 2 * big_k);
  double d0 = norm(x0 - x_star);
  double rate = kPi * d0 / (2.0 * static_cast<double>(big_k) * theta);

  std::vector<Vector> s00 = subset_trace(trace, n, 0, 0);
  s00.erase(s00.begin() + static_cast<long>(big_k), s00.end());
  auto [c00, c01] = predicted_centers(a, x_star, x0, 0);
  CHECK(norm(empirical_center(s00) - c00) <= rate);

  // Half-sum of the two empirical centers sits at the solution.
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Vector> sk0 = subset_trace(trace, n, k, 0);
    std::vector<Vector> sk1 = subset_trace(trace, n, k, 1);
    sk0.erase(sk0.begin() + static_cast<long>(big_k), sk0.end());
    sk1.erase(sk1.begin() + static_cast<long>(big_k), sk1.end());
    Vector half = 0.5 * (empirical_center(sk0) + empirical_center(sk1));
    CHECK(norm(half - x_star) <= rate + 1e-9);
  }
}

TEST_CASE("affine_dimension on constructed point sets") {
  std::vector<Vector> collinear;
  for (int k = 0; k < 5; ++k) {
    collinear.push_back(Vector{1.0 + 2.0 * k, -3.0 * k, 0.5 * k});
  }
  CHECK(affine_dimension(collinear, 1e-9) == 1);

  std::vector<Vector> planar;
  Rng rng(115);
  for (int k = 0; k < 6; ++k) {
    double u = rng.normal(), v = rng.normal();
    planar.push_back(Vector{u, v, u + v, 2 * u - v});
  }
  CHECK(affine_dimension(planar, 1e-9) == 2);
}

TEST_CASE("S0 of a generic 3x3 run is a circle") {
  Rng rng(116);
  Matrix a = random_matrix(rng, 3, 3);
  Vector b = a * random_vector(rng, 3);
  Vector x0 = random_vector(rng, 3);
  Trace trace = full_trace_run(a, b, x0, 60);
  std::vector<Vector> s0 = subset_trace(trace, 3, 0, 0);
  CHECK(affine_dimension(s0, 1e-9) == 2);
}

TEST_CASE("odd-n orbits land on spheres of codimension at least 2") {
  // A sphere of manifold dimension n-2 spans an affine subspace of
  // dimension n-1; generic odd-n runs achieve exactly that.
  Rng rng(117);
  for (std::size_t n : {3u, 5u, 7u}) {
    Matrix a = random_matrix(rng, n, n);
    Vector b = a * random_vector(rng, n);
    Vector x0 = random_vector(rng, n);
    Trace trace = full_trace_run(a, b, x0, 4 * n);
    std::vector<Vector> s0 = subset_trace(trace, n, 0, 0);
    CHECK(affine_dimension(s0, 1e-9) <= n - 1);
  }
}

TEST_CASE("min_distance_solution endpoints") {
  Rng rng(118);
  Matrix a = random_matrix(rng, 3, 6);
  Vector b = a * random_vector(rng, 6);
  Vector zero(6);
  Vector min_norm = min_norm_least_squares(a, b);
  CHECK(norm(min_distance_solution(a, b, zero) - min_norm) <= 1e-12 * norm(min_norm));

  Vector x_sol = min_norm + Vector{0, 0, 0, 0, 0, 0};
  CHECK(norm(min_distance_solution(a, b, x_sol) - x_sol) <= 1e-9 * norm(x_sol));
}

TEST_CASE("min_distance_solution optimality on an underdetermined system") {
  Rng rng(119);
  Matrix a = random_matrix(rng, 2, 4);
  Vector b = a * random_vector(rng, 4);
  Vector x0 = random_vector(rng, 4);
  Vector x = min_distance_solution(a, b, x0);
  CHECK(norm(a * x - b) <= 1e-9 * std::max(1.0, norm(b)));
  // x - x0 is orthogonal to ker A, i.e. lies in the row space.
  Vector diff = x - x0;
  Vector coeffs = min_norm_least_squares(transpose(a), diff);
  CHECK(norm(transpose(a) * coeffs - diff) <= 1e-9 * std::max(1.0, norm(diff)));
}

TEST_CASE("min_distance_solution rejects inconsistent systems") {
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  a(1, 0) = 1.0;  // same direction twice
  Vector b{1.0, 2.0};
  Vector x0{0.0, 0.0};
  CHECK_THROWS_AS(min_distance_solution(a, b, x0), Inconsistent);
}
