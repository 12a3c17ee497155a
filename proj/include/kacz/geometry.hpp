#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kacz/matrix.hpp"

namespace kacz {

struct SphereFit {
  Vector center;
  double radius = 0.0;         // mean distance to center
  double max_deviation = 0.0;  // worst | ||p - c|| - radius |
};

// Arithmetic mean; Empty on an empty point set.
Vector empirical_center(const std::vector<Vector>& points);

// Needs >= 2 points.
SphereFit sphere_deviation(const std::vector<Vector>& points, const Vector& center);

// Centers (c_k0, c_k1) of the orbit subsets S_k0, S_k1 for arbitrary x0:
// c_0j = x_* + (-1)^j P_{-1}(x0 - x_*) with P_{-1} the eigenvalue -1
// eigenspace projector of R_A, then c_kj = x_* + R_k...R_1 (c_0j - x_*).
std::pair<Vector, Vector> predicted_centers(const Matrix& a, const Vector& x_star,
                                            const Vector& x0, std::size_t k);

// Rank of the matrix of differences p_i - p_0 at tolerance tol * sigma_max.
std::size_t affine_dimension(const std::vector<Vector>& points, double tol);

// x0 + A^+(b - A x0); Inconsistent when the min-norm LS residual exceeds
// 1e-8 ||b||.
Vector min_distance_solution(const Matrix& a, const Vector& b, const Vector& x0);

}  // namespace kacz
