#include "kacz/geometry.hpp"

#include <cmath>

#include "kacz/errors.hpp"
#include "kacz/linalg.hpp"
#include "kacz/reflect.hpp"

namespace kacz {

Vector empirical_center(const std::vector<Vector>& points) {
  if (points.empty()) throw Empty("empirical_center: no points");
  Vector c(points[0].dim());
  for (const Vector& p : points) axpy(1.0, p, c);
  return (1.0 / static_cast<double>(points.size())) * c;
}

SphereFit sphere_deviation(const std::vector<Vector>& points, const Vector& center) {
  if (points.size() < 2) throw Empty("sphere_deviation: needs >= 2 points");
  double mean = 0.0;
  for (const Vector& p : points) mean += norm(p - center);
  mean /= static_cast<double>(points.size());
  double worst = 0.0;
  for (const Vector& p : points) {
    worst = std::max(worst, std::fabs(norm(p - center) - mean));
  }
  return {center, mean, worst};
}

std::pair<Vector, Vector> predicted_centers(const Matrix& a, const Vector& x_star,
                                            const Vector& x0, std::size_t k) {
  if (x_star.dim() != a.cols() || x0.dim() != a.cols()) {
    throw DomainError("predicted_centers dimension mismatch");
  }
  if (k > a.rows()) throw DomainError("predicted_centers: k exceeds row count");
  std::size_t n = a.cols();
  Matrix r = composite_reflection(a);
  Matrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (r(i, j) + r(j, i));
  EigenDecomposition eig = symmetric_eigen(sym);
  double t0 = static_cast<double>(n) * 1e-10;

  // d = P_{-1} (x0 - x_*), accumulated over the eigenvalue -1 eigenvectors.
  Vector diff = x0 - x_star;
  Vector d(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (eig.values[j] > -1.0 + t0) continue;
    double coef = 0.0;
    for (std::size_t i = 0; i < n; ++i) coef += eig.vectors(i, j) * diff[i];
    for (std::size_t i = 0; i < n; ++i) d[i] += coef * eig.vectors(i, j);
  }

  Vector d0 = d;
  Vector d1 = -1.0 * d;
  for (std::size_t i = 0; i < k; ++i) {
    Vector row = a.row_copy(i);
    d0 = reflect(d0, row);
    d1 = reflect(d1, row);
  }
  return {x_star + d0, x_star + d1};
}

std::size_t affine_dimension(const std::vector<Vector>& points, double tol) {
  if (points.size() < 2) throw Empty("affine_dimension: needs >= 2 points");
  std::size_t n = points[0].dim();
  Matrix diffs(points.size() - 1, n);
  for (std::size_t i = 1; i < points.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) diffs(i - 1, j) = points[i][j] - points[0][j];
  }
  Vector s = singular_values(diffs);
  // Floor the cutoff at the scale of the points themselves so coincident
  // points separated only by roundoff never count as a dimension.
  double scale = 0.0;
  for (const Vector& p : points) scale = std::max(scale, norm(p));
  double cutoff = tol * std::max(s[0], scale);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (s[i] > cutoff && s[i] > 0.0) ++rank;
  }
  return rank;
}

Vector min_distance_solution(const Matrix& a, const Vector& b, const Vector& x0) {
  if (b.dim() != a.rows() || x0.dim() != a.cols()) {
    throw DomainError("min_distance_solution dimension mismatch");
  }
  Vector z = min_norm_least_squares(a, b);
  if (norm(a * z - b) > 1e-8 * norm(b)) {
    throw Inconsistent("min_distance_solution: system is inconsistent");
  }
  Vector shift = min_norm_least_squares(a, b - a * x0);
  return x0 + shift;
}

}  // namespace kacz
