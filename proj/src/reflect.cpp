#include "kacz/reflect.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kacz/errors.hpp"
#include "kacz/linalg.hpp"

namespace kacz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double row_norm(const Matrix& a, std::size_t i) {
  const double* row = a.row_ptr(i);
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * row[j];
  return std::sqrt(s);
}

// Threshold ||A_i|| <= n * eps * max_j ||A_j||, reported with the 1-based row.
void check_rows(const Matrix& a) {
  double max_norm = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    max_norm = std::max(max_norm, row_norm(a, i));
  }
  double tol = static_cast<double>(a.cols()) * kEps * max_norm;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (row_norm(a, i) <= tol) {
      throw ZeroRow("zero row " + std::to_string(i + 1), i + 1);
    }
  }
}

// In-place alpha-relaxed step against row i of a.
void step_inplace(Vector& x, const Matrix& a, std::size_t i, double b_i,
                  double alpha) {
  const double* row = a.row_ptr(i);
  double sq = 0.0, ax = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    sq += row[j] * row[j];
    ax += row[j] * x[j];
  }
  double c = alpha * (b_i - ax) / sq;
  for (std::size_t j = 0; j < a.cols(); ++j) x[j] += c * row[j];
}

}  // namespace

Vector reflect(const Vector& v, const Vector& a) {
  if (v.dim() != a.dim()) throw DomainError("reflect dimension mismatch");
  double nrm = norm(a);
  if (nrm <= kEps * static_cast<double>(a.dim())) {
    throw ZeroRow("reflect: direction vector is numerically zero", 1);
  }
  double c = 2.0 * dot(a, v) / (nrm * nrm);
  Vector r(v.dim());
  for (std::size_t j = 0; j < v.dim(); ++j) r[j] = v[j] - c * a[j];
  return r;
}

Vector kaczmarz_step(const Vector& x, const Vector& a, double b_i, double alpha) {
  if (x.dim() != a.dim()) throw DomainError("kaczmarz_step dimension mismatch");
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("kaczmarz_step: alpha must be in (0, 2]");
  }
  double nrm = norm(a);
  if (nrm <= kEps * static_cast<double>(a.dim())) {
    throw ZeroRow("kaczmarz_step: row is numerically zero", 1);
  }
  double c = alpha * (b_i - dot(a, x)) / (nrm * nrm);
  Vector r(x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j) r[j] = x[j] + c * a[j];
  return r;
}

Vector sweep(const Vector& x, const Matrix& a, const Vector& b, double alpha) {
  if (x.dim() != a.cols() || b.dim() != a.rows()) {
    throw DomainError("sweep dimension mismatch");
  }
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("sweep: alpha must be in (0, 2]");
  }
  check_rows(a);
  Vector y = x;
  for (std::size_t i = 0; i < a.rows(); ++i) step_inplace(y, a, i, b[i], alpha);
  return y;
}

Matrix composite_reflection(const Matrix& a) {
  check_rows(a);
  std::size_t n = a.cols();
  Matrix r = Matrix::identity(n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) sq += row[j] * row[j];
    double inv = 2.0 / sq;
    // r <- (I - 2 a a^T / ||a||^2) r, via the row vector a^T r.
    std::vector<double> at_r(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double ak = row[k];
      if (ak == 0.0) continue;
      const double* rrow = r.row_ptr(k);
      for (std::size_t j = 0; j < n; ++j) at_r[j] += ak * rrow[j];
    }
    for (std::size_t k = 0; k < n; ++k) {
      double c = inv * row[k];
      if (c == 0.0) continue;
      double* rrow = r.row_ptr(k);
      for (std::size_t j = 0; j < n; ++j) rrow[j] -= c * at_r[j];
    }
  }
  return r;
}

Matrix gram_lower_triangular(const Matrix& a) {
  std::size_t m = a.rows();
  Matrix w(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const double* ri = a.row_ptr(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const double* rj = a.row_ptr(j);
      double s = 0.0;
      for (std::size_t c = 0; c < a.cols(); ++c) s += ri[c] * rj[c];
      w(i, j) = (i == j) ? s : 2.0 * s;
    }
  }
  return w;
}

ReflectionFactorization brady_watt_reflection(const Matrix& a) {
  check_rows(a);
  Matrix w = gram_lower_triangular(a);
  Matrix y = forward_substitution_multi(w, a);  // W Y = A
  std::size_t n = a.cols();
  Matrix r = Matrix::identity(n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.row_ptr(i);
    const double* yrow = y.row_ptr(i);
    for (std::size_t p = 0; p < n; ++p) {
      double c = 2.0 * arow[p];
      if (c == 0.0) continue;
      double* rrow = r.row_ptr(p);
      for (std::size_t q = 0; q < n; ++q) rrow[q] -= c * yrow[q];
    }
  }
  return {std::move(r), std::move(w), a.rows(), a.cols()};
}

Matrix f_matrix(const Matrix& a) {
  check_rows(a);
  std::size_t m = a.rows(), n = a.cols();
  Matrix f(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    Vector v = a.row_copy(j);
    double sq = dot(v, v);
    v = (2.0 / sq) * v;
    for (std::size_t i = j + 1; i < m; ++i) v = reflect(v, a.row_copy(i));
    for (std::size_t i = 0; i < n; ++i) f(i, j) = v[i];
  }
  return f;
}

Vector u_vector(const Matrix& a, const Vector& b) {
  if (b.dim() != a.rows()) throw DomainError("u_vector dimension mismatch");
  check_rows(a);
  std::size_t n = a.cols();
  Vector u(n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    u = reflect(u, a.row_copy(i));
    const double* row = a.row_ptr(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) sq += row[j] * row[j];
    double c = 2.0 * b[i] / sq;
    for (std::size_t j = 0; j < n; ++j) u[j] += c * row[j];
  }
  Vector via_f = f_matrix(a) * b;
  double scale = std::max(1.0, norm(u));
  if (norm(u - via_f) > 1e-12 * scale) {
    throw Error("u_vector: recursion and F b paths disagree");
  }
  return u;
}

}  // namespace kacz
