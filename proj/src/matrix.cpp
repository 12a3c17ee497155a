#include "kacz/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

namespace kacz {

namespace {

void require_finite(const std::vector<double>& e, const char* what) {
  for (double v : e) {
    if (!std::isfinite(v)) {
      throw DomainError(std::string(what) + " entries must be finite");
    }
  }
}

}  // namespace

Vector::Vector(std::size_t dim) : e_(dim, 0.0) {
  if (dim == 0) throw DomainError("vector dim must be >= 1");
}

Vector::Vector(std::vector<double> entries) : e_(std::move(entries)) {
  if (e_.empty()) throw DomainError("vector dim must be >= 1");
  require_finite(e_, "vector");
}

Vector::Vector(std::initializer_list<double> entries)
    : Vector(std::vector<double>(entries)) {}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), e_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw DomainError("matrix dims must be >= 1");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DomainError("matrix dims must be >= 1");
  if (e_.size() != rows * cols) {
    throw DomainError("matrix entry count must equal rows*cols");
  }
  require_finite(e_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::row_copy(std::size_t i) const {
  std::vector<double> r(row_ptr(i), row_ptr(i) + cols_);
  return Vector(std::move(r));
}

Vector operator+(const Vector& a, const Vector& b) {
  Vector r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector operator-(const Vector& a, const Vector& b) {
  Vector r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector operator*(double s, const Vector& v) {
  Vector r(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) r[i] = s * v[i];
  return r;
}

Vector operator*(const Matrix& m, const Vector& v) {
  Vector r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.row_ptr(i);
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += row[j] * v[j];
    r[i] = s;
  }
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.row_ptr(k);
      double* rrow = r.row_ptr(i);
      for (std::size_t j = 0; j < b.cols(); ++j) rrow[j] += aik * brow[j];
    }
  }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Matrix transpose(const Matrix& a) {
  Matrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * row[j];
  }
  return std::sqrt(s);
}

double max_abs_entry(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::fabs(row[j]));
  }
  return m;
}

void axpy(double s, const Vector& x, Vector& y) {
  for (std::size_t i = 0; i < x.dim(); ++i) y[i] += s * x[i];
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Matrix read_matrix(std::istream& in) {
  std::string line;
  // Comment lines are allowed before the header only.
  while (std::getline(in, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    break;
  }
  std::istringstream header(line);
  long long m = 0, n = 0;
  if (!(header >> m >> n) || m < 1 || n < 1) {
    throw IoError("matrix header must be two positive integers 'm n'");
  }
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(m * n));
  for (long long k = 0; k < m * n; ++k) {
    double v;
    if (!(in >> v)) throw IoError("matrix body ended early");
    entries.push_back(v);
  }
  return Matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n),
                std::move(entries));
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return read_matrix(in);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_matrix(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_matrix(out, a);
  if (!out) throw IoError("write failed: " + path);
}

Vector read_vector_file(const std::string& path) {
  Matrix m = read_matrix_file(path);
  if (m.cols() == 1) {
    std::vector<double> e(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) e[i] = m(i, 0);
    return Vector(std::move(e));
  }
  if (m.rows() == 1) return m.row_copy(0);
  throw IoError(path + ": expected a single-column or single-row matrix");
}

}  // namespace kacz
