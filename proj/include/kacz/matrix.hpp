#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "kacz/errors.hpp"

namespace kacz {

// Dense real column vector. Constructors reject empty and non-finite input;
// in-place mutation through operator[] is the caller's responsibility.
class Vector {
 public:
  explicit Vector(std::size_t dim);
  explicit Vector(std::vector<double> entries);
  Vector(std::initializer_list<double> entries);

  std::size_t dim() const { return e_.size(); }
  double& operator[](std::size_t i) { return e_[i]; }
  double operator[](std::size_t i) const { return e_[i]; }
  double* data() { return e_.data(); }
  const double* data() const { return e_.data(); }

  const std::vector<double>& entries() const { return e_; }

 private:
  std::vector<double> e_;
};

// Dense real row-major matrix, rows >= 1 and cols >= 1, all entries finite.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);  // zero-filled
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return e_[i * cols_ + j];
  }

  double* row_ptr(std::size_t i) { return e_.data() + i * cols_; }
  const double* row_ptr(std::size_t i) const { return e_.data() + i * cols_; }

  Vector row_copy(std::size_t i) const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> e_;
};

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& v);
Vector operator*(const Matrix& m, const Vector& v);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);
double dot(const Vector& a, const Vector& b);
double norm(const Vector& v);
double frobenius_norm(const Matrix& a);
double max_abs_entry(const Matrix& a);

// y += s * x
void axpy(double s, const Vector& x, Vector& y);

// Text format used repo-wide: optional '#'-prefixed comment lines, then a
// header line "m n", then m lines of n space-separated floats.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& a);
void write_matrix_file(const std::string& path, const Matrix& a);

// A vector file is a m-by-1 (or 1-by-m) matrix in the same text format.
Vector read_vector_file(const std::string& path);

// Round-trip exact decimal rendering (17 significant digits).
std::string format_double(double v);

}  // namespace kacz
