#include "kacz/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kacz/errors.hpp"

namespace kacz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Lu {
  Matrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  double min_pivot = 0.0;
};

Lu lu_factor(const Matrix& a) {
  std::size_t n = a.rows();
  Lu f{a, std::vector<std::size_t>(n), 1, std::numeric_limits<double>::infinity()};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  Matrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(m(i, k)) > std::fabs(m(p, k))) p = i;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.sign = -f.sign;
    }
    double piv = m(k, k);
    f.min_pivot = std::min(f.min_pivot, std::fabs(piv));
    if (piv == 0.0) continue;  // remaining column already eliminated
    for (std::size_t i = k + 1; i < n; ++i) {
      double l = m(i, k) / piv;
      m(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

}  // namespace

Vector solve_direct(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols()) throw DomainError("solve_direct needs a square matrix");
  if (b.dim() != a.rows()) throw DomainError("solve_direct dimension mismatch");
  std::size_t n = a.rows();
  Lu f = lu_factor(a);
  double tol = static_cast<double>(n) * kEps * max_abs_entry(a);
  if (f.min_pivot <= tol) {
    throw SingularMatrix("pivot below tolerance in solve_direct");
  }
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
    y[i] = s;
  }
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x[j];
    x[ii] = s / f.lu(ii, ii);
  }
  return x;
}

double determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw DomainError("determinant needs a square matrix");
  Lu f = lu_factor(a);
  double d = f.sign;
  for (std::size_t k = 0; k < a.rows(); ++k) d *= f.lu(k, k);
  return d;
}

EigenDecomposition symmetric_eigen(const Matrix& s) {
  if (s.rows() != s.cols()) throw DomainError("symmetric_eigen needs a square matrix");
  std::size_t n = s.rows();
  double fro = frobenius_norm(s);
  {
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double d = s(i, j) - s(j, i);
        asym += d * d;
      }
    if (std::sqrt(asym) > 1e-10 * std::max(fro, 1e-300)) {
      throw NotSymmetric("matrix is not symmetric within tolerance");
    }
  }
  // Work on the symmetrized copy so the asymmetry slack cannot drift.
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (s(i, j) + s(j, i));
  Matrix v = Matrix::identity(n);

  auto off_norm = [&]() {
    double o = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) o += 2.0 * m(i, j) * m(i, j);
    return std::sqrt(o);
  };

  for (int sweep = 0; sweep < 60; ++sweep) {
    if (off_norm() <= 1e-14 * std::max(fro, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = m(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - sn * mkq;
          m(k, q) = sn * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - sn * mqk;
          m(q, k) = sn * mpk + c * mqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });
  Vector values(n);
  Matrix vectors(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = m(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) vectors(i, j) = v(i, order[j]);
  }
  return {std::move(values), std::move(vectors)};
}

Svd jacobi_svd(const Matrix& a) {
  if (a.rows() < a.cols()) {
    Svd t = jacobi_svd(transpose(a));
    return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }
  std::size_t m = a.rows(), n = a.cols();
  Matrix b = a;
  Matrix v = Matrix::identity(n);
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          app += b(i, p) * b(i, p);
          aqq += b(i, q) * b(i, q);
          apq += b(i, p) * b(i, q);
        }
        if (std::fabs(apq) <= 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        double zeta = (aqq - app) / (2.0 * apq);
        double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(zeta) + std::sqrt(zeta * zeta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        for (std::size_t i = 0; i < m; ++i) {
          double bip = b(i, p), biq = b(i, q);
          b(i, p) = c * bip - sn * biq;
          b(i, q) = sn * bip + c * biq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - sn * viq;
          v(i, q) = sn * vip + c * viq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += b(i, j) * b(i, j);
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });
  Svd out{Matrix(m, n), std::vector<double>(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t src = order[j];
    out.sigma[j] = sigma[src];
    double inv = sigma[src] > 0.0 ? 1.0 / sigma[src] : 0.0;
    for (std::size_t i = 0; i < m; ++i) out.u(i, j) = b(i, src) * inv;
    for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
  }
  return out;
}

Vector min_norm_least_squares(const Matrix& a, const Vector& b) {
  if (b.dim() != a.rows()) {
    throw DomainError("min_norm_least_squares dimension mismatch");
  }
  Svd svd = jacobi_svd(a);
  double rtol = static_cast<double>(std::max(a.rows(), a.cols())) * kEps *
                (svd.sigma.empty() ? 0.0 : svd.sigma[0]);
  Vector x(a.cols());
  for (std::size_t j = 0; j < svd.sigma.size(); ++j) {
    if (svd.sigma[j] <= rtol) break;  // descending order
    double c = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) c += svd.u(i, j) * b[i];
    c /= svd.sigma[j];
    for (std::size_t i = 0; i < a.cols(); ++i) x[i] += c * svd.v(i, j);
  }
  return x;
}

Vector singular_values(const Matrix& a) {
  // One-sided Jacobi keeps tiny singular values at eps*||A|| accuracy; a
  // Gram-matrix route would floor them at sqrt(eps)*||A|| and defeat the
  // rank tolerance used by callers.
  Svd svd = jacobi_svd(a);
  Vector out(svd.sigma.size());
  for (std::size_t i = 0; i < svd.sigma.size(); ++i) out[i] = svd.sigma[i];
  return out;
}

double condition_number(const Matrix& a) {
  Vector s = singular_values(a);
  double smax = s[0], smin = s[s.dim() - 1];
  double tol = static_cast<double>(std::max(a.rows(), a.cols())) * kEps * smax;
  if (smax == 0.0 || smin <= tol) {
    throw RankDeficient("condition_number: sigma_min below rank tolerance");
  }
  return smax / smin;
}

Vector forward_substitution(const Matrix& lower, const Vector& b) {
  std::size_t n = lower.rows();
  if (lower.cols() != n || b.dim() != n) {
    throw DomainError("forward_substitution dimension mismatch");
  }
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    const double* row = lower.row_ptr(i);
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * y[j];
    if (row[i] == 0.0) throw SingularMatrix("zero diagonal in forward_substitution");
    y[i] = s / row[i];
  }
  return y;
}

Matrix forward_substitution_multi(const Matrix& lower, const Matrix& b) {
  std::size_t n = lower.rows();
  if (lower.cols() != n || b.rows() != n) {
    throw DomainError("forward_substitution_multi dimension mismatch");
  }
  Matrix y(n, b.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const double* lrow = lower.row_ptr(i);
    if (lrow[i] == 0.0) throw SingularMatrix("zero diagonal in forward_substitution");
    for (std::size_t c = 0; c < b.cols(); ++c) {
      double s = b(i, c);
      for (std::size_t j = 0; j < i; ++j) s -= lrow[j] * y(j, c);
      y(i, c) = s / lrow[i];
    }
  }
  return y;
}

std::vector<std::size_t> select_independent_rows(const Matrix& a) {
  std::size_t m = a.rows(), n = a.cols();
  // Residuals of all rows, orthogonalized against the chosen set.
  std::vector<std::vector<double>> res(m, std::vector<double>(n));
  double max_norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = a.row_ptr(i);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      res[i][j] = row[j];
      s += row[j] * row[j];
    }
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  double tol = static_cast<double>(std::max(m, n)) * kEps * max_norm;
  std::vector<bool> used(m, false);
  std::vector<std::size_t> chosen;
  for (std::size_t round = 0; round < std::min(m, n); ++round) {
    std::size_t best = m;
    double best_norm = tol;
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += res[i][j] * res[i][j];
      double nrm = std::sqrt(s);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = i;
      }
    }
    if (best == m) break;
    used[best] = true;
    chosen.push_back(best);
    double inv = 1.0 / best_norm;
    std::vector<double> q(n);
    for (std::size_t j = 0; j < n; ++j) q[j] = res[best][j] * inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      double proj = 0.0;
      for (std::size_t j = 0; j < n; ++j) proj += res[i][j] * q[j];
      for (std::size_t j = 0; j < n; ++j) res[i][j] -= proj * q[j];
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace kacz
