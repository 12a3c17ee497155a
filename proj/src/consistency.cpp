#include "kacz/consistency.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kacz/errors.hpp"
#include "kacz/linalg.hpp"
#include "kacz/reflect.hpp"
#include "kacz/rng.hpp"
#include "kacz/spectral.hpp"

namespace kacz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_row_norm(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * row[j];
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

Matrix take_rows(const Matrix& a, const std::vector<std::size_t>& rows) {
  Matrix sub(rows.size(), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double* src = a.row_ptr(rows[i]);
    double* dst = sub.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) dst[j] = src[j];
  }
  return sub;
}

// Orthonormal basis of the eigenvalue-1 eigenspace of an orthogonal matrix,
// taken from its symmetric part; empty optional when the multiplicity is 0.
std::optional<Matrix> eigen1_basis(const Matrix& r) {
  std::size_t n = r.rows();
  Matrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (r(i, j) + r(j, i));
  EigenDecomposition eig = symmetric_eigen(sym);
  double t0 = static_cast<double>(n) * 1e-10;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < n; ++i) {
    if (eig.values[i] >= 1.0 - t0) cols.push_back(i);
  }
  if (cols.empty()) return std::nullopt;
  Matrix basis(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) basis(i, j) = eig.vectors(i, cols[j]);
  return basis;
}

void check_full_column_rank(const Matrix& a, const char* who) {
  Vector s = singular_values(a);
  double tol = static_cast<double>(std::max(a.rows(), a.cols())) * kEps * s[0];
  if (a.rows() < a.cols() || s[0] == 0.0 || s[s.dim() - 1] <= tol) {
    throw RankDeficient(std::string(who) + ": matrix must have full column rank");
  }
}

}  // namespace

AugmentedSystem augment_combination(const Matrix& a, const Vector& b,
                                    const Matrix& lambdas) {
  if (lambdas.cols() != a.rows() || b.dim() != a.rows()) {
    throw DomainError("augment_combination dimension mismatch");
  }
  std::size_t m = a.rows(), n = a.cols(), l = lambdas.rows();
  double tol = static_cast<double>(n) * kEps * max_row_norm(a);
  Matrix a_aug(m + l, n);
  Vector b_aug(m + l);
  for (std::size_t i = 0; i < m; ++i) {
    const double* src = a.row_ptr(i);
    double* dst = a_aug.row_ptr(i);
    for (std::size_t j = 0; j < n; ++j) dst[j] = src[j];
    b_aug[i] = b[i];
  }
  for (std::size_t k = 0; k < l; ++k) {
    double* dst = a_aug.row_ptr(m + k);
    double combined_b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double lam = lambdas(k, i);
      if (lam == 0.0) continue;
      const double* src = a.row_ptr(i);
      for (std::size_t j = 0; j < n; ++j) dst[j] += lam * src[j];
      combined_b += lam * b[i];
    }
    double nrm = 0.0;
    for (std::size_t j = 0; j < n; ++j) nrm += dst[j] * dst[j];
    if (std::sqrt(nrm) <= tol) {
      throw ZeroRow("augment_combination: combination " + std::to_string(k + 1) +
                        " vanishes",
                    m + k + 1);
    }
    b_aug[m + k] = combined_b;
  }
  return {std::move(a_aug), std::move(b_aug), l, lambdas};
}

Matrix skew_p(const Matrix& v, const Matrix& c) {
  if (c.cols() != v.rows()) throw DomainError("skew_p dimension mismatch");
  {
    Vector s = singular_values(v);
    double tol = static_cast<double>(std::max(v.rows(), v.cols())) * kEps * s[0];
    if (v.rows() > v.cols() || s[0] == 0.0 || s[s.dim() - 1] <= tol) {
      throw RankDeficient("skew_p: V must have full row rank");
    }
  }
  Matrix w = gram_lower_triangular(v);
  std::size_t l = c.rows(), r = v.rows();
  Matrix p(l, l);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      // c_i^T W c_j
      double s = 0.0;
      for (std::size_t a = 0; a < r; ++a) {
        double ci = c(i, a);
        if (ci == 0.0) continue;
        const double* wrow = w.row_ptr(a);
        double inner = 0.0;
        for (std::size_t bcol = 0; bcol <= a; ++bcol) inner += wrow[bcol] * c(j, bcol);
        s += ci * inner;
      }
      p(i, j) = s;
      p(j, i) = -s;
    }
  }
  return p;
}

std::size_t eigen1_multiplicity(const Matrix& a) {
  return eigenphases(composite_reflection(a)).mult_one;
}

bool is_reflection_consistent(const Matrix& a) {
  Matrix r_full = composite_reflection(a);
  std::vector<std::size_t> rows = select_independent_rows(a);
  Matrix r_sub = composite_reflection(take_rows(a, rows));
  SpectralReport full = eigenphases(r_full);
  SpectralReport sub = eigenphases(r_sub);
  if (full.mult_one != sub.mult_one) return false;
  if (full.mult_one == 0) return true;
  std::optional<Matrix> u1 = eigen1_basis(r_full);
  std::optional<Matrix> u2 = eigen1_basis(r_sub);
  if (!u1 || !u2 || u1->cols() != u2->cols()) return false;
  // Principal angles between the eigenspaces: cosines are the singular
  // values of U1^T U2.
  Matrix overlap = transpose(*u1) * (*u2);
  Vector s = singular_values(overlap);
  double cos_max_angle = std::clamp(s[s.dim() - 1], -1.0, 1.0);
  return std::acos(cos_max_angle) <= 1e-7;
}

AugmentedSystem make_reflection_consistent(const Matrix& a, const Vector& b,
                                           std::uint64_t seed,
                                           std::size_t max_tries) {
  if (max_tries < 1) throw DomainError("make_reflection_consistent: max_tries >= 1");
  if (is_reflection_consistent(a)) {
    return {a, b, 0, std::nullopt};
  }
  std::size_t m = a.rows();
  std::size_t r = select_independent_rows(a).size();
  std::size_t l = ((m - r) % 2 == 1) ? 1 : 2;
  Rng rng(seed);
  for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
    Matrix lambdas(l, m);
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j < m; ++j) lambdas(i, j) = rng.normal();
    AugmentedSystem candidate = augment_combination(a, b, lambdas);
    if (is_reflection_consistent(candidate.a_aug)) return candidate;
  }
  throw ExhaustedTries("make_reflection_consistent: no repair within max_tries");
}

std::pair<Matrix, Vector> tikhonov_stack(const Matrix& a, const Vector& b,
                                         double mu) {
  if (!(mu > 0.0)) throw NonPositiveMu("tikhonov_stack: mu must be positive");
  if (b.dim() != a.rows()) throw DomainError("tikhonov_stack dimension mismatch");
  std::size_t m = a.rows(), n = a.cols();
  Matrix stacked(m + n, n);
  Vector padded(m + n);
  for (std::size_t i = 0; i < m; ++i) {
    const double* src = a.row_ptr(i);
    double* dst = stacked.row_ptr(i);
    for (std::size_t j = 0; j < n; ++j) dst[j] = src[j];
    padded[i] = b[i];
  }
  for (std::size_t j = 0; j < n; ++j) stacked(m + j, j) = mu;
  return {std::move(stacked), std::move(padded)};
}

Vector normal_like_solution(const Matrix& a, const Vector& b) {
  if (b.dim() != a.rows()) {
    throw DomainError("normal_like_solution dimension mismatch");
  }
  check_full_column_rank(a, "normal_like_solution");
  ReflectionFactorization fact = brady_watt_reflection(a);
  Vector u = u_vector(a, b);
  std::size_t n = a.cols();
  Matrix offset(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      offset(i, j) = (i == j ? 1.0 : 0.0) - fact.r_a(i, j);
  Vector x1(n), x2(n);
  try {
    x1 = solve_direct(offset, u);
    Matrix at = transpose(a);
    Matrix normal = at * forward_substitution_multi(fact.w, a);
    Vector rhs = at * forward_substitution(fact.w, b);
    x2 = solve_direct(normal, rhs);
  } catch (const SingularMatrix&) {
    throw SingularSystem("normal_like_solution: I - R_A fails the pivot test");
  }
  double scale = std::max({norm(x1), norm(x2), 1.0});
  if (norm(x1 - x2) > 1e-8 * scale) {
    throw SingularSystem("normal_like_solution: solution paths disagree");
  }
  return x1;
}

double ls_gap_bound(const Matrix& a, const Vector& b) {
  if (b.dim() != a.rows()) throw DomainError("ls_gap_bound dimension mismatch");
  check_full_column_rank(a, "ls_gap_bound");
  Vector x_ls = min_norm_least_squares(a, b);
  double r_norm = norm(b - a * x_ls);
  double kappa_a = condition_number(a);
  Vector sw = singular_values(gram_lower_triangular(a));
  double kappa_w = sw[0] / sw[sw.dim() - 1];
  return kappa_a * kappa_a * kappa_w * r_norm;
}

}  // namespace kacz
