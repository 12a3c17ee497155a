#include "kacz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kacz/errors.hpp"
#include "kacz/linalg.hpp"
#include "kacz/reflect.hpp"

namespace kacz {

namespace {

double tau0(std::size_t n) { return static_cast<double>(n) * 1e-10; }

}  // namespace

SpectralReport eigenphases(const Matrix& r_a) {
  if (r_a.rows() != r_a.cols()) {
    throw DomainError("eigenphases needs a square matrix");
  }
  std::size_t n = r_a.rows();
  {
    Matrix gram = transpose(r_a) * r_a;
    for (std::size_t i = 0; i < n; ++i) gram(i, i) -= 1.0;
    if (frobenius_norm(gram) > 1e-8 * static_cast<double>(n)) {
      throw NotOrthogonal("eigenphases: matrix is not orthogonal within tolerance");
    }
  }
  Matrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (r_a(i, j) + r_a(j, i));
  EigenDecomposition eig = symmetric_eigen(sym);

  double t0 = tau0(n);
  SpectralReport report;
  std::vector<double> interior;  // lambda strictly inside (-1+tau0, 1-tau0)
  for (std::size_t i = 0; i < n; ++i) {
    double lambda = std::clamp(eig.values[i], -1.0, 1.0);
    if (lambda >= 1.0 - t0) {
      ++report.mult_one;
    } else if (lambda <= -1.0 + t0) {
      ++report.mult_minus_one;
    } else {
      interior.push_back(lambda);
    }
  }
  if (report.mult_minus_one > 0) {
    report.phases.push_back({M_PI, report.mult_minus_one});
  }
  // Interior eigenvalues of the symmetric part come in equal pairs, one
  // rotation plane each; record a pair as a single entry of multiplicity 2.
  std::sort(interior.begin(), interior.end());
  for (std::size_t i = 0; i + 1 < interior.size(); i += 2) {
    double lambda = 0.5 * (interior[i] + interior[i + 1]);
    report.phases.push_back({std::acos(std::clamp(lambda, -1.0, 1.0)), 2});
  }
  if (interior.size() % 2 == 1) {
    // Only reachable when a pair straddles the tau0 threshold.
    report.phases.push_back({std::acos(std::clamp(interior.back(), -1.0, 1.0)), 1});
  }
  if (report.mult_one > 0) {
    report.phases.push_back({0.0, report.mult_one});
  }
  std::sort(report.phases.begin(), report.phases.end(),
            [](const PhaseEntry& a, const PhaseEntry& b) { return a.theta < b.theta; });

  report.theta_min_nonzero = min_nonzero_phase(report);
  return report;
}

std::optional<double> min_nonzero_phase(const SpectralReport& report) {
  std::size_t n = 0;
  for (const PhaseEntry& p : report.phases) n += p.multiplicity;
  double t0 = tau0(n);
  std::optional<double> best;
  for (const PhaseEntry& p : report.phases) {
    if (p.theta > t0 && (!best || p.theta < *best)) best = p.theta;
  }
  return best;
}

std::size_t iteration_count(double theta_min, double epsilon) {
  if (!(theta_min > 0.0 && theta_min <= M_PI)) {
    throw DomainError("iteration_count: theta_min must be in (0, pi]");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("iteration_count: epsilon must be in (0, 1)");
  }
  return static_cast<std::size_t>(std::ceil(2.0 / (epsilon * theta_min)));
}

std::size_t iteration_count_proven(double theta_min, double epsilon) {
  if (!(theta_min > 0.0 && theta_min <= M_PI)) {
    throw DomainError("iteration_count_proven: theta_min must be in (0, pi]");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("iteration_count_proven: epsilon must be in (0, 1)");
  }
  return static_cast<std::size_t>(std::ceil(M_PI / (2.0 * epsilon * theta_min)));
}

std::pair<double, double> det_offset_identity(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DomainError("det_offset_identity needs a square matrix");
  }
  std::size_t n = a.rows();
  Matrix r = composite_reflection(a);
  for (std::size_t i = 0; i < n; ++i) r(i, i) -= 1.0;
  double lhs = determinant(r);
  double rhs = determinant(a);
  rhs *= rhs;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = a.row_ptr(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) sq += row[j] * row[j];
    rhs /= sq;
  }
  for (std::size_t i = 0; i < n; ++i) rhs *= -2.0;
  return {lhs, rhs};
}

double phase_lower_bound(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DomainError("phase_lower_bound needs a square matrix");
  }
  Vector s = singular_values(a);
  double smax = s[0], smin = s[s.dim() - 1];
  double tol = static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * smax;
  if (smax == 0.0 || smin <= tol) {
    throw RankDeficient("phase_lower_bound: matrix is rank deficient");
  }
  Matrix w = gram_lower_triangular(a);
  double w_norm = singular_values(w)[0];
  return smin * smin / w_norm;
}

std::pair<double, double> w_norm_bound(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DomainError("w_norm_bound needs a square matrix");
  }
  std::size_t n = a.rows();
  if (n < 2) throw DomainError("w_norm_bound needs n >= 2");
  double w_norm = singular_values(gram_lower_triangular(a))[0];
  double a_norm = singular_values(a)[0];
  double bound = (2.0 * std::log(static_cast<double>(n)) / M_PI) * a_norm * a_norm +
                 a_norm + 2.0 * (1.0 + 1.0 / M_PI) * a_norm * a_norm;
  return {w_norm, bound};
}

}  // namespace kacz
