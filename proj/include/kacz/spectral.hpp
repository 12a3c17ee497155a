#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kacz/matrix.hpp"

namespace kacz {

struct PhaseEntry {
  double theta;               // in [0, pi]
  std::size_t multiplicity;   // complex pairs recorded once with multiplicity 2
};

struct SpectralReport {
  std::vector<PhaseEntry> phases;  // multiplicities sum to n
  std::size_t mult_one = 0;
  std::size_t mult_minus_one = 0;
  std::optional<double> theta_min_nonzero;
};

// Phases theta = arccos(lambda) from the symmetric part (R + R^T)/2, lambda
// clamped to [-1, 1]. An eigenvalue counts as +1 iff lambda >= 1 - tau0 and
// as -1 iff lambda <= -1 + tau0, with tau0 = n * 1e-10.
// NotOrthogonal when ||R^T R - I||_F > 1e-8 n.
SpectralReport eigenphases(const Matrix& r_a);

// Smallest phase strictly above tau0; absent when all phases are zero.
std::optional<double> min_nonzero_phase(const SpectralReport& report);

// Averaging point counts: the default ceil(2 / (eps * theta_min)) and the
// proven-sufficient ceil(pi / (2 * eps * theta_min)).
std::size_t iteration_count(double theta_min, double epsilon);
std::size_t iteration_count_proven(double theta_min, double epsilon);

// lhs = det(R_A - I) by pivoted elimination;
// rhs = (-2)^n det(A)^2 prod ||A_i||^-2.
std::pair<double, double> det_offset_identity(const Matrix& a);

// sigma_min(A)^2 / ||W||; every nonzero phase satisfies
// sin(theta/2) >= the returned value.
double phase_lower_bound(const Matrix& a);

// (||W||, (2 ln n / pi) ||A||^2 + ||A|| + 2 (1 + 1/pi) ||A||^2), n >= 2.
std::pair<double, double> w_norm_bound(const Matrix& a);

}  // namespace kacz
