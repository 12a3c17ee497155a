#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kacz/matrix.hpp"
#include "kacz/solvers.hpp"

namespace kacz {

enum class SystemKind { gaussian, polar };

struct RandomSystem {
  Matrix a;
  Vector b;
  Vector x_star;
};

// gaussian: i.i.d. standard normal entries and planted solution, b = A x_*.
// polar: the single-angle unit-row family (requires m == n) with a planted
// solution; the angle is drawn uniformly from (0.01, pi/2).
RandomSystem gen_random_system(std::size_t n, std::size_t m, std::uint64_t seed,
                               SystemKind kind);

// Three angles with n == 3: rows (1,0,0), (cos x, sin x, 0),
// (cos y cos z, cos y sin z, sin y). One angle: row i scales the previous
// row's prefix by cos x and appends sin x; every row has unit norm.
Matrix polar_matrix(const std::vector<double>& angles, std::size_t n);

struct BenchSpec {
  std::size_t n = 0;
  std::size_t m = 0;  // 0 means square (m = n)
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double epsilon = 1e-6;
  std::size_t max_sweeps = 100000;
  std::vector<Variant> variants;
  std::string output_path;
  // Extras whose defaults preserve the plain behaviour.
  std::size_t sample_stride = 1;
  std::size_t check_every = 1;
  SystemKind kind = SystemKind::gaussian;
};

// Writes "trial,variant,sweep_count,relative_error" rows sorted by
// (trial, variant, sweep); trials fan out over KACZ_THREADS workers with
// per-trial generator streams so output is schedule-independent.
void run_comparison(const BenchSpec& spec);

struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

struct PolarGrid {
  Range x, y, z;
};

// Per grid point: x,y,z,inv_theta_min,kappa,kappa_sq,margin where margin is
// the exact inequality ratio sin(theta_min/2) ||W|| / sigma_min^2 (>= 1).
// Grid points whose matrix has a zero row are skipped with a log line.
void appendix_a_sweep(const PolarGrid& grid, const std::string& out_path);

// Same rows along the diagonal x = y = z.
void appendix_a_diag(const Range& range, const std::string& out_path);

enum class PlotKind { convergence, spectral };

// convergence: log-y relative error vs sweeps, one polyline per (trial,
// variant) in the fixed variant colors. spectral: 1/theta_min and kappa
// curves vs grid index.
void emit_plot(const std::string& csv_path, PlotKind kind,
               const std::string& out_path);

// Values of start + i*step up to stop inclusive (within float slack).
std::vector<double> range_values(const Range& r);

// Worker cap from KACZ_THREADS, defaulting to the hardware concurrency.
std::size_t worker_count();

}  // namespace kacz
