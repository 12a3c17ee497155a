#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kacz/matrix.hpp"

namespace kacz {

enum class Variant {
  reflective_outer,
  reflective_running,
  sv_randomized,
  mtmn_block,
  steinerberger,
};

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

enum class TraceMode { none, boundary, full };
enum class StopReason { target_met, max_sweeps };

struct SolverConfig {
  Variant variant = Variant::reflective_outer;
  double epsilon = 1e-6;        // target relative residual, in (0, 1)
  std::size_t max_sweeps = 1000;
  std::uint64_t seed = 0;       // randomized variants only
  std::size_t check_every = 1;  // sweeps between residual checks

  // Optional extras (defaults preserve the plain behaviour).
  TraceMode trace_mode = TraceMode::none;
  std::optional<Vector> reference;  // enables error_history rows
  std::size_t sample_stride = 1;    // sweeps between error_history rows
  // General block form knobs; defaults reproduce the fixed 1/2-prefactor
  // multiset block step.
  double block_alpha = 1.0;
  std::optional<std::vector<double>> block_weights;  // per-row, default 1/2
};

struct Trace {
  // Full x_k sequence or sweep-boundary subsequence, per config.
  std::vector<Vector> iterates;
  // (sweep index, ||A * approx - b|| / ||b||), indices strictly increasing.
  std::vector<std::pair<std::size_t, double>> residual_history;
  // (sweep index, ||approx - reference|| / ||reference||), when configured.
  std::vector<std::pair<std::size_t, double>> error_history;
};

struct SolveResult {
  Vector solution;
  std::size_t sweeps_used = 0;
  double final_relative_residual = 0.0;
  StopReason stop_reason = StopReason::max_sweeps;
};

// ||Ax - b|| / max(||b||, eps_mach)
double residual(const Matrix& a, const Vector& x, const Vector& b);

// Cyclic alpha=2 iteration, solution = running average of sweep-boundary
// iterates x_{jm} (x0 included).
std::pair<SolveResult, Trace> solve_reflective_outer(const Matrix& a,
                                                     const Vector& b,
                                                     const Vector& x0,
                                                     const SolverConfig& cfg);

// Cyclic alpha=2 iteration, solution = running average of every iterate.
std::pair<SolveResult, Trace> solve_reflective_running(const Matrix& a,
                                                       const Vector& b,
                                                       const Vector& x0,
                                                       const SolverConfig& cfg);

// alpha=1 steps on rows sampled with probability ||A_i||^2/||A||_F^2;
// solution = current iterate.
std::pair<SolveResult, Trace> solve_sv(const Matrix& a, const Vector& b,
                                       const Vector& x0, const SolverConfig& cfg);

// Block step x += alpha_k * sum_{i in Q} w_i (b_i - A_i.x)/||A_i||^2 A_i with
// |Q| = ceil(||A||_F^2 / ||A||^2) i.i.d. squared-row-norm draws; one block
// step counts as one sweep.
std::pair<SolveResult, Trace> solve_mtmn(const Matrix& a, const Vector& b,
                                         const Vector& x0, const SolverConfig& cfg);

// alpha=2 steps on randomly sampled rows, solution = running average of all
// iterates.
std::pair<SolveResult, Trace> solve_steinerberger(const Matrix& a, const Vector& b,
                                                  const Vector& x0,
                                                  const SolverConfig& cfg);

// Dispatch on cfg.variant.
std::pair<SolveResult, Trace> solve(const Matrix& a, const Vector& b,
                                    const Vector& x0, const SolverConfig& cfg);
// Same with the default x0 = 0.
std::pair<SolveResult, Trace> solve(const Matrix& a, const Vector& b,
                                    const SolverConfig& cfg);

// Elements x_{k + (2i+j) m} of a full trace; IndexOut when none exist.
std::vector<Vector> subset_trace(const Trace& trace, std::size_t m,
                                 std::size_t k, std::size_t j);

}  // namespace kacz
