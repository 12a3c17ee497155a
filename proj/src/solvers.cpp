#include "kacz/solvers.hpp"

#include <cmath>
#include <limits>

#include "kacz/errors.hpp"
#include "kacz/linalg.hpp"
#include "kacz/rng.hpp"

namespace kacz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

const char* kVariantNames[] = {"reflective_outer", "reflective_running",
                               "sv_randomized", "mtmn_block", "steinerberger"};

enum class Averaging { none, outer, every_step };

struct Scheme {
  double alpha;
  bool randomized;
  Averaging averaging;
};

void validate(const SolverConfig& cfg, std::size_t m) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw DomainError("solver epsilon must be in (0, 1)");
  }
  if (cfg.max_sweeps < 1) throw DomainError("max_sweeps must be >= 1");
  if (cfg.check_every < 1) throw DomainError("check_every must be >= 1");
  if (cfg.sample_stride < 1) throw DomainError("sample_stride must be >= 1");
  if (cfg.block_weights && cfg.block_weights->size() != m) {
    throw DomainError("block_weights must have one entry per row");
  }
}

std::vector<double> squared_row_norms(const Matrix& a) {
  std::vector<double> sq(a.rows());
  double max_norm = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * row[j];
    sq[i] = s;
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  double tol = static_cast<double>(a.cols()) * kEps * max_norm;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (std::sqrt(sq[i]) <= tol) {
      throw ZeroRow("zero row " + std::to_string(i + 1), i + 1);
    }
  }
  return sq;
}

class HistoryRecorder {
 public:
  HistoryRecorder(const Matrix& a, const Vector& b, const SolverConfig& cfg)
      : a_(a), b_(b), cfg_(cfg) {}

  void record_error(std::size_t sweep, const Vector& approx) {
    if (!cfg_.reference) return;
    if (!trace_.error_history.empty() && trace_.error_history.back().first == sweep) {
      return;
    }
    const Vector& ref = *cfg_.reference;
    double scale = std::max(norm(ref), kEps);
    trace_.error_history.emplace_back(sweep, norm(approx - ref) / scale);
  }

  // Returns the residual when a check happened at this sweep.
  std::optional<double> maybe_check(std::size_t sweep, const Vector& approx,
                                    bool force) {
    if (!force && sweep % cfg_.check_every != 0) return std::nullopt;
    double r = residual(a_, approx, b_);
    if (trace_.residual_history.empty() ||
        trace_.residual_history.back().first != sweep) {
      trace_.residual_history.emplace_back(sweep, r);
    }
    return r;
  }

  void record_iterate(const Vector& x) {
    if (cfg_.trace_mode != TraceMode::none) trace_.iterates.push_back(x);
  }
  void record_step_iterate(const Vector& x) {
    if (cfg_.trace_mode == TraceMode::full) trace_.iterates.push_back(x);
  }
  void record_boundary_iterate(const Vector& x) {
    if (cfg_.trace_mode == TraceMode::boundary) trace_.iterates.push_back(x);
  }

  bool wants_error_row(std::size_t sweep) const {
    return cfg_.reference && sweep % cfg_.sample_stride == 0;
  }

  Trace take() { return std::move(trace_); }

 private:
  const Matrix& a_;
  const Vector& b_;
  const SolverConfig& cfg_;
  Trace trace_;
};

std::pair<SolveResult, Trace> run_row_action(const Matrix& a, const Vector& b,
                                             const Vector& x0,
                                             const SolverConfig& cfg,
                                             const Scheme& scheme) {
  if (x0.dim() != a.cols() || b.dim() != a.rows()) {
    throw DomainError("solver dimension mismatch");
  }
  validate(cfg, a.rows());
  std::vector<double> row_sq = squared_row_norms(a);
  std::size_t m = a.rows(), n = a.cols();

  Rng rng(cfg.seed);
  RowSampler sampler(a);

  Vector x = x0;
  Vector avg = x0;
  std::size_t avg_count = 1;
  const bool averaging = scheme.averaging != Averaging::none;
  auto current = [&]() -> const Vector& { return averaging ? avg : x; };

  HistoryRecorder rec(a, b, cfg);
  rec.record_iterate(x);
  rec.record_error(0, current());

  StopReason stop = StopReason::max_sweeps;
  std::size_t sweeps = 0;
  double last_residual = residual(a, current(), b);

  for (std::size_t s = 1; s <= cfg.max_sweeps; ++s) {
    for (std::size_t t = 0; t < m; ++t) {
      std::size_t i = scheme.randomized ? sampler.draw(rng) : t;
      const double* row = a.row_ptr(i);
      double ax = 0.0;
      for (std::size_t j = 0; j < n; ++j) ax += row[j] * x[j];
      double c = scheme.alpha * (b[i] - ax) / row_sq[i];
      for (std::size_t j = 0; j < n; ++j) x[j] += c * row[j];
      if (scheme.averaging == Averaging::every_step) {
        ++avg_count;
        double inv = 1.0 / static_cast<double>(avg_count);
        for (std::size_t j = 0; j < n; ++j) avg[j] += (x[j] - avg[j]) * inv;
      }
      rec.record_step_iterate(x);
    }
    if (scheme.averaging == Averaging::outer) {
      ++avg_count;
      double inv = 1.0 / static_cast<double>(avg_count);
      for (std::size_t j = 0; j < n; ++j) avg[j] += (x[j] - avg[j]) * inv;
    }
    rec.record_boundary_iterate(x);
    sweeps = s;

    bool last = (s == cfg.max_sweeps);
    if (rec.wants_error_row(s) || last) rec.record_error(s, current());
    std::optional<double> r = rec.maybe_check(s, current(), last);
    if (r) {
      last_residual = *r;
      if (*r <= cfg.epsilon) {
        stop = StopReason::target_met;
        rec.record_error(s, current());
        break;
      }
    }
  }

  SolveResult result{current(), sweeps, last_residual, stop};
  return {std::move(result), rec.take()};
}

}  // namespace

const char* variant_name(Variant v) {
  return kVariantNames[static_cast<int>(v)];
}

Variant variant_from_name(const std::string& name) {
  for (int i = 0; i < 5; ++i) {
    if (name == kVariantNames[i]) return static_cast<Variant>(i);
  }
  throw DomainError("unknown variant: " + name);
}

double residual(const Matrix& a, const Vector& x, const Vector& b) {
  if (x.dim() != a.cols() || b.dim() != a.rows()) {
    throw DomainError("residual dimension mismatch");
  }
  return norm(a * x - b) / std::max(norm(b), kEps);
}

std::pair<SolveResult, Trace> solve_reflective_outer(const Matrix& a,
                                                     const Vector& b,
                                                     const Vector& x0,
                                                     const SolverConfig& cfg) {
  return run_row_action(a, b, x0, cfg, {2.0, false, Averaging::outer});
}

std::pair<SolveResult, Trace> solve_reflective_running(const Matrix& a,
                                                       const Vector& b,
                                                       const Vector& x0,
                                                       const SolverConfig& cfg) {
  return run_row_action(a, b, x0, cfg, {2.0, false, Averaging::every_step});
}

std::pair<SolveResult, Trace> solve_sv(const Matrix& a, const Vector& b,
                                       const Vector& x0, const SolverConfig& cfg) {
  return run_row_action(a, b, x0, cfg, {1.0, true, Averaging::none});
}

std::pair<SolveResult, Trace> solve_steinerberger(const Matrix& a, const Vector& b,
                                                  const Vector& x0,
                                                  const SolverConfig& cfg) {
  return run_row_action(a, b, x0, cfg, {2.0, true, Averaging::every_step});
}

std::pair<SolveResult, Trace> solve_mtmn(const Matrix& a, const Vector& b,
                                         const Vector& x0, const SolverConfig& cfg) {
  if (x0.dim() != a.cols() || b.dim() != a.rows()) {
    throw DomainError("solver dimension mismatch");
  }
  validate(cfg, a.rows());
  std::vector<double> row_sq = squared_row_norms(a);
  std::size_t n = a.cols();

  double fro_sq = 0.0;
  for (double s : row_sq) fro_sq += s;
  double smax = singular_values(a)[0];
  std::size_t block = static_cast<std::size_t>(std::ceil(fro_sq / (smax * smax)));
  block = std::max<std::size_t>(block, 1);

  Rng rng(cfg.seed);
  RowSampler sampler(a);
  Vector x = x0;
  Vector delta(n);

  HistoryRecorder rec(a, b, cfg);
  rec.record_iterate(x);
  rec.record_error(0, x);

  StopReason stop = StopReason::max_sweeps;
  std::size_t sweeps = 0;
  double last_residual = residual(a, x, b);

  for (std::size_t s = 1; s <= cfg.max_sweeps; ++s) {
    for (std::size_t j = 0; j < n; ++j) delta[j] = 0.0;
    for (std::size_t d = 0; d < block; ++d) {
      std::size_t i = sampler.draw(rng);
      double w = cfg.block_weights ? (*cfg.block_weights)[i] : 0.5;
      const double* row = a.row_ptr(i);
      double ax = 0.0;
      for (std::size_t j = 0; j < n; ++j) ax += row[j] * x[j];
      double c = w * (b[i] - ax) / row_sq[i];
      for (std::size_t j = 0; j < n; ++j) delta[j] += c * row[j];
    }
    for (std::size_t j = 0; j < n; ++j) x[j] += cfg.block_alpha * delta[j];
    rec.record_step_iterate(x);
    rec.record_boundary_iterate(x);
    sweeps = s;

    bool last = (s == cfg.max_sweeps);
    if (rec.wants_error_row(s) || last) rec.record_error(s, x);
    std::optional<double> r = rec.maybe_check(s, x, last);
    if (r) {
      last_residual = *r;
      if (*r <= cfg.epsilon) {
        stop = StopReason::target_met;
        rec.record_error(s, x);
        break;
      }
    }
  }

  SolveResult result{x, sweeps, last_residual, stop};
  return {std::move(result), rec.take()};
}

std::pair<SolveResult, Trace> solve(const Matrix& a, const Vector& b,
                                    const Vector& x0, const SolverConfig& cfg) {
  switch (cfg.variant) {
    case Variant::reflective_outer:
      return solve_reflective_outer(a, b, x0, cfg);
    case Variant::reflective_running:
      return solve_reflective_running(a, b, x0, cfg);
    case Variant::sv_randomized:
      return solve_sv(a, b, x0, cfg);
    case Variant::mtmn_block:
      return solve_mtmn(a, b, x0, cfg);
    case Variant::steinerberger:
      return solve_steinerberger(a, b, x0, cfg);
  }
  throw DomainError("unknown variant");
}

std::pair<SolveResult, Trace> solve(const Matrix& a, const Vector& b,
                                    const SolverConfig& cfg) {
  return solve(a, b, Vector(a.cols()), cfg);
}

std::vector<Vector> subset_trace(const Trace& trace, std::size_t m,
                                 std::size_t k, std::size_t j) {
  if (m < 1) throw DomainError("subset_trace: m must be >= 1");
  if (k >= m) throw DomainError("subset_trace: k must satisfy 0 <= k < m");
  if (j > 1) throw DomainError("subset_trace: j must be 0 or 1");
  std::vector<Vector> out;
  for (std::size_t i = 0;; ++i) {
    std::size_t idx = k + (2 * i + j) * m;
    if (idx >= trace.iterates.size()) break;
    out.push_back(trace.iterates[idx]);
  }
  if (out.empty()) {
    throw IndexOut("subset_trace: trace too short for a single element");
  }
  return out;
}

}  // namespace kacz
