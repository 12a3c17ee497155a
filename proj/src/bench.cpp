#include "kacz/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "kacz/errors.hpp"
#include "kacz/linalg.hpp"
#include "kacz/reflect.hpp"
#include "kacz/rng.hpp"
#include "kacz/spectral.hpp"

namespace kacz {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = std::numeric_limits<double>::epsilon();

const char* variant_color(const std::string& name) {
  if (name == "sv_randomized") return "black";
  if (name == "mtmn_block") return "purple";
  if (name == "steinerberger") return "red";
  if (name == "reflective_outer") return "green";
  if (name == "reflective_running") return "blue";
  return "gray";
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << body;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_csv_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw MalformedCsv("bad numeric field '" + s + "' in " + context);
  }
  return v;
}

std::size_t parse_csv_size(const std::string& s, const std::string& context) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw MalformedCsv("bad integer field '" + s + "' in " + context);
  }
  return v;
}

struct ComparisonRow {
  std::size_t trial;
  std::string variant;
  std::size_t sweep;
  double error;
};

std::string render_comparison_csv(std::vector<ComparisonRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const ComparisonRow& a, const ComparisonRow& b) {
              if (a.trial != b.trial) return a.trial < b.trial;
              if (a.variant != b.variant) return a.variant < b.variant;
              return a.sweep < b.sweep;
            });
  std::string body = "trial,variant,sweep_count,relative_error\n";
  for (const ComparisonRow& r : rows) {
    body += std::to_string(r.trial);
    body += ',';
    body += r.variant;
    body += ',';
    body += std::to_string(r.sweep);
    body += ',';
    body += format_double(r.error);
    body += '\n';
  }
  return body;
}

// --- SVG rendering -------------------------------------------------------

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> pts;  // (x, y), y plotted on log10
};

std::string fmt2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double nice_step(double raw) {
  if (!(raw > 0.0)) return 1.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double frac = raw / mag;
  double nice = frac <= 1.0 ? 1.0 : frac <= 2.0 ? 2.0 : frac <= 5.0 ? 5.0 : 10.0;
  return nice * mag;
}

std::string render_log_plot(const std::vector<Series>& series,
                            const std::string& x_label,
                            const std::string& y_label) {
  const double width = 960, height = 600;
  const double left = 80, right = width - 180, top = 30, bottom = height - 60;

  double xmin = 0.0, xmax = 1.0;
  double ymin_pos = std::numeric_limits<double>::infinity();
  double ymax_pos = 0.0;
  bool any = false;
  for (const Series& s : series) {
    for (auto [x, y] : s.pts) {
      any = true;
      xmax = std::max(xmax, x);
      xmin = std::min(xmin, x);
      if (y > 0.0 && std::isfinite(y)) {
        ymin_pos = std::min(ymin_pos, y);
        ymax_pos = std::max(ymax_pos, y);
      }
    }
  }
  if (!any) throw MalformedCsv("no data rows to plot");
  if (!(ymax_pos > 0.0)) {
    ymin_pos = 0.1;
    ymax_pos = 10.0;
  }
  int lo = static_cast<int>(std::floor(std::log10(ymin_pos))) - 1;
  int hi = static_cast<int>(std::ceil(std::log10(ymax_pos)));
  if (hi <= lo) hi = lo + 2;

  auto sx = [&](double x) {
    return left + (x - xmin) / (xmax - xmin) * (right - left);
  };
  auto sy = [&](double y) {
    double ly = y > 0.0 ? std::log10(y) : static_cast<double>(lo);
    ly = std::clamp(ly, static_cast<double>(lo), static_cast<double>(hi));
    return bottom - (ly - lo) / (hi - lo) * (bottom - top);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" "
         "height=\"600\" viewBox=\"0 0 960 600\">\n";
  svg += "<rect width=\"960\" height=\"600\" fill=\"white\"/>\n";

  for (int p = lo; p <= hi; ++p) {
    double y = sy(std::pow(10.0, p));
    svg += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(y) + "\" x2=\"" +
           fmt2(right) + "\" y2=\"" + fmt2(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt2(left - 8) + "\" y=\"" + fmt2(y + 4) +
           "\" font-family=\"monospace\" font-size=\"12\" "
           "text-anchor=\"end\">1e" +
           std::to_string(p) + "</text>\n";
  }
  double xstep = nice_step((xmax - xmin) / 5.0);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep;
       t += xstep) {
    double x = sx(t);
    svg += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(bottom) + "\" x2=\"" +
           fmt2(x) + "\" y2=\"" + fmt2(bottom + 5) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(bottom + 20) +
           "\" font-family=\"monospace\" font-size=\"12\" "
           "text-anchor=\"middle\">" +
           fmt_tick(t) + "</text>\n";
  }
  svg += "<rect x=\"" + fmt2(left) + "\" y=\"" + fmt2(top) + "\" width=\"" +
         fmt2(right - left) + "\" height=\"" + fmt2(bottom - top) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + fmt2((left + right) / 2) + "\" y=\"" +
         fmt2(height - 15) +
         "\" font-family=\"monospace\" font-size=\"13\" "
         "text-anchor=\"middle\">" +
         x_label + "</text>\n";
  svg += "<text x=\"20\" y=\"" + fmt2((top + bottom) / 2) +
         "\" font-family=\"monospace\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         fmt2((top + bottom) / 2) + ")\">" + y_label + "</text>\n";

  for (const Series& s : series) {
    std::vector<std::pair<double, double>> pts = s.pts;
    const std::size_t cap = 2000;
    if (pts.size() > cap) {
      std::vector<std::pair<double, double>> kept;
      std::size_t stride = (pts.size() + cap - 1) / cap;
      for (std::size_t i = 0; i < pts.size(); i += stride) kept.push_back(pts[i]);
      if (kept.back() != pts.back()) kept.push_back(pts.back());
      pts = std::move(kept);
    }
    svg += "<polyline fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) svg += ' ';
      svg += fmt2(sx(pts[i].first)) + "," + fmt2(sy(pts[i].second));
    }
    svg += "\"/>\n";
  }

  // Legend: one entry per distinct label, in first-appearance order.
  std::vector<std::pair<std::string, std::string>> legend;
  for (const Series& s : series) {
    bool seen = false;
    for (auto& [lab, col] : legend) {
      if (lab == s.label) seen = true;
    }
    if (!seen) legend.emplace_back(s.label, s.color);
  }
  double ly = top + 10;
  for (auto& [lab, col] : legend) {
    svg += "<line x1=\"" + fmt2(right + 10) + "\" y1=\"" + fmt2(ly) +
           "\" x2=\"" + fmt2(right + 40) + "\" y2=\"" + fmt2(ly) +
           "\" stroke=\"" + col + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt2(right + 46) + "\" y=\"" + fmt2(ly + 4) +
           "\" font-family=\"monospace\" font-size=\"12\">" + lab +
           "</text>\n";
    ly += 18;
  }

  svg += "</svg>\n";
  return svg;
}

std::string render_convergence_svg(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) ||
      split_csv_line(line) !=
          std::vector<std::string>{"trial", "variant", "sweep_count",
                                   "relative_error"}) {
    throw MalformedCsv("expected header trial,variant,sweep_count,relative_error");
  }
  std::vector<ComparisonRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 4) throw MalformedCsv("expected 4 fields, got line: " + line);
    rows.push_back({parse_csv_size(f[0], "trial column"), f[1],
                    parse_csv_size(f[2], "sweep_count column"),
                    parse_csv_double(f[3], "relative_error column")});
  }
  if (rows.empty()) throw MalformedCsv("empty data section");

  // One polyline per (trial, variant) run of rows, preserving CSV order.
  std::vector<Series> series;
  std::size_t cur_trial = 0;
  std::string cur_variant;
  bool open = false;
  for (const ComparisonRow& r : rows) {
    if (!open || r.trial != cur_trial || r.variant != cur_variant) {
      series.push_back({r.variant, variant_color(r.variant), {}});
      cur_trial = r.trial;
      cur_variant = r.variant;
      open = true;
    }
    series.back().pts.emplace_back(static_cast<double>(r.sweep), r.error);
  }
  return render_log_plot(series, "sweeps", "relative error");
}

std::string render_spectral_svg(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) ||
      split_csv_line(line) !=
          std::vector<std::string>{"x", "y", "z", "inv_theta_min", "kappa",
                                   "kappa_sq", "margin"}) {
    throw MalformedCsv(
        "expected header x,y,z,inv_theta_min,kappa,kappa_sq,margin");
  }
  Series inv{"1/theta_min", "blue", {}};
  Series kappa{"kappa", "red", {}};
  std::size_t idx = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 7) throw MalformedCsv("expected 7 fields, got line: " + line);
    inv.pts.emplace_back(static_cast<double>(idx),
                         parse_csv_double(f[3], "inv_theta_min column"));
    kappa.pts.emplace_back(static_cast<double>(idx),
                           parse_csv_double(f[4], "kappa column"));
    ++idx;
  }
  if (idx == 0) throw MalformedCsv("empty data section");
  return render_log_plot({inv, kappa}, "grid index", "value");
}

std::string appendix_row(double x, double y, double z, const Matrix& a) {
  SpectralReport rep = eigenphases(composite_reflection(a));
  if (!rep.theta_min_nonzero) throw DomainError("all phases vanish");
  double theta = *rep.theta_min_nonzero;
  double kappa = condition_number(a);
  Matrix w = gram_lower_triangular(a);
  double w_norm = singular_values(w)[0];
  Vector sv = singular_values(a);
  double smin = sv[sv.dim() - 1];
  double margin = std::sin(theta / 2.0) * w_norm / (smin * smin);
  std::string row = format_double(x) + "," + format_double(y) + "," +
                    format_double(z) + "," + format_double(1.0 / theta) + "," +
                    format_double(kappa) + "," + format_double(kappa * kappa) +
                    "," + format_double(margin);
  return row;
}

std::string render_appendix_csv(const std::vector<std::array<double, 3>>& pts) {
  std::string body = "x,y,z,inv_theta_min,kappa,kappa_sq,margin\n";
  for (const auto& p : pts) {
    try {
      Matrix a = polar_matrix({p[0], p[1], p[2]}, 3);
      body += appendix_row(p[0], p[1], p[2], a);
      body += '\n';
    } catch (const Error& e) {
      std::cerr << "appendix-a: skipping x=" << p[0] << " y=" << p[1]
                << " z=" << p[2] << ": " << e.what() << "\n";
    }
  }
  return body;
}

}  // namespace

std::size_t worker_count() {
  if (const char* env = std::getenv("KACZ_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

std::vector<double> range_values(const Range& r) {
  if (!(r.step > 0.0)) throw DomainError("range step must be > 0");
  if (!(r.start <= r.stop)) throw DomainError("range start must be <= stop");
  std::size_t count =
      static_cast<std::size_t>(std::floor((r.stop - r.start) / r.step + 1e-6)) +
      1;
  std::vector<double> vals(count);
  for (std::size_t i = 0; i < count; ++i) {
    vals[i] = r.start + static_cast<double>(i) * r.step;
  }
  return vals;
}

Matrix polar_matrix(const std::vector<double>& angles, std::size_t n) {
  if (n < 1) throw DomainError("polar_matrix: n must be >= 1");
  Matrix a(n, n);
  if (angles.size() == 3) {
    if (n != 3) throw DomainError("three-angle polar matrices are 3x3");
    double x = angles[0], y = angles[1], z = angles[2];
    a(0, 0) = 1.0;
    a(1, 0) = std::cos(x);
    a(1, 1) = std::sin(x);
    a(2, 0) = std::cos(y) * std::cos(z);
    a(2, 1) = std::cos(y) * std::sin(z);
    a(2, 2) = std::sin(y);
  } else if (angles.size() == 1) {
    double x = angles[0];
    a(0, 0) = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) a(i, j) = std::cos(x) * a(i - 1, j);
      a(i, i) = std::sin(x);
    }
  } else {
    throw DomainError("polar_matrix expects 1 or 3 angles");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * a(i, j);
    if (std::sqrt(s) <= static_cast<double>(n) * kEps) {
      throw ZeroRow("polar row " + std::to_string(i + 1) + " vanishes", i + 1);
    }
  }
  return a;
}

RandomSystem gen_random_system(std::size_t n, std::size_t m, std::uint64_t seed,
                               SystemKind kind) {
  if (n < 1 || m < 1) throw DomainError("system dimensions must be >= 1");
  Rng rng(seed);
  if (kind == SystemKind::polar) {
    if (m != n) throw DomainError("polar systems are square");
    double x = 0.01 + rng.uniform01() * (kPi / 2.0 - 0.01);
    Matrix a = polar_matrix({x}, n);
    Vector x_star(n);
    for (std::size_t j = 0; j < n; ++j) x_star[j] = rng.normal();
    Vector b = a * x_star;
    return {std::move(a), std::move(b), std::move(x_star)};
  }
  Matrix a(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  for (int pass = 0; pass < 100; ++pass) {
    double max_norm = 0.0;
    std::vector<double> norms(m);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * a(i, j);
      norms[i] = std::sqrt(s);
      max_norm = std::max(max_norm, norms[i]);
    }
    double tol = static_cast<double>(n) * kEps * max_norm;
    bool clean = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (norms[i] <= tol) {
        clean = false;
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
      }
    }
    if (clean) break;
  }
  Vector x_star(n);
  for (std::size_t j = 0; j < n; ++j) x_star[j] = rng.normal();
  Vector b = a * x_star;
  return {std::move(a), std::move(b), std::move(x_star)};
}

void run_comparison(const BenchSpec& spec) {
  if (spec.n < 1) throw DomainError("bench: n must be >= 1");
  if (spec.trials < 1) throw DomainError("bench: trials must be >= 1");
  if (spec.variants.empty()) throw DomainError("bench: variants must be nonempty");
  if (spec.output_path.empty()) throw DomainError("bench: output path required");
  std::size_t m = spec.m ? spec.m : spec.n;

  std::vector<Variant> variants = spec.variants;
  std::sort(variants.begin(), variants.end(), [](Variant a, Variant b) {
    return std::string(variant_name(a)) < variant_name(b);
  });
  variants.erase(std::unique(variants.begin(), variants.end()), variants.end());

  std::vector<std::vector<ComparisonRow>> per_trial(spec.trials);
  std::atomic<std::size_t> next{0};
  std::mutex fail_mu;
  std::exception_ptr failure;

  auto work = [&]() {
    for (;;) {
      std::size_t t = next.fetch_add(1);
      if (t >= spec.trials) return;
      try {
        Rng stream = Rng::stream(spec.seed, t);
        std::uint64_t system_seed = stream.raw();
        std::uint64_t variant_seed[5];
        for (int v = 0; v < 5; ++v) variant_seed[v] = stream.raw();

        RandomSystem sys = gen_random_system(spec.n, m, system_seed, spec.kind);
        for (Variant v : variants) {
          SolverConfig cfg;
          cfg.variant = v;
          cfg.epsilon = spec.epsilon;
          cfg.max_sweeps = spec.max_sweeps;
          cfg.seed = variant_seed[static_cast<int>(v)];
          cfg.check_every = spec.check_every;
          cfg.sample_stride = spec.sample_stride;
          cfg.reference = sys.x_star;
          auto [result, trace] = solve(sys.a, sys.b, cfg);
          (void)result;
          for (auto [sweep, err] : trace.error_history) {
            per_trial[t].push_back({t, variant_name(v), sweep, err});
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  std::size_t workers = std::min<std::size_t>(worker_count(), spec.trials);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ComparisonRow> rows;
  for (auto& chunk : per_trial) {
    rows.insert(rows.end(), chunk.begin(), chunk.end());
  }
  write_text_file(spec.output_path, render_comparison_csv(std::move(rows)));
}

void appendix_a_sweep(const PolarGrid& grid, const std::string& out_path) {
  std::vector<std::array<double, 3>> pts;
  for (double x : range_values(grid.x)) {
    for (double y : range_values(grid.y)) {
      for (double z : range_values(grid.z)) {
        pts.push_back({x, y, z});
      }
    }
  }
  write_text_file(out_path, render_appendix_csv(pts));
}

void appendix_a_diag(const Range& range, const std::string& out_path) {
  std::vector<std::array<double, 3>> pts;
  for (double x : range_values(range)) pts.push_back({x, x, x});
  write_text_file(out_path, render_appendix_csv(pts));
}

void emit_plot(const std::string& csv_path, PlotKind kind,
               const std::string& out_path) {
  std::string csv = read_text_file(csv_path);
  std::string svg = kind == PlotKind::convergence ? render_convergence_svg(csv)
                                                  : render_spectral_svg(csv);
  write_text_file(out_path, svg);
}

}  // namespace kacz
