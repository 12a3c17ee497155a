#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kacz/bench.hpp"
#include "kacz/errors.hpp"
#include "kacz/linalg.hpp"
#include "kacz/matrix.hpp"
#include "kacz/reflect.hpp"
#include "kacz/solvers.hpp"
#include "kacz/spectral.hpp"

namespace {

using nlohmann::json;

// Post-parse usage problems; mapped to exit code 1 like CLI11 parse errors.
struct UsageFailure {
  std::string msg;
};

kacz::Range parse_range(const std::string& text) {
  double a = 0, b = 0, s = 0;
  std::string rest = text;
  auto take = [&rest](double& out) {
    std::size_t colon = rest.find(':');
    std::string head = colon == std::string::npos ? rest : rest.substr(0, colon);
    rest = colon == std::string::npos ? "" : rest.substr(colon + 1);
    std::size_t used = 0;
    out = std::stod(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  };
  try {
    take(a);
    take(b);
    take(s);
  } catch (const std::exception&) {
    throw UsageFailure{"expected START:STOP:STEP, got " + text};
  }
  if (!rest.empty()) {
    throw UsageFailure{"expected START:STOP:STEP, got " + text};
  }
  return {a, b, s};
}

std::vector<kacz::Variant> parse_variants(const std::vector<std::string>& names) {
  std::vector<kacz::Variant> out;
  for (const std::string& raw : names) {
    std::string cur;
    for (char c : raw + ",") {
      if (c == ',') {
        if (!cur.empty()) out.push_back(kacz::variant_from_name(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
  }
  return out;
}

void write_solution(const kacz::Vector& x, const std::string& path) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw kacz::IoError("cannot open for writing: " + path);
    out = &file;
  }
  for (std::size_t i = 0; i < x.dim(); ++i) {
    *out << kacz::format_double(x[i]) << "\n";
  }
  if (!*out) throw kacz::IoError("write failed: " + path);
}

int run(int argc, char** argv) {
  CLI::App app{"Reflection-based Kaczmarz solver and benchmark harness"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve A x = b from matrix files");
  std::string matrix_path, rhs_path, x0_path, out_path, variant_name_arg;
  double epsilon = 1e-6;
  std::size_t max_sweeps = 100000;
  std::uint64_t seed = 0;
  solve_cmd->add_option("--matrix", matrix_path, "coefficient matrix file")
      ->required();
  solve_cmd->add_option("--rhs", rhs_path, "right-hand-side vector file")
      ->required();
  solve_cmd->add_option("--x0", x0_path, "starting point file (default 0)");
  solve_cmd->add_option("--variant", variant_name_arg, "solver variant")
      ->required();
  solve_cmd->add_option("--epsilon", epsilon, "target relative residual");
  solve_cmd->add_option("--max-sweeps", max_sweeps, "sweep budget");
  solve_cmd->add_option("--seed", seed, "seed for randomized variants");
  solve_cmd->add_option("--out", out_path, "solution file (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run a multi-variant comparison");
  kacz::BenchSpec spec;
  std::vector<std::string> variant_list;
  std::string kind_name = "gaussian";
  bench_cmd->add_option("--n", spec.n, "columns")->required();
  bench_cmd->add_option("--m", spec.m, "rows (default n)");
  bench_cmd->add_option("--trials", spec.trials, "trial count");
  bench_cmd->add_option("--seed", spec.seed, "base seed");
  bench_cmd->add_option("--epsilon", spec.epsilon, "target relative residual");
  bench_cmd->add_option("--max-sweeps", spec.max_sweeps, "sweep budget");
  bench_cmd
      ->add_option("--variants", variant_list,
                   "comma-separated variant names (default all five)")
      ->delimiter(',');
  bench_cmd->add_option("--out", spec.output_path, "CSV output path")->required();
  bench_cmd->add_option("--sample-stride", spec.sample_stride,
                        "sweeps between recorded error rows");
  bench_cmd->add_option("--check-every", spec.check_every,
                        "sweeps between residual checks");
  bench_cmd->add_option("--kind", kind_name, "system kind: gaussian|polar")
      ->check(CLI::IsMember({"gaussian", "polar"}));

  // spectral
  auto* spectral_cmd =
      app.add_subcommand("spectral", "Eigenphase report for a matrix file");
  std::string spectral_matrix;
  bool as_json = false;
  spectral_cmd->add_option("--matrix", spectral_matrix, "matrix file")
      ->required();
  spectral_cmd->add_flag("--json", as_json, "emit JSON");

  // appendix-a
  auto* appa_cmd =
      app.add_subcommand("appendix-a", "Polar-grid spectral sweep CSV");
  std::string ax, ay, az, adiag, appa_out;
  appa_cmd->add_option("--x", ax, "x range START:STOP:STEP");
  appa_cmd->add_option("--y", ay, "y range START:STOP:STEP");
  appa_cmd->add_option("--z", az, "z range START:STOP:STEP");
  appa_cmd->add_option("--diag", adiag, "x=y=z range START:STOP:STEP");
  appa_cmd->add_option("--out", appa_out, "CSV output path")->required();

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "Render a CSV as a static SVG");
  std::string plot_in, plot_kind, plot_out;
  plot_cmd->add_option("--in", plot_in, "input CSV")->required();
  plot_cmd->add_option("--kind", plot_kind, "convergence|spectral")
      ->required()
      ->check(CLI::IsMember({"convergence", "spectral"}));
  plot_cmd->add_option("--out", plot_out, "output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (solve_cmd->parsed()) {
    kacz::Matrix a = kacz::read_matrix_file(matrix_path);
    kacz::Vector b = kacz::read_vector_file(rhs_path);
    kacz::SolverConfig cfg;
    cfg.variant = kacz::variant_from_name(variant_name_arg);
    cfg.epsilon = epsilon;
    cfg.max_sweeps = max_sweeps;
    cfg.seed = seed;
    kacz::Vector x0 = x0_path.empty() ? kacz::Vector(a.cols())
                                      : kacz::read_vector_file(x0_path);
    auto [result, trace] = kacz::solve(a, b, x0, cfg);
    (void)trace;
    write_solution(result.solution, out_path);
    // Keep stdout machine-readable when it carries the solution itself.
    std::ostream& info = out_path.empty() ? std::cerr : std::cout;
    info << "sweeps: " << result.sweeps_used << "\n";
    info << "relative_residual: "
         << kacz::format_double(result.final_relative_residual) << "\n";
    info << "stopped: "
         << (result.stop_reason == kacz::StopReason::target_met ? "target_met"
                                                                : "max_sweeps")
         << "\n";
    return 0;
  }

  if (bench_cmd->parsed()) {
    if (variant_list.empty()) {
      spec.variants = {kacz::Variant::reflective_outer,
                       kacz::Variant::reflective_running,
                       kacz::Variant::sv_randomized, kacz::Variant::mtmn_block,
                       kacz::Variant::steinerberger};
    } else {
      spec.variants = parse_variants(variant_list);
    }
    spec.kind = kind_name == "polar" ? kacz::SystemKind::polar
                                     : kacz::SystemKind::gaussian;
    kacz::run_comparison(spec);
    return 0;
  }

  if (spectral_cmd->parsed()) {
    kacz::Matrix a = kacz::read_matrix_file(spectral_matrix);
    kacz::SpectralReport rep = kacz::eigenphases(kacz::composite_reflection(a));
    std::optional<double> kappa;
    try {
      kappa = kacz::condition_number(a);
    } catch (const kacz::RankDeficient&) {
    }
    std::optional<double> margin;
    if (rep.theta_min_nonzero && kappa) {
      kacz::Matrix w = kacz::gram_lower_triangular(a);
      kacz::Vector sv = kacz::singular_values(a);
      double smin = sv[sv.dim() - 1];
      margin = std::sin(*rep.theta_min_nonzero / 2.0) *
               kacz::singular_values(w)[0] / (smin * smin);
    }
    if (as_json) {
      json doc;
      doc["phases"] = json::array();
      for (const kacz::PhaseEntry& p : rep.phases) {
        doc["phases"].push_back(
            {{"theta", p.theta}, {"multiplicity", p.multiplicity}});
      }
      doc["theta_min"] = rep.theta_min_nonzero
                             ? json(*rep.theta_min_nonzero)
                             : json(nullptr);
      doc["mult_one"] = rep.mult_one;
      doc["mult_minus_one"] = rep.mult_minus_one;
      doc["kappa"] = kappa ? json(*kappa) : json(nullptr);
      doc["margin"] = margin ? json(*margin) : json(nullptr);
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << "phases (theta multiplicity):\n";
      for (const kacz::PhaseEntry& p : rep.phases) {
        std::cout << "  " << kacz::format_double(p.theta) << " "
                  << p.multiplicity << "\n";
      }
      std::cout << "theta_min: "
                << (rep.theta_min_nonzero
                        ? kacz::format_double(*rep.theta_min_nonzero)
                        : std::string("none"))
                << "\n";
      std::cout << "mult(1): " << rep.mult_one << "\n";
      std::cout << "mult(-1): " << rep.mult_minus_one << "\n";
      std::cout << "kappa: "
                << (kappa ? kacz::format_double(*kappa) : std::string("none"))
                << "\n";
      std::cout << "margin: "
                << (margin ? kacz::format_double(*margin) : std::string("none"))
                << "\n";
    }
    return 0;
  }

  if (appa_cmd->parsed()) {
    if (!adiag.empty()) {
      if (!ax.empty() || !ay.empty() || !az.empty()) {
        throw UsageFailure{"--diag excludes --x/--y/--z"};
      }
      kacz::appendix_a_diag(parse_range(adiag), appa_out);
      return 0;
    }
    if (ax.empty() || ay.empty() || az.empty()) {
      throw UsageFailure{"need --x, --y and --z (or --diag)"};
    }
    kacz::PolarGrid grid{parse_range(ax), parse_range(ay), parse_range(az)};
    kacz::appendix_a_sweep(grid, appa_out);
    return 0;
  }

  if (plot_cmd->parsed()) {
    kacz::PlotKind kind = plot_kind == "convergence"
                              ? kacz::PlotKind::convergence
                              : kacz::PlotKind::spectral;
    kacz::emit_plot(plot_in, kind, plot_out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageFailure& e) {
    std::cerr << "usage error: " << e.msg << "\n";
    return 1;
  } catch (const kacz::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const kacz::MalformedCsv& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const kacz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
