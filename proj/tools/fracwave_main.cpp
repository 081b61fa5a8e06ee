// fracwave: single solves, convergence studies, Mittag-Leffler values and
// the self-test suite.
//
// Exit codes: 0 success, 1 check failed, 2 bad configuration, 3 resource or
// I/O failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracwave/error.hpp"
#include "fracwave/fracops.hpp"
#include "fracwave/harness.hpp"
#include "fracwave/metrics.hpp"
#include "fracwave/selftest.hpp"
#include "fracwave/solver.hpp"

namespace {

using namespace fracwave;

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

void log_line(const std::string& msg) { std::cerr << "[fracwave] " << msg << '\n'; }

DumpFormat parse_format(const std::string& f) {
  if (f == "csv") return DumpFormat::Csv;
  if (f == "bin") return DumpFormat::Binary;
  throw ConfigError("--format must be csv or bin, got '" + f + "'");
}

struct SolveArgs {
  double alpha = 1.5;
  int example = 1;
  std::size_t J = 256;
  std::size_t N = 63;
  std::string dump;
  std::string format = "csv";
  bool stepping = false;
};

int run_solve(const SolveArgs& a) {
  if (a.example != 1 && a.example != 2) throw ConfigError("--example must be 1 or 2");
  const ProblemSpec p = a.example == 1 ? example1(a.alpha) : example2(a.alpha);
  const DiscreteSystem sys = assemble_system(p, TemporalGrid::uniform(a.J), SpatialMesh::uniform(a.N));
  const SolutionField U = a.stepping ? solve_stepping(sys) : solve_fast_dnc(sys);
  const TridiagonalOperator A = assemble_stiffness(U.space);
  double peak = 0.0;
  for (std::size_t j = 0; j < U.rows(); ++j) peak = std::max(peak, A.quadratic_form(U.row(j)));
  std::printf("J=%zu N=%zu alpha=%g max_t|U|_H1=%.10e residual=%.3e\n", a.J, a.N, a.alpha,
              std::sqrt(peak), relative_residual(sys, U));
  if (!a.dump.empty()) {
    write_solution(a.dump, U, parse_format(a.format));
    log_line("wrote " + a.dump);
  }
  return 0;
}

struct StudyArgs {
  std::string config;
  std::vector<double> alphas;
  std::optional<int> example;
  std::optional<std::string> vary;
  std::optional<std::string> levels;
  std::optional<std::size_t> J, N, ref_J, ref_N;
  std::optional<std::string> ref_kind;
  std::optional<std::string> e2;
  std::optional<std::string> csv;
  std::optional<std::string> plot_dir;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
  bool check = false;
};

int run_study(const StudyArgs& a) {
  StudyConfig cfg = a.config.empty() ? StudyConfig{} : StudyConfig::from_json_file(a.config);
  if (!a.alphas.empty()) cfg.alphas = a.alphas;
  if (a.example) cfg.example = *a.example;
  if (a.vary) cfg.vary = parse_axis(*a.vary);
  if (a.levels) std::tie(cfg.level_min, cfg.level_max) = parse_level_range(*a.levels);
  if (a.J) cfg.fixed_time_exponent = time_exponent(*a.J, "--J");
  if (a.N) cfg.fixed_space_exponent = space_exponent(*a.N, "--N");
  if (a.ref_J) cfg.ref_time_exponent = time_exponent(*a.ref_J, "--ref-J");
  if (a.ref_N) cfg.ref_space_exponent = space_exponent(*a.ref_N, "--ref-N");
  if (a.ref_kind) cfg.ref_kind = parse_reference_kind(*a.ref_kind);
  if (a.e2) {
    if (*a.e2 == "cell-quadrature") {
      cfg.e2_method = FracNormMethod::CellQuadrature;
    } else if (*a.e2 == "cell-average") {
      cfg.e2_method = FracNormMethod::CellAverage;
    } else {
      throw ConfigError("--e2 must be cell-quadrature or cell-average");
    }
  }
  if (a.csv) cfg.csv = *a.csv;
  if (a.plot_dir) cfg.plot_dir = *a.plot_dir;
  if (a.threads) cfg.threads = *a.threads;
  if (a.seed) cfg.seed = *a.seed;

  const auto reports = run_convergence_study(cfg, log_line);
  if (cfg.csv.empty()) {
    std::cout << format_report_csv(reports);
  }
  emit_outputs(reports, cfg.csv, cfg.plot_dir);

  if (!a.check) return 0;
  bool ok = true;
  for (const auto& r : reports) {
    for (const bool e2 : {false, true}) {
      const auto& orders = e2 ? r.order_E2 : r.order_E1;
      if (orders.empty()) continue;
      const PredictedOrder want = predicted_order(r.example, r.vary, r.alpha, e2);
      const double got = orders.back();
      const bool pass = std::abs(got - want.order) <= want.band;
      ok = ok && pass;
      std::printf("%s alpha=%g %s order %.4f expected %.4f +- %.2f\n", pass ? "PASS" : "FAIL",
                  r.alpha, e2 ? "E2" : "E1", got, want.order, want.band);
    }
  }
  return ok ? 0 : kExitCheckFailed;
}

int run_ml(double alpha, double beta, const std::vector<double>& zs) {
  const MittagLefflerParams p{alpha, beta};
  p.validate();
  for (double z : zs) {
    MittagLefflerBranch b{};
    const double v = mittag_leffler(p, z, b);
    const char* name = b == MittagLefflerBranch::Series ? "series"
                       : b == MittagLefflerBranch::Asymptotic ? "asymptotic"
                                                             : "branch-cut";
    std::printf("%.17g %.17g %s\n", z, v, name);
  }
  return 0;
}

int run_selftest_cmd(std::uint64_t seed, bool inject) {
  const SelftestSummary s = run_selftest({seed, inject});
  std::cout << s.text();
  return s.passed() ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Petrov-Galerkin solver for the time-fractional wave equation"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* sc = app.add_subcommand("solve", "Solve one example problem and optionally dump U");
  sc->add_option("--alpha", solve.alpha, "Fractional order in (1, 2)");
  sc->add_option("--example", solve.example, "Source term: 1 or 2");
  sc->add_option("--J", solve.J, "Number of time steps");
  sc->add_option("--N", solve.N, "Number of interior spatial nodes");
  sc->add_option("--dump", solve.dump, "Write the coefficient array to this file");
  sc->add_option("--format", solve.format, "Dump format: csv or bin");
  sc->add_flag("--stepping", solve.stepping, "Use direct time stepping instead of the fast solver");

  StudyArgs study;
  auto* cc = app.add_subcommand("convergence", "Run a refinement study against a reference");
  cc->add_option("--config", study.config, "JSON file with the same keys as the flags");
  cc->add_option("--alpha", study.alphas, "Fractional orders (repeatable)")->delimiter(',');
  cc->add_option("--example", study.example, "Source term: 1 or 2");
  cc->add_option("--vary", study.vary, "Refined axis: space or time");
  cc->add_option("--levels", study.levels, "Dyadic exponent range, e.g. 4-7");
  cc->add_option("--J", study.J, "Time steps held by a space study (power of two)");
  cc->add_option("--N", study.N, "Interior nodes held by a time study (2^k - 1)");
  cc->add_option("--ref-J", study.ref_J, "Reference time steps (power of two)");
  cc->add_option("--ref-N", study.ref_N, "Reference interior nodes (2^k - 1)");
  cc->add_option("--ref-kind", study.ref_kind, "fine-grid or spectral");
  cc->add_option("--e2", study.e2, "E2 evaluation: cell-quadrature or cell-average");
  cc->add_option("--csv", study.csv, "Report CSV path (default: standard output)");
  cc->add_option("--plot-dir", study.plot_dir, "Directory for two-column plot data");
  cc->add_option("--threads", study.threads, "Worker threads");
  cc->add_option("--seed", study.seed, "Seed for randomized parts");
  cc->add_flag("--check", study.check, "Compare finest-pair orders with the predicted rates");

  double ml_alpha = 1.5, ml_beta = 1.0;
  std::vector<double> ml_z;
  auto* mc = app.add_subcommand("ml", "Evaluate the Mittag-Leffler function E_{alpha,beta}(z)");
  mc->add_option("--alpha", ml_alpha, "alpha in (0, 2]");
  mc->add_option("--beta", ml_beta, "beta > 0");
  mc->add_option("z", ml_z, "Arguments")->required();

  std::uint64_t st_seed = 0;
  bool st_inject = false;
  auto* tc = app.add_subcommand("selftest", "Run the built-in property suites");
  tc->add_option("--seed", st_seed, "Seed for the random inputs");
  tc->add_flag("--inject-fault", st_inject, "Perturb kappa_1 in the fast solver");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sc) return run_solve(solve);
    if (*cc) return run_study(study);
    if (*mc) return run_ml(ml_alpha, ml_beta, ml_z);
    if (*tc) return run_selftest_cmd(st_seed, st_inject);
  } catch (const ConfigError& e) {
    log_line(std::string("configuration error: ") + e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    log_line(std::string("configuration error: ") + e.what());
    return kExitConfig;
  } catch (const ResourceError& e) {
    log_line(std::string("resource error: ") + e.what());
    return kExitResource;
  } catch (const IoError& e) {
    log_line(std::string("I/O error: ") + e.what());
    return kExitResource;
  } catch (const std::exception& e) {
    log_line(std::string("error: ") + e.what());
    return kExitResource;
  }
  return 0;
}
