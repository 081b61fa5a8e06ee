#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracwave/metrics.hpp"
#include "fracwave/scheme.hpp"
#include "fracwave/solver.hpp"

namespace fracwave {

enum class ReferenceKind { FineGrid, Spectral };

[[nodiscard]] std::string to_string(ReferenceKind kind);
[[nodiscard]] ReferenceKind parse_reference_kind(const std::string& text);

/// A refinement study. Grid sizes are dyadic exponents: level k means
/// h = 2^-k (N = 2^k - 1) on the space axis and tau = 2^-k (J = 2^k) on the
/// time axis. The other axis is held fixed.
struct StudyConfig {
  std::vector<double> alphas{1.5};
  int example = 1;
  StudyAxis vary = StudyAxis::Space;
  int level_min = 4;
  int level_max = 7;
  /// tau = 2^-e held by space studies; default 12.
  std::optional<int> fixed_time_exponent;
  /// h = 2^-e held by time studies; default 9.
  std::optional<int> fixed_space_exponent;
  int ref_time_exponent = 13;
  int ref_space_exponent = 9;
  ReferenceKind ref_kind = ReferenceKind::FineGrid;
  double spectral_tol = 1e-6;
  std::size_t spectral_modes = std::size_t{1} << 15;
  FracNormMethod e2_method = FracNormMethod::CellQuadrature;
  std::filesystem::path csv;       ///< empty: no CSV
  std::filesystem::path plot_dir;  ///< empty: no plot data
  std::size_t threads = 1;
  std::uint64_t seed = 0;

  [[nodiscard]] int fixed() const;
  [[nodiscard]] ProblemSpec problem(double alpha) const;

  /// ConfigError naming the offending field.
  void validate() const;

  /// Keys mirror the CLI flags: alpha (number or list), example, vary,
  /// levels ("4-7" or [4, 7]), J, N, ref_J, ref_N (grid counts: J = 2^k,
  /// N = 2^k - 1), ref_kind, spectral_tol, spectral_modes, e2, csv,
  /// plot_dir, threads, seed. Unknown keys are a ConfigError.
  [[nodiscard]] static StudyConfig from_json(const std::string& text);
  [[nodiscard]] static StudyConfig from_json_file(const std::filesystem::path& path);
};

/// k with J = 2^k; ConfigError naming `what` otherwise.
[[nodiscard]] int time_exponent(std::size_t J, const std::string& what);
/// k with N = 2^k - 1; ConfigError naming `what` otherwise.
[[nodiscard]] int space_exponent(std::size_t N, const std::string& what);

/// Rate predicted for the finest pair of a study and the acceptance band
/// around it.
struct PredictedOrder {
  double order = 0.0;
  double band = 0.1;
};
[[nodiscard]] PredictedOrder predicted_order(int example, StudyAxis vary, double alpha,
                                             bool e2);

/// "4-7" or "5" into (min, max); ConfigError otherwise.
[[nodiscard]] std::pair<int, int> parse_level_range(const std::string& text);

/// Progress messages; may be empty.
using LogSink = std::function<void(const std::string&)>;

/// Bytes a study needs at its peak, dominated by the reference field and the
/// prolonged differences.
[[nodiscard]] std::size_t estimate_study_memory(const StudyConfig& cfg);

/// One report per alpha, in the order of cfg.alphas. Deterministic; levels
/// and alpha values are spread over cfg.threads workers. ResourceError when
/// the reference does not fit into available memory.
[[nodiscard]] std::vector<ConvergenceReport> run_convergence_study(const StudyConfig& cfg,
                                                                   const LogSink& log = {});

/// CSV with header alpha,example,vary,level,tau,h,E1,E2,order_E1,order_E2.
/// The order cells of the first level of every report are empty.
[[nodiscard]] std::string format_report_csv(const std::vector<ConvergenceReport>& reports);
/// Inverse of format_report_csv; IoError on malformed input.
[[nodiscard]] std::vector<ConvergenceReport> parse_report_csv(const std::string& text);

/// Writes the CSV and, when plot_dir is given, one two-column file
/// (step, error) per report and error functional.
void emit_outputs(const std::vector<ConvergenceReport>& reports,
                  const std::filesystem::path& csv, const std::filesystem::path& plot_dir = {});

/// Solve one problem with the fast solver.
[[nodiscard]] SolutionField solve_problem(const ProblemSpec& p, std::size_t J, std::size_t N);

}  // namespace fracwave
