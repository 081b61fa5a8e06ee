#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fracwave/mesh_fem.hpp"
#include "fracwave/tridiagonal.hpp"

namespace fracwave {

/// max over fine time nodes of |d(t_j)|_{H^1}, d = Uref - prolong(U).
/// ConfigError unless the grids nest.
[[nodiscard]] double error_e1(const SolutionField& U, const SolutionField& Uref);

enum class FracNormMethod {
  /// Exact for piecewise-constant w: the singular part of each cell is
  /// integrated in closed form, the history part by Gauss rules whose node
  /// values come from FFT convolutions.
  CellQuadrature,
  /// Cell averages of D^gamma w from the Toeplitz weights: sqrt(sum z_i^T M z_i / tau).
  CellAverage,
};

/// ||D^gamma w||_{L^2(0,T; L^2)} for w piecewise constant in time with values
/// w_i (rows of a J x width array) on cells of length tau, 0 < gamma < 1/2.
/// `mass` gives the spatial inner product; an empty operator means the
/// Euclidean one.
[[nodiscard]] double frac_seminorm(std::span<const double> w, std::size_t width, double gamma,
                                   double tau, const TridiagonalOperator& mass,
                                   FracNormMethod method = FracNormMethod::CellQuadrature);

/// ||D^{(alpha-1)/2} (Uref - prolong U)'||_{L^2(0,T;L^2)} on the fine grids.
[[nodiscard]] double error_e2(const SolutionField& U, const SolutionField& Uref,
                              FracNormMethod method = FracNormMethod::CellQuadrature);

/// Gram matrix g_ij = int_0^T D^gamma chi_i D^gamma chi_j dt on J uniform
/// cells, by tanh-sinh quadrature split at every kernel breakpoint.
/// DomainError unless 0 < gamma < 1/2; ConfigError for J > 256.
[[nodiscard]] std::vector<double> frac_gram_oracle(double gamma, double tau, std::size_t J);

/// c_ij = int_0^T D^gamma_{0+} chi_i D^gamma_{T-} chi_j dt, same quadrature.
[[nodiscard]] std::vector<double> frac_cross_gram_oracle(double gamma, double tau, std::size_t J);

/// sqrt(w^T g w) with g from frac_gram_oracle.
[[nodiscard]] double frac_seminorm_oracle(std::span<const double> w, double gamma, double tau);

/// order_k = log2(e_k / e_{k+1}); DomainError for nonpositive errors.
[[nodiscard]] std::vector<double> observed_order(std::span<const double> errors);

enum class StudyAxis { Space, Time };

[[nodiscard]] std::string to_string(StudyAxis axis);
/// ConfigError for anything but "space" or "time".
[[nodiscard]] StudyAxis parse_axis(const std::string& text);

struct LevelResult {
  int level = 0;
  double tau = 0.0;
  double h = 0.0;
  double E1 = 0.0;
  double E2 = 0.0;
};

/// One refinement study for one alpha. order_E1[k] relates levels k and k+1.
struct ConvergenceReport {
  double alpha = 1.5;
  int example = 1;
  StudyAxis vary = StudyAxis::Space;
  std::vector<LevelResult> levels;
  std::vector<double> order_E1;
  std::vector<double> order_E2;

  /// Recompute the orders from the level errors.
  void update_orders();
};

}  // namespace fracwave
