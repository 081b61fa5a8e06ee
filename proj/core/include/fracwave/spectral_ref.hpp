#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fracwave/mesh_fem.hpp"
#include "fracwave/scheme.hpp"

namespace fracwave {

/// v_n = sqrt(2) int_0^1 x^mu sin(n pi x) dx for n = 1..n_max (index n-1).
/// DomainError for mu <= -1.
[[nodiscard]] std::vector<double> sine_coefficients(double mu, std::size_t n_max);

/// Solution of D^alpha y + lambda y = t^mu with zero initial history:
/// y(t) = Gamma(mu+1) t^{alpha+mu} E_{alpha,alpha+mu+1}(-lambda t^alpha).
[[nodiscard]] double mode_response(double alpha, double lambda, double mu, double t);

/// D^alpha y for the same y: Gamma(mu+1) t^mu E_{alpha,mu+1}(-lambda t^alpha).
[[nodiscard]] double mode_response_derivative(double alpha, double lambda, double mu, double t);

/// u(x, t) = scale * sum_n v_n y_n(t) phi_n(x), phi_n = sqrt(2) sin(n pi x),
/// lambda_n = (n pi)^2, for a source scale * t^mu_t * g(x) with sine
/// coefficients v_n of g.
struct SpectralSolution {
  double alpha = 1.5;
  double mu_t = 0.0;
  double scale = 1.0;
  std::vector<double> v;       ///< v[n-1]
  std::vector<double> lambda;  ///< lambda[n-1] = (n pi)^2
  /// Set when g(x) = x^mu_x: the series is then infinite and is evaluated
  /// around the quasi-static profile t^mu w(x), -w'' = g; otherwise v is
  /// the complete (finite) expansion.
  std::optional<double> mu_x;

  [[nodiscard]] std::size_t n_modes() const noexcept { return v.size(); }
};

/// Spectral data for a problem with zero initial data and a separable power
/// source. ConfigError for nonzero u0/u1 or a general source.
[[nodiscard]] SpectralSolution spectral_solution(const ProblemSpec& p, std::size_t max_modes);

/// Source scale * t^mu_t * sqrt(2) sin(k pi x): a single mode.
[[nodiscard]] SpectralSolution single_mode_solution(double alpha, double mu_t, std::size_t k,
                                                    double scale = 1.0);

struct SpectralOptions {
  double tol = 1e-6;  ///< bound on the H^1 norm of the dropped modes at every time node
  std::size_t threads = 1;
};

struct SpectralReference {
  SolutionField field;
  std::vector<std::size_t> modes_used;  ///< per time node
  double tail_estimate = 0.0;           ///< largest estimated H^1 tail over time nodes
};

/// Upper estimate of the H^1 norm of modes n > K at time t, or +inf when the
/// available bounds do not apply yet (lambda_K t^alpha too small). Uses
/// |v_n| <= C n^{-p}, C fitted on the stored coefficients and inflated by 10.
[[nodiscard]] double spectral_tail_estimate(const SpectralSolution& s, std::size_t K, double t);

/// Nodal samples of the truncated series on the given grids. Modes are
/// chosen per time node so the tail estimate stays below tol; throws
/// TruncationError when that needs more modes than s holds.
[[nodiscard]] SpectralReference reference_solution(const SpectralSolution& s,
                                                   const TemporalGrid& tg, const SpatialMesh& sm,
                                                   const SpectralOptions& options = {});

}  // namespace fracwave
