#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracwave::quad {

/// Nodes and weights of a fixed rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1]; a, b > -1.
[[nodiscard]] Rule gauss_jacobi(std::size_t n, double a, double b);

/// Gauss-Legendre rule on [-1, 1].
[[nodiscard]] Rule gauss_legendre(std::size_t n);

/// Gauss-Legendre on (0, 1); weights sum to one.
[[nodiscard]] Rule gauss_legendre_unit(std::size_t n);

/// Rule on (0, 1) exact for s^a * p(s), p a polynomial of degree 2n-1.
[[nodiscard]] Rule gauss_jacobi_unit(std::size_t n, double a);

struct Result {
  double value = 0.0;
  double error = 0.0;
  int levels = 0;
};

/// Integrand for finite intervals: f(x, x - a, b - x). The two
/// distances are computed without cancellation so endpoint singularities
/// can be evaluated accurately.
using EndpointIntegrand = std::function<double(double, double, double)>;

/// Double-exponential (tanh-sinh) quadrature on [a, b]. Handles algebraic
/// endpoint singularities. Refines the step until two successive levels
/// agree to max(abs_tol, rel_tol * |I|).
[[nodiscard]] Result tanh_sinh(const EndpointIntegrand& f, double a, double b,
                               double abs_tol = 1e-14, double rel_tol = 1e-14,
                               int max_levels = 10);

/// Double-exponential (exp-sinh) quadrature on [0, inf) for integrands that
/// decay at least exponentially.
[[nodiscard]] Result exp_sinh(const std::function<double(double)>& f,
                              double abs_tol = 1e-15, double rel_tol = 1e-15,
                              int max_levels = 10);

/// Sum of tanh_sinh over the pieces [p_k, p_{k+1}] of a sorted breakpoint
/// list. Singularities must sit on breakpoints.
[[nodiscard]] Result piecewise_tanh_sinh(const EndpointIntegrand& f,
                                         std::span<const double> breakpoints,
                                         double abs_tol = 1e-14,
                                         double rel_tol = 1e-14);

}  // namespace fracwave::quad
