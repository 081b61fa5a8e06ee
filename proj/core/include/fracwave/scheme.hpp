#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "fracwave/fracops.hpp"
#include "fracwave/mesh_fem.hpp"
#include "fracwave/tridiagonal.hpp"

namespace fracwave {

namespace source {

/// scale * t^{mu_t} * x^{mu_x}; integrable when both exponents exceed -1.
struct SeparablePower {
  double mu_t = 0.0;
  double mu_x = 0.0;
  double scale = 1.0;
};

/// Arbitrary f(x, t), integrated by tensor Gauss-Legendre on each
/// space-time cell. Cells touching x = 0 or t = 0 are split geometrically
/// toward the corner; cells next to it are split so every piece [c, d]
/// satisfies (d - c) <= grading_ratio_step * c.
struct General {
  std::function<double(double x, double t)> f;
  std::size_t points = 4;
  /// Geometric pieces toward a singular edge: ratio 1 + grading_ratio_step.
  double grading_ratio_step = 0.25;
  /// Depth of the geometric splitting of the singular boundary cell,
  /// counted in halvings of its width.
  int corner_halvings = 64;
};

}  // namespace source

using SourceTerm = std::variant<source::SeparablePower, source::General>;

/// The continuous problem D^alpha (u - u0 - t u1) - u_xx = f on (0,1) x (0,T).
struct ProblemSpec {
  double alpha = 1.5;
  double T = 1.0;
  SourceTerm source = source::SeparablePower{0.0, 0.0, 0.0};
  InitialDatum u0 = datum::Zero{};
  InitialDatum u1 = datum::Zero{};

  /// Throws DomainError for alpha outside (1, 2) or non-integrable power sources.
  void validate() const;
};

/// Source term of the first experiment: t^{-0.49} x^{-0.49}.
[[nodiscard]] ProblemSpec example1(double alpha);
/// Source term of the second experiment: t^{1.51-alpha} x^{-0.49}.
[[nodiscard]] ProblemSpec example2(double alpha);

/// Everything the solvers need: U_0 is data, unknowns are U_1..U_J.
struct DiscreteSystem {
  TemporalGrid time;
  SpatialMesh space;
  double alpha = 1.5;
  KernelWeights kappa;  ///< nu = alpha - 1
  TridiagonalOperator mass;
  TridiagonalOperator stiffness;
  std::vector<double> rhs;  ///< J x N, row i-1 tested against chi_{I_i} phi_n
  std::vector<double> u0h;

  [[nodiscard]] std::span<const double> rhs_row(std::size_t i) const {
    return std::span<const double>(rhs).subspan((i - 1) * space.N, space.N);
  }
};

/// F_{i,n} = <f, chi_{I_i} phi_n> + <u1, phi_n> (t_i^{2-alpha} - t_{i-1}^{2-alpha}) / Gamma(3-alpha).
[[nodiscard]] std::vector<double> assemble_rhs(const ProblemSpec& p, const TemporalGrid& tg,
                                               const SpatialMesh& sm);

/// Source part only, <f, chi_{I_i} phi_n>.
[[nodiscard]] std::vector<double> assemble_source_load(const SourceTerm& f, const TemporalGrid& tg,
                                                       const SpatialMesh& sm);

[[nodiscard]] DiscreteSystem assemble_system(const ProblemSpec& p, const TemporalGrid& tg,
                                             const SpatialMesh& sm);

/// B = (kappa_0 / tau) M + (tau / 2) A, the same matrix for every step.
[[nodiscard]] TridiagonalOperator step_operator(const DiscreteSystem& sys);

}  // namespace fracwave
