#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "fracwave/tridiagonal.hpp"

namespace fracwave {

/// Uniform partition 0 = t_0 < ... < t_J = T.
struct TemporalGrid {
  std::size_t J = 1;
  double T = 1.0;
  double tau = 1.0;

  /// Throws ConfigError unless J >= 1 and T > 0.
  [[nodiscard]] static TemporalGrid uniform(std::size_t J, double T = 1.0);
  [[nodiscard]] double node(std::size_t j) const noexcept {
    return j == J ? T : static_cast<double>(j) * tau;
  }
  friend bool operator==(const TemporalGrid&, const TemporalGrid&) = default;
};

/// Uniform mesh of (0, 1) with N interior nodes x_k = (k+1) h, k = 0..N-1.
/// Homogeneous Dirichlet data: only interior values are stored.
struct SpatialMesh {
  std::size_t N = 1;
  double h = 0.5;

  /// Throws ConfigError unless N >= 1.
  [[nodiscard]] static SpatialMesh uniform(std::size_t N);
  [[nodiscard]] double node(std::size_t k) const noexcept {
    return static_cast<double>(k + 1) * h;
  }
  friend bool operator==(const SpatialMesh&, const SpatialMesh&) = default;
};

/// Nodal coefficients of a function in W_tau (x) S_h: row j holds the
/// interior values at t_j, rows stored contiguously.
struct SolutionField {
  TemporalGrid time;
  SpatialMesh space;
  double alpha = 1.5;
  std::vector<double> values;

  SolutionField() = default;
  SolutionField(const TemporalGrid& tg, const SpatialMesh& sm, double alpha_);

  [[nodiscard]] std::size_t rows() const noexcept { return time.J + 1; }
  [[nodiscard]] std::size_t cols() const noexcept { return space.N; }
  [[nodiscard]] std::span<double> row(std::size_t j) {
    return std::span<double>(values).subspan(j * space.N, space.N);
  }
  [[nodiscard]] std::span<const double> row(std::size_t j) const {
    return std::span<const double>(values).subspan(j * space.N, space.N);
  }
  [[nodiscard]] double at(std::size_t j, std::size_t k) const { return values[j * space.N + k]; }
};

/// P1 stiffness: rows (1/h)(-1, 2, -1).
[[nodiscard]] TridiagonalOperator assemble_stiffness(const SpatialMesh& mesh);

/// P1 mass: rows (h/6)(1, 4, 1).
[[nodiscard]] TridiagonalOperator assemble_mass(const SpatialMesh& mesh);

/// b_k = int_0^1 x^mu phi_k dx in closed form; DomainError for mu <= -1.
[[nodiscard]] std::vector<double> power_moment_load(double mu, const SpatialMesh& mesh);

namespace datum {

struct Zero {};

/// A function already in S_h, given by its interior nodal values.
struct Nodal {
  std::vector<double> coefficients;
};

/// amplitude * sin(k pi x), k >= 1.
struct Sine {
  int k = 1;
  double amplitude = 1.0;
};

/// scale * x^mu, mu > -1. Not in H^1_0 (nonzero at x = 1).
struct Power {
  double mu = 1.0;
  double scale = 1.0;
};

}  // namespace datum

using InitialDatum = std::variant<datum::Zero, datum::Nodal, datum::Sine, datum::Power>;

/// True when the datum lies in H^1_0(0, 1), so the Ritz projection applies.
[[nodiscard]] bool in_h10(const InitialDatum& d);

/// (<u, phi_k>)_k
[[nodiscard]] std::vector<double> l2_load(const InitialDatum& d, const SpatialMesh& mesh);

/// (<u', phi_k'>)_k; ConfigError for data outside H^1_0.
[[nodiscard]] std::vector<double> ritz_load(const InitialDatum& d, const SpatialMesh& mesh);

enum class Projection { Auto, Ritz, L2 };

/// Ritz projection for H^1_0 data, L^2 projection otherwise (Auto), or the
/// one requested.
[[nodiscard]] std::vector<double> project_initial(const InitialDatum& d, const SpatialMesh& mesh,
                                                  const TridiagonalOperator& stiffness,
                                                  const TridiagonalOperator& mass,
                                                  Projection kind = Projection::Auto);

/// Exact evaluation of a coarse field at the nodes of nested finer grids.
/// Requires J_f % J_c == 0, (N_f+1) % (N_c+1) == 0 and equal horizons.
[[nodiscard]] SolutionField prolong(const SolutionField& coarse, const TemporalGrid& fine_time,
                                    const SpatialMesh& fine_space);

/// Injection onto coarser nested grids (inverse of prolong on the coarse space).
[[nodiscard]] SolutionField restrict_to(const SolutionField& fine, const TemporalGrid& coarse_time,
                                        const SpatialMesh& coarse_space);

/// Throws ConfigError unless the grids nest as prolong requires.
void require_nested(const TemporalGrid& coarse_t, const SpatialMesh& coarse_x,
                    const TemporalGrid& fine_t, const SpatialMesh& fine_x);

}  // namespace fracwave
