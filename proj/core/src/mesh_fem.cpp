#include "fracwave/mesh_fem.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracwave/error.hpp"
#include "fracwave/fracops.hpp"

namespace fracwave {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_matching(const datum::Nodal& d, const SpatialMesh& mesh) {
  if (d.coefficients.size() != mesh.N) {
    throw ConfigError("nodal datum has " + std::to_string(d.coefficients.size()) +
                      " coefficients but the mesh has " + std::to_string(mesh.N) +
                      " interior nodes");
  }
}

// 2 sin(k pi x_n) (1 - cos(k pi h)) without cancellation in the cosine.
double sine_second_difference(const datum::Sine& s, double x, double h) {
  const double half = std::sin(0.5 * s.k * kPi * h);
  return 2.0 * s.amplitude * std::sin(s.k * kPi * x) * 2.0 * half * half;
}

}  // namespace

TemporalGrid TemporalGrid::uniform(std::size_t J, double T) {
  if (J == 0) throw ConfigError("TemporalGrid: need J >= 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("TemporalGrid: horizon must be positive");
  return TemporalGrid{J, T, T / static_cast<double>(J)};
}

SpatialMesh SpatialMesh::uniform(std::size_t N) {
  if (N == 0) throw ConfigError("SpatialMesh: need N >= 1");
  return SpatialMesh{N, 1.0 / static_cast<double>(N + 1)};
}

SolutionField::SolutionField(const TemporalGrid& tg, const SpatialMesh& sm, double alpha_)
    : time(tg), space(sm), alpha(alpha_), values((tg.J + 1) * sm.N, 0.0) {}

TridiagonalOperator assemble_stiffness(const SpatialMesh& mesh) {
  const double s = 1.0 / mesh.h;
  return TridiagonalOperator(mesh.N, -s, 2.0 * s, -s);
}

TridiagonalOperator assemble_mass(const SpatialMesh& mesh) {
  const double s = mesh.h / 6.0;
  return TridiagonalOperator(mesh.N, s, 4.0 * s, s);
}

std::vector<double> power_moment_load(double mu, const SpatialMesh& mesh) {
  if (!(mu > -1.0)) {
    throw DomainError("power_moment_load: mu must exceed -1, got " + std::to_string(mu));
  }
  // b_n = [Phi(x_{n+1}) - 2 Phi(x_n) + Phi(x_{n-1})] / h with
  // Phi(x) = x^{mu+2} / ((mu+1)(mu+2)).
  const double p = mu + 2.0;
  const double c = std::pow(mesh.h, mu + 1.0) / ((mu + 1.0) * (mu + 2.0));
  std::vector<double> b(mesh.N);
  for (std::size_t k = 0; k < mesh.N; ++k) b[k] = c * second_difference_of_power(p, k + 1);
  return b;
}

bool in_h10(const InitialDatum& d) {
  return std::visit(Overloaded{[](const datum::Zero&) { return true; },
                               [](const datum::Nodal&) { return true; },
                               [](const datum::Sine&) { return true; },
                               [](const datum::Power& p) { return p.scale == 0.0; }},
                    d);
}

std::vector<double> l2_load(const InitialDatum& d, const SpatialMesh& mesh) {
  return std::visit(
      Overloaded{[&](const datum::Zero&) { return std::vector<double>(mesh.N, 0.0); },
                 [&](const datum::Nodal& n) {
                   require_matching(n, mesh);
                   return assemble_mass(mesh).apply(n.coefficients);
                 },
                 [&](const datum::Sine& s) {
                   if (s.k < 1) throw ConfigError("sine datum: wave number must be >= 1");
                   std::vector<double> b(mesh.N);
                   const double kp = s.k * kPi;
                   for (std::size_t k = 0; k < mesh.N; ++k) {
                     b[k] = sine_second_difference(s, mesh.node(k), mesh.h) / (kp * kp * mesh.h);
                   }
                   return b;
                 },
                 [&](const datum::Power& p) {
                   std::vector<double> b = power_moment_load(p.mu, mesh);
                   for (double& v : b) v *= p.scale;
                   return b;
                 }},
      d);
}

std::vector<double> ritz_load(const InitialDatum& d, const SpatialMesh& mesh) {
  return std::visit(
      Overloaded{[&](const datum::Zero&) { return std::vector<double>(mesh.N, 0.0); },
                 [&](const datum::Nodal& n) {
                   require_matching(n, mesh);
                   return assemble_stiffness(mesh).apply(n.coefficients);
                 },
                 [&](const datum::Sine& s) {
                   if (s.k < 1) throw ConfigError("sine datum: wave number must be >= 1");
                   std::vector<double> b(mesh.N);
                   for (std::size_t k = 0; k < mesh.N; ++k) {
                     b[k] = sine_second_difference(s, mesh.node(k), mesh.h) / mesh.h;
                   }
                   return b;
                 },
                 [&](const datum::Power& p) -> std::vector<double> {
                   if (p.scale == 0.0) return std::vector<double>(mesh.N, 0.0);
                   throw ConfigError(
                       "Ritz projection needs H^1_0 data; x^mu does not vanish at x = 1 "
                       "(use the L2 projection)");
                 }},
      d);
}

std::vector<double> project_initial(const InitialDatum& d, const SpatialMesh& mesh,
                                    const TridiagonalOperator& stiffness,
                                    const TridiagonalOperator& mass, Projection kind) {
  if (stiffness.order() != mesh.N || mass.order() != mesh.N) {
    throw ConfigError("project_initial: operators do not match the mesh");
  }
  if (std::holds_alternative<datum::Zero>(d)) return std::vector<double>(mesh.N, 0.0);
  if (kind == Projection::Auto) kind = in_h10(d) ? Projection::Ritz : Projection::L2;
  if (kind == Projection::Ritz) return thomas_solve(stiffness, ritz_load(d, mesh));
  return thomas_solve(mass, l2_load(d, mesh));
}

void require_nested(const TemporalGrid& coarse_t, const SpatialMesh& coarse_x,
                    const TemporalGrid& fine_t, const SpatialMesh& fine_x) {
  if (coarse_t.T != fine_t.T) throw ConfigError("grids have different horizons");
  if (fine_t.J % coarse_t.J != 0) {
    throw ConfigError("temporal grids are not nested: J_f = " + std::to_string(fine_t.J) +
                      " is not a multiple of J_c = " + std::to_string(coarse_t.J));
  }
  if ((fine_x.N + 1) % (coarse_x.N + 1) != 0) {
    throw ConfigError("spatial meshes are not nested: N_f + 1 = " + std::to_string(fine_x.N + 1) +
                      " is not a multiple of N_c + 1 = " + std::to_string(coarse_x.N + 1));
  }
}

SolutionField prolong(const SolutionField& coarse, const TemporalGrid& fine_time,
                      const SpatialMesh& fine_space) {
  require_nested(coarse.time, coarse.space, fine_time, fine_space);
  const std::size_t rx = (fine_space.N + 1) / (coarse.space.N + 1);
  const std::size_t rt = fine_time.J / coarse.time.J;
  const std::size_t nc = coarse.space.N;
  const std::size_t nf = fine_space.N;

  // Space first, on coarse time rows.
  std::vector<double> spatial(coarse.rows() * nf);
  for (std::size_t j = 0; j < coarse.rows(); ++j) {
    const auto src = coarse.row(j);
    auto value = [&](std::size_t c) { return (c >= 1 && c <= nc) ? src[c - 1] : 0.0; };
    for (std::size_t k = 0; k < nf; ++k) {
      const std::size_t pos = k + 1;
      const std::size_t c = pos / rx;
      const std::size_t rem = pos % rx;
      double v = value(c);
      if (rem != 0) {
        const double frac = static_cast<double>(rem) / static_cast<double>(rx);
        v = (1.0 - frac) * v + frac * value(c + 1);
      }
      spatial[j * nf + k] = v;
    }
  }

  SolutionField fine(fine_time, fine_space, coarse.alpha);
  for (std::size_t j = 0; j < fine.rows(); ++j) {
    const std::size_t c = j / rt;
    const std::size_t rem = j % rt;
    auto dst = fine.row(j);
    const double* lo = spatial.data() + c * nf;
    if (rem == 0) {
      std::copy(lo, lo + nf, dst.begin());
      continue;
    }
    const double frac = static_cast<double>(rem) / static_cast<double>(rt);
    const double* hi = lo + nf;
    for (std::size_t k = 0; k < nf; ++k) dst[k] = (1.0 - frac) * lo[k] + frac * hi[k];
  }
  return fine;
}

SolutionField restrict_to(const SolutionField& fine, const TemporalGrid& coarse_time,
                          const SpatialMesh& coarse_space) {
  require_nested(coarse_time, coarse_space, fine.time, fine.space);
  const std::size_t rx = (fine.space.N + 1) / (coarse_space.N + 1);
  const std::size_t rt = fine.time.J / coarse_time.J;
  SolutionField coarse(coarse_time, coarse_space, fine.alpha);
  for (std::size_t j = 0; j < coarse.rows(); ++j) {
    const auto src = fine.row(j * rt);
    auto dst = coarse.row(j);
    for (std::size_t k = 0; k < coarse_space.N; ++k) dst[k] = src[(k + 1) * rx - 1];
  }
  return coarse;
}

}  // namespace fracwave
