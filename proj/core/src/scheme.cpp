#include "fracwave/scheme.hpp"

#include <cmath>
#include <string>

#include "fracwave/error.hpp"
#include "fracwave/quadrature.hpp"

namespace fracwave {

namespace {

struct Points {
  std::vector<double> x;
  std::vector<double> w;
};

void append_rule(Points& out, const quad::Rule& unit, double c, double d) {
  const double len = d - c;
  for (std::size_t q = 0; q < unit.size(); ++q) {
    out.x.push_back(c + len * unit.nodes[q]);
    out.w.push_back(len * unit.weights[q]);
  }
}

// Quadrature points on [c, d]. With c == 0 the interval is split geometrically
// toward 0 (ratio 1 + step) down to d * 2^-halvings; with c > 0 it is split so
// every piece [a, b] has b - a <= step * a, which resolves the x^mu-type
// behaviour of the neighbouring cell.
Points cell_points(double c, double d, const quad::Rule& unit, double step, int halvings) {
  Points out;
  const double q = 1.0 + step;
  double a = c;
  if (c == 0.0) {
    a = std::ldexp(d, -halvings);
    append_rule(out, unit, 0.0, a);
  }
  while (a < d) {
    double b = std::min(d, a * q);
    if ((d - b) < 1e-3 * (b - a)) b = d;
    append_rule(out, unit, a, b);
    a = b;
  }
  return out;
}

std::vector<double> separable_load(const source::SeparablePower& s, const TemporalGrid& tg,
                                   const SpatialMesh& sm) {
  std::vector<double> F(tg.J * sm.N, 0.0);
  if (s.scale == 0.0) return F;
  const std::vector<double> bx = power_moment_load(s.mu_x, sm);
  const double p = s.mu_t + 1.0;
  const double c = s.scale * std::pow(tg.tau, p) / p;
  for (std::size_t i = 1; i <= tg.J; ++i) {
    const double moment = c * first_difference_of_power(p, i);
    double* row = F.data() + (i - 1) * sm.N;
    for (std::size_t n = 0; n < sm.N; ++n) row[n] = moment * bx[n];
  }
  return F;
}

std::vector<double> general_load(const source::General& g, const TemporalGrid& tg,
                                 const SpatialMesh& sm) {
  if (!g.f) throw ConfigError("general source: no callable given");
  if (g.points == 0) throw ConfigError("general source: need at least one quadrature point");
  if (!(g.grading_ratio_step > 0.0)) throw ConfigError("general source: grading step must be positive");
  const quad::Rule unit = quad::gauss_legendre_unit(g.points);
  const std::size_t N = sm.N;
  const double h = sm.h;

  std::vector<Points> xcells(N + 1);
  for (std::size_t k = 0; k <= N; ++k) {
    const double c = static_cast<double>(k) * h;
    const double d = (k == N) ? 1.0 : static_cast<double>(k + 1) * h;
    xcells[k] = cell_points(c, d, unit, g.grading_ratio_step, g.corner_halvings);
  }

  std::vector<double> F(tg.J * N, 0.0);
  for (std::size_t i = 1; i <= tg.J; ++i) {
    const Points tp = cell_points(tg.node(i - 1), tg.node(i), unit, g.grading_ratio_step,
                                  g.corner_halvings);
    double* row = F.data() + (i - 1) * N;
    for (std::size_t k = 0; k <= N; ++k) {
      const Points& xp = xcells[k];
      const double xl = static_cast<double>(k) * h;
      double left = 0.0;   // against the hat at node k (k >= 1)
      double right = 0.0;  // against the hat at node k+1 (k+1 <= N)
      for (std::size_t a = 0; a < xp.x.size(); ++a) {
        double acc = 0.0;
        for (std::size_t b = 0; b < tp.x.size(); ++b) acc += tp.w[b] * g.f(xp.x[a], tp.x[b]);
        const double s = (xp.x[a] - xl) / h;
        left += xp.w[a] * acc * (1.0 - s);
        right += xp.w[a] * acc * s;
      }
      if (k >= 1) row[k - 1] += left;
      if (k + 1 <= N) row[k] += right;
    }
  }
  for (double v : F) {
    if (!std::isfinite(v)) throw DomainError("general source: load is not finite");
  }
  return F;
}

}  // namespace

void ProblemSpec::validate() const {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw DomainError("alpha must lie in (1, 2), got " + std::to_string(alpha));
  }
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("horizon T must be positive");
  if (const auto* s = std::get_if<source::SeparablePower>(&source)) {
    if (!(s->mu_t > -1.0) || !(s->mu_x > -1.0)) {
      throw DomainError("power source not integrable: need mu_t, mu_x > -1");
    }
  }
  if (const auto* p = std::get_if<datum::Power>(&u0); p && p->scale != 0.0) {
    throw ConfigError("u0 = x^mu is not in H^1_0");
  }
}

ProblemSpec example1(double alpha) {
  ProblemSpec p;
  p.alpha = alpha;
  p.source = source::SeparablePower{-0.49, -0.49, 1.0};
  return p;
}

ProblemSpec example2(double alpha) {
  ProblemSpec p;
  p.alpha = alpha;
  p.source = source::SeparablePower{1.51 - alpha, -0.49, 1.0};
  return p;
}

std::vector<double> assemble_source_load(const SourceTerm& f, const TemporalGrid& tg,
                                         const SpatialMesh& sm) {
  if (const auto* s = std::get_if<source::SeparablePower>(&f)) {
    if (!(s->mu_t > -1.0) || !(s->mu_x > -1.0)) {
      throw DomainError("power source not integrable: need mu_t, mu_x > -1");
    }
    return separable_load(*s, tg, sm);
  }
  return general_load(std::get<source::General>(f), tg, sm);
}

std::vector<double> assemble_rhs(const ProblemSpec& p, const TemporalGrid& tg,
                                 const SpatialMesh& sm) {
  p.validate();
  if (tg.T != p.T) throw ConfigError("temporal grid horizon differs from the problem horizon");
  std::vector<double> F = assemble_source_load(p.source, tg, sm);
  if (std::holds_alternative<datum::Zero>(p.u1)) return F;

  const std::vector<double> g = l2_load(p.u1, sm);
  const double e = 2.0 - p.alpha;
  const double c = std::pow(tg.tau, e) / gamma(3.0 - p.alpha);
  for (std::size_t i = 1; i <= tg.J; ++i) {
    const double moment = c * first_difference_of_power(e, i);
    double* row = F.data() + (i - 1) * sm.N;
    for (std::size_t n = 0; n < sm.N; ++n) row[n] += moment * g[n];
  }
  return F;
}

DiscreteSystem assemble_system(const ProblemSpec& p, const TemporalGrid& tg,
                               const SpatialMesh& sm) {
  p.validate();
  DiscreteSystem sys;
  sys.time = tg;
  sys.space = sm;
  sys.alpha = p.alpha;
  sys.kappa = rl_cell_average_weights(p.alpha - 1.0, tg.tau, tg.J);
  sys.mass = assemble_mass(sm);
  sys.stiffness = assemble_stiffness(sm);
  sys.rhs = assemble_rhs(p, tg, sm);
  sys.u0h = project_initial(p.u0, sm, sys.stiffness, sys.mass);
  return sys;
}

TridiagonalOperator step_operator(const DiscreteSystem& sys) {
  const double tau = sys.time.tau;
  return TridiagonalOperator::combine(sys.kappa[0] / tau, sys.mass, 0.5 * tau, sys.stiffness);
}

}  // namespace fracwave
