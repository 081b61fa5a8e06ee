#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <vector>

#include "fracwave/error.hpp"
#include "fracwave/scheme.hpp"

namespace {

using namespace fracwave;

double hat(const SpatialMesh& m, std::size_t k, double x) {
  return std::max(0.0, 1.0 - std::abs(x - m.node(k)) / m.h);
}

// <t^mu_t x^mu_x, chi_{I_i} phi_n> as a product of two tanh-sinh integrals.
double separable_oracle(double mu_t, double mu_x, const TemporalGrid& tg, const SpatialMesh& sm,
                        std::size_t i, std::size_t n) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double tint = ts.integrate([&](double t) { return std::pow(t, mu_t); }, tg.node(i - 1), tg.node(i));
  auto fx = [&](double x) { return std::pow(x, mu_x) * hat(sm, n, x); };
  const double xk = sm.node(n);
  const double xint = ts.integrate(fx, xk - sm.h, xk) + ts.integrate(fx, xk, xk + sm.h);
  return tint * xint;
}

TEST(Rhs, ZeroProblem) {
  ProblemSpec p;
  const auto sys = assemble_system(p, TemporalGrid::uniform(5), SpatialMesh::uniform(4));
  for (double v : sys.rhs) EXPECT_EQ(v, 0.0);
  for (double v : sys.u0h) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(sys.rhs.size(), 5u * 4u);
  EXPECT_DOUBLE_EQ(sys.kappa.nu, 0.5);
}

TEST(Rhs, ExampleOneAgainstTensorQuadrature) {
  const auto tg = TemporalGrid::uniform(8);
  const auto sm = SpatialMesh::uniform(7);
  const auto F = assemble_rhs(example1(1.5), tg, sm);
  const auto b = power_moment_load(-0.49, sm);
  for (std::size_t i = 1; i <= tg.J; ++i) {
    const double moment = (std::pow(tg.node(i), 0.51) - std::pow(tg.node(i - 1), 0.51)) / 0.51;
    for (std::size_t n = 0; n < sm.N; ++n) {
      const double got = F[(i - 1) * sm.N + n];
      EXPECT_NEAR(got, moment * b[n], 1e-14 * std::abs(got));
      const double ref = separable_oracle(-0.49, -0.49, tg, sm, i, n);
      EXPECT_NEAR(got, ref, 1e-9 * std::abs(ref)) << "i=" << i << " n=" << n;
    }
  }
}

TEST(Rhs, ExampleTwoTimeMoment) {
  const auto tg = TemporalGrid::uniform(6);
  const auto sm = SpatialMesh::uniform(5);
  const auto F = assemble_rhs(example2(1.75), tg, sm);
  const auto b = power_moment_load(-0.49, sm);
  for (std::size_t i = 1; i <= tg.J; ++i) {
    const double moment = (std::pow(tg.node(i), 0.76) - std::pow(tg.node(i - 1), 0.76)) / 0.76;
    for (std::size_t n = 0; n < sm.N; ++n) {
      EXPECT_NEAR(F[(i - 1) * sm.N + n], moment * b[n], 1e-14 * moment * b[n]);
      const double ref = separable_oracle(1.51 - 1.75, -0.49, tg, sm, i, n);
      EXPECT_NEAR(F[(i - 1) * sm.N + n], ref, 1e-9 * ref);
    }
  }
}

TEST(Rhs, UnitSourceGivesCellMeasures) {
  ProblemSpec p;
  p.source = source::SeparablePower{0.0, 0.0, 1.0};
  const auto tg = TemporalGrid::uniform(4);
  const auto sm = SpatialMesh::uniform(3);
  for (double v : assemble_rhs(p, tg, sm)) EXPECT_NEAR(v, tg.tau * sm.h, 1e-16);
}

TEST(Rhs, GeneralCallableMatchesSeparable) {
  const auto tg = TemporalGrid::uniform(8);
  const auto sm = SpatialMesh::uniform(7);
  for (double alpha : {1.25, 1.75}) {
    for (const ProblemSpec& p : {example1(alpha), example2(alpha)}) {
      const auto sep = std::get<source::SeparablePower>(p.source);
      source::General g;
      g.f = [sep](double x, double t) { return sep.scale * std::pow(t, sep.mu_t) * std::pow(x, sep.mu_x); };
      const auto Fg = assemble_source_load(g, tg, sm);
      const auto Fs = assemble_source_load(sep, tg, sm);
      for (std::size_t k = 0; k < Fs.size(); ++k) {
        EXPECT_NEAR(Fg[k], Fs[k], 1e-9 * std::abs(Fs[k])) << "alpha=" << alpha << " k=" << k;
      }
    }
  }
}

TEST(Rhs, GeneralCallableSmoothSource) {
  // f = sin(pi x) e^t: <f, chi_i phi_n> separates into exact factors.
  const auto tg = TemporalGrid::uniform(4);
  const auto sm = SpatialMesh::uniform(3);
  source::General g;
  g.f = [](double x, double t) { return std::sin(3.141592653589793 * x) * std::exp(t); };
  const auto F = assemble_source_load(g, tg, sm);
  const auto bx = l2_load(datum::Sine{1, 1.0}, sm);
  for (std::size_t i = 1; i <= tg.J; ++i) {
    const double tm = std::exp(tg.node(i)) - std::exp(tg.node(i - 1));
    for (std::size_t n = 0; n < sm.N; ++n) EXPECT_NEAR(F[(i - 1) * sm.N + n], tm * bx[n], 1e-9 * tm * bx[n]);
  }
}

TEST(Rhs, InitialVelocityTerm) {
  const double alpha = 1.6;
  const auto tg = TemporalGrid::uniform(5);
  const auto sm = SpatialMesh::uniform(6);
  const std::size_t k = 2;
  ProblemSpec p;
  p.alpha = alpha;
  datum::Nodal u1{std::vector<double>(sm.N, 0.0)};
  u1.coefficients[k] = 1.0;
  p.u1 = u1;
  const auto F = assemble_rhs(p, tg, sm);
  const auto M = assemble_mass(sm);
  std::vector<double> col(sm.N, 0.0);
  col[k] = 1.0;
  const auto Mk = M.apply(col);
  const double g3 = std::tgamma(3.0 - alpha);
  for (std::size_t n = 0; n < sm.N; ++n) {
    EXPECT_NEAR(F[n], Mk[n] * std::pow(tg.tau, 2.0 - alpha) / g3, 1e-15);
  }
  for (std::size_t i = 2; i <= tg.J; ++i) {
    const double m = (std::pow(tg.node(i), 2.0 - alpha) - std::pow(tg.node(i - 1), 2.0 - alpha)) / g3;
    for (std::size_t n = 0; n < sm.N; ++n) EXPECT_NEAR(F[(i - 1) * sm.N + n], Mk[n] * m, 1e-15);
  }
}

TEST(StepOperator, ExplicitSmallCase) {
  const double alpha = 1.5;
  const auto sys = assemble_system(example1(alpha), TemporalGrid::uniform(4), SpatialMesh::uniform(3));
  const auto B = step_operator(sys);
  const double tau = 0.25, h = 0.25, nu = alpha - 1.0;
  const double k0 = std::pow(tau, 1.0 - nu) / std::tgamma(2.0 - nu);
  EXPECT_NEAR(k0 / tau, std::pow(tau, -nu) / std::tgamma(2.0 - nu), 1e-15);
  const double diag = (k0 / tau) * (4.0 * h / 6.0) + (tau / 2.0) * (2.0 / h);
  const double off = (k0 / tau) * (h / 6.0) + (tau / 2.0) * (-1.0 / h);
  for (double d : B.diag) EXPECT_NEAR(d, diag, 1e-15);
  for (double s : B.sub) EXPECT_NEAR(s, off, 1e-15);
  for (double s : B.super) EXPECT_NEAR(s, off, 1e-15);
  EXPECT_TRUE(cholesky_succeeds(B));
}

TEST(StepOperator, PositiveDefiniteAcrossParameters) {
  for (double alpha : {1.01, 1.5, 1.99}) {
    for (std::size_t J : {1u, 64u, 8192u}) {
      for (std::size_t N : {1u, 15u, 511u}) {
        const auto sys = assemble_system(example1(alpha), TemporalGrid::uniform(J), SpatialMesh::uniform(N));
        EXPECT_TRUE(cholesky_succeeds(step_operator(sys)));
        EXPECT_NEAR(sys.kappa.nu, alpha - 1.0, 1e-15);
        EXPECT_EQ(sys.kappa.size(), J);
      }
    }
  }
}

TEST(Problem, Validation) {
  EXPECT_THROW(example1(1.0).validate(), DomainError);
  EXPECT_THROW(example1(2.0).validate(), DomainError);
  EXPECT_NO_THROW(example1(1.5).validate());
  ProblemSpec p;
  p.source = source::SeparablePower{-1.0, 0.0, 1.0};
  EXPECT_THROW(p.validate(), DomainError);
  p.source = source::SeparablePower{0.0, -1.2, 1.0};
  EXPECT_THROW(p.validate(), DomainError);
  ProblemSpec q;
  q.u0 = datum::Power{1.0, 1.0};
  EXPECT_THROW(q.validate(), ConfigError);
  ProblemSpec r;
  EXPECT_THROW((void)assemble_system(r, TemporalGrid::uniform(4, 2.0), SpatialMesh::uniform(3)), ConfigError);
}

TEST(Problem, InitialDisplacementIsRitzProjected) {
  ProblemSpec p;
  p.u0 = datum::Sine{1, 1.0};
  const auto sm = SpatialMesh::uniform(7);
  const auto sys = assemble_system(p, TemporalGrid::uniform(4), sm);
  for (std::size_t k = 0; k < sm.N; ++k) EXPECT_NEAR(sys.u0h[k], std::sin(3.141592653589793 * sm.node(k)), 1e-13);
}

}  // namespace
