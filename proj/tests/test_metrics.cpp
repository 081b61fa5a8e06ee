#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fracwave/error.hpp"
#include "fracwave/fracops.hpp"
#include "fracwave/metrics.hpp"
#include "fracwave/tridiagonal.hpp"

namespace {

using namespace fracwave;

std::vector<double> random_cells(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

SolutionField zero_field(std::size_t J, std::size_t N) {
  return SolutionField(TemporalGrid::uniform(J), SpatialMesh::uniform(N), 1.5);
}

// ||D^g chi_{(0, tau)}||_{L^2(0,1)} split into the cell itself (closed form)
// and the tail, where s = t - tau = u^2 removes the endpoint singularity.
double first_cell_norm(long double g, long double tau) {
  boost::math::quadrature::tanh_sinh<long double> ts;
  auto f = [&](long double u) {
    const long double d = std::pow(tau + u * u, -g) - std::pow(u, -2 * g);
    return 2 * u * d * d;
  };
  const long double tail = ts.integrate(f, 0.0L, std::sqrt(1 - tau));
  const long double head = std::pow(tau, 1 - 2 * g) / (1 - 2 * g);
  return static_cast<double>(std::sqrt(head + tail) / std::tgamma(1 - g));
}

TEST(ErrorE1, IdenticalFieldsGiveZero) {
  auto U = zero_field(8, 7);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (auto& v : U.values) v = nd(rng);
  EXPECT_EQ(error_e1(U, U), 0.0);
  EXPECT_EQ(error_e2(U, U), 0.0);
  EXPECT_EQ(error_e2(U, U, FracNormMethod::CellAverage), 0.0);
}

TEST(ErrorE1, SingleHatGivesStiffnessDiagonal) {
  const auto coarse = zero_field(4, 3);
  auto fine = zero_field(16, 15);
  fine.values[5 * 15 + 6] = 1.0;
  EXPECT_NEAR(error_e1(coarse, fine), std::sqrt(2.0 / fine.space.h), 1e-13);
}

TEST(ErrorE1, ExactWhenBothFieldsAreCoarse) {
  // A coarse field prolonged to the fine grids loses nothing.
  auto U = zero_field(4, 3);
  auto V = zero_field(4, 3);
  for (std::size_t k = 0; k < U.values.size(); ++k) {
    U.values[k] = std::sin(0.7 * static_cast<double>(k));
    V.values[k] = std::cos(1.3 * static_cast<double>(k));
  }
  const auto Vf = prolong(V, TemporalGrid::uniform(16), SpatialMesh::uniform(15));
  const auto A3 = assemble_stiffness(U.space);
  double coarse = 0.0;
  for (std::size_t j = 0; j < U.rows(); ++j) {
    std::vector<double> d(3);
    for (std::size_t c = 0; c < 3; ++c) d[c] = V.at(j, c) - U.at(j, c);
    coarse = std::max(coarse, std::sqrt(A3.quadratic_form(d)));
  }
  EXPECT_NEAR(error_e1(U, Vf), coarse, 1e-13 * coarse);
}

TEST(ErrorE1, NonNestedIsConfigError) {
  EXPECT_THROW((void)error_e1(zero_field(4, 3), zero_field(6, 15)), ConfigError);
  EXPECT_THROW((void)error_e1(zero_field(4, 3), zero_field(8, 10)), ConfigError);
  EXPECT_THROW((void)error_e2(zero_field(4, 3), zero_field(8, 10)), ConfigError);
}

TEST(GramOracle, FrozenValueAndSecondQuadrature) {
  const std::vector<double> w{1.0, 0.0, 0.0, 0.0};
  const double golden = 0.89204718474900715;  // first_cell_norm(0.25, 0.25)
  EXPECT_NEAR(first_cell_norm(0.25L, 0.25L), golden, 1e-15);
  EXPECT_NEAR(frac_seminorm_oracle(w, 0.25, 0.25), golden, 1e-12);
}

TEST(GramOracle, SymmetricPositiveDefinite) {
  for (double g : {0.125, 0.25, 0.375}) {
    const std::size_t J = 12;
    const auto G = frac_gram_oracle(g, 1.0 / J, J);
    for (std::size_t i = 0; i < J; ++i) {
      for (std::size_t j = 0; j < J; ++j) EXPECT_NEAR(G[i * J + j], G[j * J + i], 1e-14);
    }
    // Dense Cholesky.
    std::vector<double> L(J * J, 0.0);
    for (std::size_t i = 0; i < J; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = G[i * J + j];
        for (std::size_t k = 0; k < j; ++k) s -= L[i * J + k] * L[j * J + k];
        if (i == j) {
          ASSERT_GT(s, 0.0) << "gamma=" << g << " pivot " << i;
          L[i * J + i] = std::sqrt(s);
        } else {
          L[i * J + j] = s / L[j * J + j];
        }
      }
    }
  }
}

TEST(GramOracle, ZeroAndErrors) {
  EXPECT_EQ(frac_seminorm_oracle(std::vector<double>(5, 0.0), 0.25, 0.2), 0.0);
  EXPECT_THROW((void)frac_gram_oracle(0.5, 0.1, 4), DomainError);
  EXPECT_THROW((void)frac_gram_oracle(0.0, 0.1, 4), DomainError);
  EXPECT_THROW((void)frac_gram_oracle(0.25, 0.1, 257), ConfigError);
  EXPECT_THROW((void)frac_seminorm_oracle(std::vector<double>{}, 0.25, 0.1), ConfigError);
}

TEST(GramOracle, CoercivitySandwich) {
  for (double g : {0.1, 0.2, 0.24, 0.374}) {
    const std::size_t J = 8;
    const double tau = 1.0 / J;
    const auto G = frac_gram_oracle(g, tau, J);
    const auto C = frac_cross_gram_oracle(g, tau, J);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto v = random_cells(J, 100 + seed);
      double norm = 0.0, cross = 0.0;
      for (std::size_t i = 0; i < J; ++i) {
        for (std::size_t j = 0; j < J; ++j) {
          norm += v[i] * G[i * J + j] * v[j];
          cross += v[i] * C[i * J + j] * v[j];
        }
      }
      const double c = std::cos(g * std::numbers::pi);
      EXPECT_GE(cross, c * norm * (1.0 - 1e-10)) << "gamma=" << g;
      EXPECT_LE(cross, norm / c * (1.0 + 1e-10)) << "gamma=" << g;
    }
  }
}

TEST(FracSeminorm, CellIndicatorOnFineGrid) {
  // w = chi of the second of 4 coarse cells times one spatial hat, sampled on
  // 2^10 fine cells.
  const double gamma = 0.25;
  const std::size_t Jc = 4, Jf = 1024, N = 7;
  const auto mass = assemble_mass(SpatialMesh::uniform(N));
  std::vector<double> w(Jf * N, 0.0);
  for (std::size_t i = Jf / Jc; i < 2 * Jf / Jc; ++i) w[i * N + 3] = 1.0;
  const double hat = std::sqrt(mass.diag[3]);
  const double oracle = hat * frac_seminorm_oracle(std::vector<double>{0.0, 1.0, 0.0, 0.0}, gamma, 1.0 / Jc);
  const double avg = frac_seminorm(w, N, gamma, 1.0 / Jf, mass, FracNormMethod::CellAverage);
  const double quad = frac_seminorm(w, N, gamma, 1.0 / Jf, mass, FracNormMethod::CellQuadrature);
  EXPECT_NEAR(avg, oracle, 0.02 * oracle);
  EXPECT_NEAR(quad, oracle, 1e-9 * oracle);
}

TEST(FracSeminorm, MatchesOracleOnRandomInputs) {
  const TridiagonalOperator euclid;
  for (double g : {0.125, 0.25, 0.375}) {
    for (std::size_t J : {16u, 64u}) {
      const auto w = random_cells(J, 7 * J + static_cast<std::uint64_t>(8 * g));
      const double oracle = frac_seminorm_oracle(w, g, 1.0 / J);
      EXPECT_NEAR(frac_seminorm(w, 1, g, 1.0 / J, euclid), oracle, 1e-9 * oracle);
    }
  }
}

TEST(FracSeminorm, CellAverageConsistency) {
  // w(t) = t: ||D^g w||^2 = 1 / ((3 - 2g) Gamma(2 - g)^2).
  const TridiagonalOperator euclid;
  for (double g : {0.125, 0.25, 0.375}) {
    const double exact = 1.0 / (std::sqrt(3.0 - 2.0 * g) * std::tgamma(2.0 - g));
    std::vector<double> err;
    for (std::size_t J : {64u, 128u, 256u, 512u, 1024u}) {
      std::vector<double> w(J);
      for (std::size_t i = 0; i < J; ++i) w[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(J);
      err.push_back(std::abs(frac_seminorm(w, 1, g, 1.0 / J, euclid, FracNormMethod::CellAverage) - exact));
    }
    for (double order : observed_order(err)) EXPECT_GE(order, 0.5) << "gamma=" << g;
  }
}

TEST(FracSeminorm, ShapeErrors) {
  const TridiagonalOperator euclid;
  const std::vector<double> w(10, 1.0);
  EXPECT_THROW((void)frac_seminorm(w, 3, 0.25, 0.1, euclid), ConfigError);
  EXPECT_THROW((void)frac_seminorm(w, 2, 0.25, 0.1, assemble_mass(SpatialMesh::uniform(3))), ConfigError);
  EXPECT_THROW((void)frac_seminorm(w, 1, 0.25, 0.0, euclid), ConfigError);
  EXPECT_THROW((void)frac_seminorm(w, 1, 0.5, 0.1, euclid), DomainError);
}

TEST(ObservedOrder, Cases) {
  const auto a = observed_order(std::vector<double>{0.4, 0.2, 0.1});
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NEAR(a[0], 1.0, 1e-15);
  EXPECT_NEAR(a[1], 1.0, 1e-15);
  const auto b = observed_order(std::vector<double>{1.0, 1.0});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], 0.0);
  EXPECT_TRUE(observed_order(std::vector<double>{0.3}).empty());
  EXPECT_THROW((void)observed_order(std::vector<double>{0.1, 0.0}), DomainError);
  EXPECT_THROW((void)observed_order(std::vector<double>{-0.1, 0.2}), DomainError);
}

TEST(Report, UpdateOrdersAndAxis) {
  ConvergenceReport r;
  r.levels = {{4, 0.1, 0.0625, 0.8, 0.4}, {5, 0.1, 0.03125, 0.4, 0.1}};
  r.update_orders();
  ASSERT_EQ(r.order_E1.size(), 1u);
  EXPECT_NEAR(r.order_E1[0], 1.0, 1e-15);
  EXPECT_NEAR(r.order_E2[0], 2.0, 1e-15);
  r.levels.resize(1);
  r.update_orders();
  EXPECT_TRUE(r.order_E1.empty());
  EXPECT_EQ(parse_axis("space"), StudyAxis::Space);
  EXPECT_EQ(to_string(StudyAxis::Time), "time");
  EXPECT_THROW((void)parse_axis("both"), ConfigError);
}

}  // namespace
