#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fracwave/quadrature.hpp"

namespace {

using namespace fracwave;

double integrate(const quad::Rule& r, auto f) {
  double s = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * f(r.nodes[q]);
  return s;
}

TEST(GaussLegendre, ExactForDegree2nMinus1) {
  for (std::size_t n : {1u, 2u, 5u, 12u, 24u}) {
    const quad::Rule r = quad::gauss_legendre(n);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      const double exact = (k % 2) ? 0.0 : 2.0 / static_cast<double>(k + 1);
      EXPECT_NEAR(integrate(r, [&](double x) { return std::pow(x, static_cast<double>(k)); }), exact, 1e-14)
          << "n=" << n << " k=" << k;
    }
  }
}

TEST(GaussLegendre, UnitWeightsSumToOne) {
  const quad::Rule r = quad::gauss_legendre_unit(9);
  double s = 0.0;
  for (double w : r.weights) s += w;
  EXPECT_NEAR(s, 1.0, 1e-15);
  for (double x : r.nodes) {
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(GaussJacobi, UnitRuleExactForWeightedPolynomials) {
  for (double a : {-0.49, -0.2, 0.3, 1.5}) {
    const std::size_t n = 8;
    const quad::Rule r = quad::gauss_jacobi_unit(n, a);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      // int_0^1 s^a s^k ds
      const double exact = 1.0 / (a + static_cast<double>(k) + 1.0);
      EXPECT_NEAR(integrate(r, [&](double x) { return std::pow(x, static_cast<double>(k)); }), exact,
                  1e-13)
          << "a=" << a << " k=" << k;
    }
  }
}

TEST(GaussJacobi, TwoSidedWeight) {
  // int_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
  const double a = 0.5, b = -0.3;
  const quad::Rule r = quad::gauss_jacobi(10, a, b);
  const double exact = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1) * std::tgamma(b + 1) /
                       std::tgamma(a + b + 2);
  EXPECT_NEAR(integrate(r, [](double) { return 1.0; }), exact, 1e-13);
}

TEST(TanhSinh, EndpointSingularity) {
  const quad::Result r =
      quad::tanh_sinh([](double, double da, double) { return 1.0 / std::sqrt(da); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  const quad::Result s = quad::tanh_sinh(
      [](double, double, double db) { return std::pow(db, -0.7); }, 2.0, 3.0);
  EXPECT_NEAR(s.value, 1.0 / 0.3, 1e-11);
}

TEST(TanhSinh, SmoothIntegrand) {
  const quad::Result r = quad::tanh_sinh([](double x, double, double) { return std::sin(x); }, 0.0,
                                         std::numbers::pi);
  EXPECT_NEAR(r.value, 2.0, 1e-14);
}

TEST(ExpSinh, DecayingIntegrand) {
  EXPECT_NEAR(quad::exp_sinh([](double x) { return std::exp(-x); }).value, 1.0, 1e-14);
  EXPECT_NEAR(quad::exp_sinh([](double x) { return std::sqrt(x) * std::exp(-x); }).value,
              std::tgamma(1.5), 1e-13);
}

TEST(PiecewiseTanhSinh, SplitsAtInteriorSingularity) {
  const std::vector<double> bp{0.0, 0.5, 1.0};
  const quad::Result r = quad::piecewise_tanh_sinh(
      [](double, double da, double db) { return 1.0 / std::sqrt(da * db); }, bp);
  EXPECT_NEAR(r.value, 2.0 * std::numbers::pi, 1e-11);
}

}  // namespace
