#include "fracwave/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "fracwave/fracops.hpp"
#include "fracwave/metrics.hpp"
#include "fracwave/quadrature.hpp"
#include "fracwave/scheme.hpp"
#include "fracwave/solver.hpp"

namespace fracwave {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

SuiteResult semigroup() {
  double worst = 0.0;
  for (double g : {0.25, 0.5, 0.9, 1.3}) {
    for (double b : {0.1, 0.75, 1.6}) {
      for (double mu : {-0.49, 0.0, 0.3, 2.0}) {
        for (double t : {0.01, 0.5, 1.0, 3.7}) {
          // D^{-g} D^{-b} t^mu: the inner result is c * t^{mu+b}.
          const double inner = frac_integral_monomial(b, mu, 1.0);
          const double lhs = inner * frac_integral_monomial(g, mu + b, t);
          const double rhs = frac_integral_monomial(g + b, mu, t);
          worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
      }
    }
  }
  return {"semigroup", worst <= 1e-12, "max rel diff " + sci(worst)};
}

double binom(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

SuiteResult adjoint(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double worst = 0.0;
  for (double g : {0.2, 0.5, 0.8}) {
    const quad::Rule jac = quad::gauss_jacobi_unit(12, g);
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> a(5), b(5);
      for (auto& x : a) x = coef(rng);
      for (auto& x : b) x = coef(rng);
      auto poly = [](const std::vector<double>& c, double t) {
        double s = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) s = s * t + c[k];
        return s;
      };
      // D^{-g} w = t^g sum a_k k!/Gamma(k+1+g) t^k
      std::vector<double> pa(a.size());
      for (std::size_t k = 0; k < a.size(); ++k) pa[k] = a[k] * frac_integral_monomial(g, static_cast<double>(k), 1.0);
      // v(1-u) = sum_m c_m u^m; D_{1-}^{-g} v = u^g sum c_m m!/Gamma(m+1+g) u^m with u = 1 - t
      std::vector<double> c(b.size(), 0.0);
      for (std::size_t k = 0; k < b.size(); ++k) {
        for (std::size_t m = 0; m <= k; ++m) {
          c[m] += b[k] * binom(static_cast<int>(k), static_cast<int>(m)) * ((m % 2) ? -1.0 : 1.0);
        }
      }
      for (std::size_t m = 0; m < c.size(); ++m) c[m] *= frac_integral_monomial(g, static_cast<double>(m), 1.0);
      double lhs = 0.0, rhs = 0.0;
      for (std::size_t q = 0; q < jac.size(); ++q) {
        const double s = jac.nodes[q];
        lhs += jac.weights[q] * poly(pa, s) * poly(b, s);
        rhs += jac.weights[q] * poly(a, 1.0 - s) * poly(c, s);
      }
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return {"adjoint", worst <= 1e-10, "max abs diff " + sci(worst)};
}

SuiteResult coercivity(std::mt19937_64& rng) {
  constexpr std::size_t J = 8;
  const double tau = 1.0 / static_cast<double>(J);
  std::normal_distribution<double> nd;
  bool ok = true;
  double lo_margin = 1e300, hi_margin = 1e300;
  for (double g : {0.1, 0.2, 0.24, 0.374}) {
    const auto G = frac_gram_oracle(g, tau, J);
    const auto C = frac_cross_gram_oracle(g, tau, J);
    const double cg = std::cos(g * 3.14159265358979323846);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> v(J);
      for (auto& x : v) x = nd(rng);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < J; ++i) {
        for (std::size_t j = 0; j < J; ++j) {
          num += v[i] * C[i * J + j] * v[j];
          den += v[i] * G[i * J + j] * v[j];
        }
      }
      const double q = num / den;
      lo_margin = std::min(lo_margin, q - cg);
      hi_margin = std::min(hi_margin, 1.0 / cg - q);
      if (!(q >= cg && q <= 1.0 / cg)) ok = false;
    }
  }
  return {"coercivity", ok, "margins low " + sci(lo_margin) + " high " + sci(hi_margin)};
}

SuiteResult ml_identities() {
  double worst = 0.0;
  for (double z : {-20.0, -3.0, -0.5, 0.0, 0.7, 2.5}) {
    worst = std::max(worst, std::abs(mittag_leffler({1.0, 1.0}, z) - std::exp(z)) / std::max(1.0, std::exp(z)));
  }
  for (double x : {0.1, 1.0, 2.5, 7.0, 15.0, 30.0}) {
    worst = std::max(worst, std::abs(mittag_leffler({2.0, 1.0}, -x * x) - std::cos(x)));
    worst = std::max(worst, std::abs(mittag_leffler({2.0, 2.0}, -x * x) - std::sin(x) / x));
  }
  return {"mittag-leffler identities", worst <= 1e-12, "max diff " + sci(worst)};
}

SuiteResult ml_growth() {
  double worst = 0.0;
  bool ok = true;
  for (double a : {1.25, 1.5, 1.75}) {
    for (double b : {a, 1.0, a + 0.51}) {
      double peak = 0.0;
      for (int k = 0; k <= 110; ++k) {
        const double t = std::pow(10.0, -3.0 + 0.1 * k);
        const double v = (1.0 + t) * std::abs(mittag_leffler({a, b}, -t));
        if (!std::isfinite(v)) ok = false;
        peak = std::max(peak, v);
      }
      worst = std::max(worst, peak);
    }
  }
  ok = ok && worst < 10.0;
  return {"mittag-leffler growth", ok, "max (1+t)|E(-t)| " + sci(worst)};
}

SuiteResult solver_equivalence(bool perturb) {
  double worst = 0.0;
  for (double a : {1.25, 1.5, 1.75}) {
    const DiscreteSystem sys =
        assemble_system(example1(a), TemporalGrid::uniform(200), SpatialMesh::uniform(31));
    const SolutionField ref = solve_stepping(sys);
    DiscreteSystem fast_sys = sys;
    if (perturb) fast_sys.kappa.kappa[1] *= 1.0 + 1e-3;
    const SolutionField fast = solve_fast_dnc(fast_sys);
    double d = 0.0, m = 0.0;
    for (std::size_t k = 0; k < ref.values.size(); ++k) {
      d = std::max(d, std::abs(ref.values[k] - fast.values[k]));
      m = std::max(m, std::abs(ref.values[k]));
    }
    worst = std::max(worst, d / m);
  }
  return {"solver equivalence", worst <= 1e-10, "max rel diff " + sci(worst)};
}

SuiteResult e2_oracle(std::mt19937_64& rng) {
  constexpr std::size_t J = 32;
  const double tau = 1.0 / static_cast<double>(J);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (double g : {0.125, 0.25, 0.375}) {
    const auto G = frac_gram_oracle(g, tau, J);
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> w(J);
      for (auto& x : w) x = nd(rng);
      double s = 0.0;
      for (std::size_t i = 0; i < J; ++i) {
        for (std::size_t j = 0; j < J; ++j) s += w[i] * G[i * J + j] * w[j];
      }
      const double exact = std::sqrt(s);
      const double est = frac_seminorm(w, 1, g, tau, TridiagonalOperator{});
      worst = std::max(worst, std::abs(est - exact) / exact);
    }
  }
  return {"E2 estimator vs oracle", worst <= 0.02, "max rel diff " + sci(worst)};
}

}  // namespace

bool SelftestSummary::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

std::string SelftestSummary::text() const {
  std::string out;
  for (const auto& s : suites) out += std::string(s.passed ? "PASS " : "FAIL ") + s.name + ": " + s.detail + "\n";
  return out;
}

SelftestSummary run_selftest(const SelftestOptions& options) {
  std::mt19937_64 rng(options.seed);
  SelftestSummary out;
  out.suites.push_back(semigroup());
  out.suites.push_back(adjoint(rng));
  out.suites.push_back(coercivity(rng));
  out.suites.push_back(ml_identities());
  out.suites.push_back(ml_growth());
  out.suites.push_back(solver_equivalence(options.perturb_kappa1));
  out.suites.push_back(e2_oracle(rng));
  return out;
}

}  // namespace fracwave
