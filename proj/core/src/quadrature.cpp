#include "fracwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracwave/error.hpp"

namespace fracwave::quad {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

}  // namespace

// Newton iteration on the three-term recurrence, starting from the usual
// asymptotic guesses for the extreme zeros and extrapolation inside.
Rule gauss_jacobi(std::size_t n, double a, double b) {
  if (n == 0) throw DomainError("gauss_jacobi: need at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");

  const double ab = a + b;
  const auto nd = static_cast<double>(n);
  std::vector<double> x(n), w(n);

  for (std::size_t i = 0; i < n; ++i) {
    double z = 0.0;
    if (i == 0) {
      const double an = a / nd, bn = b / nd;
      const double r1 = (1.0 + a) * (2.78 / (4.0 + nd * nd) + 0.768 * an / nd);
      const double r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
      z = 1.0 - r1 / r2;
    } else if (i == 1) {
      const double r1 = (4.1 + a) / ((1.0 + a) * (1.0 + 0.156 * a));
      const double r2 = 1.0 + 0.06 * (nd - 8.0) * (1.0 + 0.12 * a) / nd;
      const double r3 = 1.0 + 0.012 * b * (1.0 + 0.25 * std::abs(a)) / nd;
      z = x[0] - (1.0 - x[0]) * r1 * r2 * r3;
    } else if (i == 2) {
      const double r1 = (1.67 + 0.28 * a) / (1.0 + 0.37 * a);
      const double r2 = 1.0 + 0.22 * (nd - 8.0) / nd;
      const double r3 = 1.0 + 8.0 * b / ((6.28 + b) * nd * nd);
      z = x[1] - (x[0] - x[1]) * r1 * r2 * r3;
    } else if (i == n - 2) {
      const double r1 = (1.0 + 0.235 * b) / (0.766 + 0.119 * b);
      const double r2 = 1.0 / (1.0 + 0.639 * (nd - 4.0) / (1.0 + 0.71 * (nd - 4.0)));
      const double r3 = 1.0 / (1.0 + 20.0 * a / ((7.5 + a) * nd * nd));
      z = x[i - 1] + (x[i - 1] - x[n - 4]) * r1 * r2 * r3;
    } else if (i == n - 1) {
      const double r1 = (1.0 + 0.37 * b) / (1.67 + 0.28 * b);
      const double r2 = 1.0 / (1.0 + 0.22 * (nd - 8.0) / nd);
      const double r3 = 1.0 / (1.0 + 8.0 * a / ((6.28 + a) * nd * nd));
      z = x[i - 1] + (x[i - 1] - x[n - 3]) * r1 * r2 * r3;
    } else {
      z = 3.0 * x[i - 1] - 3.0 * x[i - 2] + x[i - 3];
    }

    double p1 = 0.0, p2 = 0.0, pp = 0.0, temp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      temp = 2.0 + ab;
      p1 = (a - b + temp * z) / 2.0;
      p2 = 1.0;
      for (std::size_t j = 2; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const auto jd = static_cast<double>(j);
        temp = 2.0 * jd + ab;
        const double c1 = 2.0 * jd * (jd + ab) * (temp - 2.0);
        const double c2 = (temp - 1.0) * (a * a - b * b + temp * (temp - 2.0) * z);
        const double c3 = 2.0 * (jd - 1.0 + a) * (jd - 1.0 + b) * temp;
        p1 = (c2 * p2 - c3 * p3) / c1;
      }
      pp = (nd * (a - b - temp * z) * p1 + 2.0 * (nd + a) * (nd + b) * p2) /
           (temp * (1.0 - z * z));
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 4e-16 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw DomainError("gauss_jacobi: Newton iteration failed");
    x[i] = z;
    w[i] = temp / (pp * p2);
  }
  // Common factor Gamma(a+n) Gamma(b+n) / (n! Gamma(n+a+b+1)) 2^{a+b}; the
  // weights are then rescaled to the exact total mass, which removes the
  // rounding of the gamma ratios.
  double mass = 0.0;
  for (double v : w) mass += v;
  const double exact_mass = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(ab + 2.0)) *
                            std::pow(2.0, ab + 1.0);
  for (double& v : w) v *= exact_mass / mass;
  // Ascending order.
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
  return Rule{std::move(x), std::move(w)};
}

Rule gauss_legendre(std::size_t n) { return gauss_jacobi(n, 0.0, 0.0); }

Rule gauss_legendre_unit(std::size_t n) {
  Rule r = gauss_legendre(n);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
    r.weights[i] *= 0.5;
  }
  return r;
}

Rule gauss_jacobi_unit(std::size_t n, double a) {
  // s = (1 + x) / 2 maps weight (1+x)^a on [-1,1] to 2^{a+1} s^a on (0,1).
  Rule r = gauss_jacobi(n, 0.0, a);
  const double scale = std::pow(2.0, -(a + 1.0));
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
    r.weights[i] *= scale;
  }
  return r;
}

Result tanh_sinh(const EndpointIntegrand& f, double a, double b, double abs_tol,
                 double rel_tol, int max_levels) {
  if (!(b > a)) {
    if (a == b) return {};
    throw DomainError("tanh_sinh: interval must satisfy a < b");
  }
  constexpr double kTMax = 6.0;
  const double half = 0.5 * (b - a);
  const double len = b - a;

  auto sample = [&](double t) {
    const double v = kHalfPi * std::sinh(t);
    const double from_a = len / (1.0 + std::exp(-2.0 * v));
    const double from_b = len / (1.0 + std::exp(2.0 * v));
    if (from_a == 0.0 || from_b == 0.0) return 0.0;
    const double ch = std::cosh(v);
    const double weight = half * kHalfPi * std::cosh(t) / (ch * ch);
    if (weight == 0.0) return 0.0;
    const double x = from_a <= from_b ? a + from_a : b - from_b;
    return weight * f(x, from_a, from_b);
  };

  // Level 0: unit step.
  double h = 1.0;
  double sum = sample(0.0);
  for (double t = 1.0; t <= kTMax; t += 1.0) sum += sample(t) + sample(-t);
  double estimate = h * sum;
  Result res{estimate, std::abs(estimate), 0};

  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    double added = 0.0;
    for (double t = h; t <= kTMax; t += 2.0 * h) added += sample(t) + sample(-t);
    sum += added;
    const double next = h * sum;
    res.error = std::abs(next - estimate);
    res.value = next;
    res.levels = level;
    estimate = next;
    if (level >= 3 && res.error <= std::max(abs_tol, rel_tol * std::abs(next))) break;
  }
  return res;
}

Result exp_sinh(const std::function<double(double)>& f, double abs_tol, double rel_tol,
                int max_levels) {
  constexpr double kTLow = -5.0;
  constexpr double kTHigh = 4.0;
  auto sample = [&](double t) {
    const double v = kHalfPi * std::sinh(t);
    const double x = std::exp(v);
    if (x == 0.0 || !std::isfinite(x)) return 0.0;
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx * x * kHalfPi * std::cosh(t);
  };

  double h = 1.0;
  double sum = 0.0;
  for (double t = kTLow; t <= kTHigh; t += 1.0) sum += sample(t);
  double estimate = h * sum;
  Result res{estimate, std::abs(estimate), 0};
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    double added = 0.0;
    for (double t = kTLow + h; t < kTHigh; t += 2.0 * h) added += sample(t);
    sum += added;
    const double next = h * sum;
    res.error = std::abs(next - estimate);
    res.value = next;
    res.levels = level;
    estimate = next;
    if (level >= 3 && res.error <= std::max(abs_tol, rel_tol * std::abs(next))) break;
  }
  return res;
}

Result piecewise_tanh_sinh(const EndpointIntegrand& f, std::span<const double> breakpoints,
                           double abs_tol, double rel_tol) {
  Result total;
  if (breakpoints.size() < 2) return total;
  const double pieces = static_cast<double>(breakpoints.size() - 1);
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k + 1] > breakpoints[k])) continue;
    const Result r = tanh_sinh(f, breakpoints[k], breakpoints[k + 1], abs_tol / pieces, rel_tol);
    total.value += r.value;
    total.error += r.error;
    total.levels = std::max(total.levels, r.levels);
  }
  return total;
}

}  // namespace fracwave::quad
