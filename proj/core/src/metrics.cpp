#include "fracwave/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracwave/error.hpp"
#include "fracwave/fracops.hpp"
#include "fracwave/quadrature.hpp"
#include "fracwave/toeplitz.hpp"

namespace fracwave {

namespace {

constexpr std::size_t kOracleMaxCells = 256;
constexpr std::size_t kCellNodes = 8;

double weighted_dot(const TridiagonalOperator& mass, std::span<const double> x,
                    std::span<const double> y) {
  if (mass.order() == 0) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
  }
  return mass.bilinear_form(x, y);
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw DomainError("fractional order must lie in (0, 1/2), got " + std::to_string(gamma));
  }
}

// Difference of the prolonged coarse field and the reference at fine nodes.
SolutionField difference(const SolutionField& U, const SolutionField& Uref) {
  SolutionField d = prolong(U, Uref.time, Uref.space);
  for (std::size_t k = 0; k < d.values.size(); ++k) d.values[k] = Uref.values[k] - d.values[k];
  return d;
}

double cell_quadrature_norm(std::span<const double> w, std::size_t width, double gamma, double tau,
                            const TridiagonalOperator& mass) {
  const std::size_t J = w.size() / width;
  // Jumps delta_i = w_i - w_{i-1} at t_{i-1}.
  std::vector<double> delta(w.begin(), w.end());
  for (std::size_t i = J; i-- > 1;) {
    for (std::size_t c = 0; c < width; ++c) delta[i * width + c] -= w[(i - 1) * width + c];
  }
  auto row = [&](const std::vector<double>& a, std::size_t i) {
    return std::span<const double>(a).subspan(i * width, width);
  };

  double sum = 0.0;
  for (std::size_t i = 0; i < J; ++i) sum += weighted_dot(mass, row(delta, i), row(delta, i));
  sum /= (1.0 - 2.0 * gamma);

  // History part h_i(s) = sum_{m>=1} delta_{i-m} (s+m)^{-gamma}, smooth on [0, 1].
  const quad::Rule jac = quad::gauss_jacobi_unit(kCellNodes, -gamma);
  const quad::Rule gl = quad::gauss_legendre_unit(kCellNodes);
  if (J > 1) {
    std::vector<double> kernel(J, 0.0);
    std::vector<double> hist(J * width);
    auto history = [&](double s) {
      for (std::size_t m = 1; m < J; ++m) kernel[m] = std::pow(s + static_cast<double>(m), -gamma);
      const ToeplitzPlan plan(kernel, J, width);
      plan.apply(delta, hist);
    };
    for (std::size_t q = 0; q < jac.size(); ++q) {
      history(jac.nodes[q]);
      double cross = 0.0;
      for (std::size_t i = 0; i < J; ++i) cross += weighted_dot(mass, row(delta, i), row(hist, i));
      sum += 2.0 * jac.weights[q] * cross;
    }
    for (std::size_t q = 0; q < gl.size(); ++q) {
      history(gl.nodes[q]);
      double sq = 0.0;
      for (std::size_t i = 0; i < J; ++i) sq += weighted_dot(mass, row(hist, i), row(hist, i));
      sum += gl.weights[q] * sq;
    }
  }
  const double c = std::pow(tau, -gamma) * rgamma(1.0 - gamma);
  return std::sqrt(std::max(0.0, tau * c * c * sum));
}

double cell_average_norm(std::span<const double> w, std::size_t width, double gamma, double tau,
                         const TridiagonalOperator& mass) {
  const std::size_t J = w.size() / width;
  const KernelWeights k = rl_cell_average_weights(gamma, tau, J);
  const ToeplitzPlan plan(k.view(), J, width);
  const std::vector<double> z = toeplitz_matvec(k.view(), w, plan);
  double sum = 0.0;
  for (std::size_t i = 0; i < J; ++i) {
    const auto zi = std::span<const double>(z).subspan(i * width, width);
    sum += weighted_dot(mass, zi, zi);
  }
  return std::sqrt(std::max(0.0, sum / tau));
}

// Signed distance t - b, exact when b is an endpoint of the current piece.
struct Piece {
  double c;
  double d;
  double offset(double t, double from_c, double from_d, double b) const {
    if (b == c) return from_c;
    if (b == d) return -from_d;
    return t - b;
  }
};

double left_kernel(double s, double gamma) { return s > 0.0 ? std::pow(s, -gamma) : 0.0; }

template <class Integrand>
double integrate_pieces(std::vector<double> breaks, double lo, double hi, Integrand&& f) {
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double c = breaks[k];
    const double d = breaks[k + 1];
    if (c < lo || d > hi || !(d > c)) continue;
    const Piece piece{c, d};
    const auto r = quad::tanh_sinh(
        [&](double t, double fa, double fb) { return f(piece, t, fa, fb); }, c, d, 1e-13, 1e-13, 12);
    total += r.value;
  }
  return total;
}

}  // namespace

double error_e1(const SolutionField& U, const SolutionField& Uref) {
  const SolutionField d = difference(U, Uref);
  const TridiagonalOperator A = assemble_stiffness(Uref.space);
  double worst = 0.0;
  for (std::size_t j = 0; j < d.rows(); ++j) worst = std::max(worst, A.quadratic_form(d.row(j)));
  return std::sqrt(worst);
}

double frac_seminorm(std::span<const double> w, std::size_t width, double gamma, double tau,
                     const TridiagonalOperator& mass, FracNormMethod method) {
  check_gamma(gamma);
  if (width == 0 || w.size() % width != 0 || w.empty()) {
    throw ConfigError("frac_seminorm: data is not a whole number of rows");
  }
  if (mass.order() != 0 && mass.order() != width) {
    throw ConfigError("frac_seminorm: mass matrix does not match the row width");
  }
  if (!(tau > 0.0)) throw ConfigError("frac_seminorm: tau must be positive");
  return method == FracNormMethod::CellQuadrature ? cell_quadrature_norm(w, width, gamma, tau, mass)
                                                  : cell_average_norm(w, width, gamma, tau, mass);
}

double error_e2(const SolutionField& U, const SolutionField& Uref, FracNormMethod method) {
  const SolutionField d = difference(U, Uref);
  const std::size_t J = d.time.J;
  const std::size_t N = d.space.N;
  const double tau = d.time.tau;
  std::vector<double> w(J * N);
  for (std::size_t i = 1; i <= J; ++i) {
    for (std::size_t c = 0; c < N; ++c) w[(i - 1) * N + c] = (d.at(i, c) - d.at(i - 1, c)) / tau;
  }
  return frac_seminorm(w, N, 0.5 * (Uref.alpha - 1.0), tau, assemble_mass(d.space), method);
}

std::vector<double> frac_gram_oracle(double gamma, double tau, std::size_t J) {
  check_gamma(gamma);
  if (J == 0 || J > kOracleMaxCells) throw ConfigError("frac_gram_oracle: need 1 <= J <= 256");
  const double T = tau * static_cast<double>(J);
  const double g2 = rgamma(1.0 - gamma) * rgamma(1.0 - gamma);
  std::vector<double> g(J * J);
  for (std::size_t i = 1; i <= J; ++i) {
    for (std::size_t j = i; j <= J; ++j) {
      const double a0 = tau * static_cast<double>(i - 1), a1 = tau * static_cast<double>(i);
      const double b0 = tau * static_cast<double>(j - 1), b1 = tau * static_cast<double>(j);
      const double v = integrate_pieces(
          {a0, a1, b0, b1}, b0, T, [&](const Piece& p, double t, double fa, double fb) {
            const double ki = left_kernel(p.offset(t, fa, fb, a0), gamma) -
                              left_kernel(p.offset(t, fa, fb, a1), gamma);
            const double kj = left_kernel(p.offset(t, fa, fb, b0), gamma) -
                              left_kernel(p.offset(t, fa, fb, b1), gamma);
            return ki * kj;
          });
      g[(i - 1) * J + (j - 1)] = g[(j - 1) * J + (i - 1)] = g2 * v;
    }
  }
  return g;
}

std::vector<double> frac_cross_gram_oracle(double gamma, double tau, std::size_t J) {
  check_gamma(gamma);
  if (J == 0 || J > kOracleMaxCells) throw ConfigError("frac_cross_gram_oracle: need 1 <= J <= 256");
  const double g2 = rgamma(1.0 - gamma) * rgamma(1.0 - gamma);
  std::vector<double> c(J * J, 0.0);
  for (std::size_t i = 1; i <= J; ++i) {
    for (std::size_t j = i; j <= J; ++j) {
      const double a0 = tau * static_cast<double>(i - 1), a1 = tau * static_cast<double>(i);
      const double b0 = tau * static_cast<double>(j - 1), b1 = tau * static_cast<double>(j);
      // Left-sided kernel of cell i lives on (a0, inf), right-sided of cell j on (-inf, b1).
      const double v = integrate_pieces(
          {a0, a1, b0, b1}, a0, b1, [&](const Piece& p, double t, double fa, double fb) {
            const double ki = left_kernel(p.offset(t, fa, fb, a0), gamma) -
                              left_kernel(p.offset(t, fa, fb, a1), gamma);
            const double kj = left_kernel(-p.offset(t, fa, fb, b1), gamma) -
                              left_kernel(-p.offset(t, fa, fb, b0), gamma);
            return ki * kj;
          });
      c[(i - 1) * J + (j - 1)] = g2 * v;
    }
  }
  return c;
}

double frac_seminorm_oracle(std::span<const double> w, double gamma, double tau) {
  const std::size_t J = w.size();
  if (J == 0) throw ConfigError("frac_seminorm_oracle: empty input");
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) {
    check_gamma(gamma);
    return 0.0;
  }
  const std::vector<double> g = frac_gram_oracle(gamma, tau, J);
  double s = 0.0;
  for (std::size_t i = 0; i < J; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < J; ++j) r += g[i * J + j] * w[j];
    s += w[i] * r;
  }
  return std::sqrt(std::max(0.0, s));
}

std::vector<double> observed_order(std::span<const double> errors) {
  for (double e : errors) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw DomainError("observed_order: errors must be positive and finite, got " + std::to_string(e));
    }
  }
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) out.push_back(std::log2(errors[k] / errors[k + 1]));
  return out;
}

std::string to_string(StudyAxis axis) { return axis == StudyAxis::Space ? "space" : "time"; }

StudyAxis parse_axis(const std::string& text) {
  if (text == "space") return StudyAxis::Space;
  if (text == "time") return StudyAxis::Time;
  throw ConfigError("unknown study axis '" + text + "' (expected space or time)");
}

void ConvergenceReport::update_orders() {
  order_E1.clear();
  order_E2.clear();
  if (levels.size() < 2) return;
  std::vector<double> e1, e2;
  for (const auto& l : levels) {
    e1.push_back(l.E1);
    e2.push_back(l.E2);
  }
  order_E1 = observed_order(e1);
  order_E2 = observed_order(e2);
}

}  // namespace fracwave
