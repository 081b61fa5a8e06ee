#include "fracwave/spectral_ref.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "fftw_lock.hpp"
#include "fracwave/error.hpp"
#include "fracwave/fracops.hpp"
#include "fracwave/quadrature.hpp"

namespace fracwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Below this wave number the integral is done by quadrature, above it by the
// asymptotic expansion of the tail integral over (1, inf).
constexpr double kAsymptoticWaveNumber = 40.0;

double sine_moment_quadrature(double mu, double k) {
  // Gauss-Jacobi on [0, a] for the x^mu endpoint, Gauss-Legendre panels after.
  const double a = 0.125;
  static thread_local double cached_mu = std::numeric_limits<double>::quiet_NaN();
  static thread_local quad::Rule jac;
  if (!(cached_mu == mu)) {
    jac = quad::gauss_jacobi_unit(24, mu);
    cached_mu = mu;
  }
  static const quad::Rule gl = quad::gauss_legendre_unit(20);
  double sum = 0.0;
  const double scale = std::pow(a, mu + 1.0);
  for (std::size_t q = 0; q < jac.size(); ++q) sum += scale * jac.weights[q] * std::sin(k * a * jac.nodes[q]);
  const std::size_t panels = 4 + static_cast<std::size_t>(k / 2.0);
  const double len = (1.0 - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double c = a + len * static_cast<double>(p);
    for (std::size_t q = 0; q < gl.size(); ++q) {
      const double x = c + len * gl.nodes[q];
      sum += len * gl.weights[q] * std::pow(x, mu) * std::sin(k * x);
    }
  }
  return sum;
}

// Im of int_0^1 x^mu e^{ikx} dx = int_0^inf - int_1^inf, the tail expanded
// by repeated integration by parts and truncated at its smallest term.
double sine_moment_asymptotic(double mu, double k) {
  using C = std::complex<double>;
  const C ik(0.0, k);
  const C whole = std::exp(std::lgamma(mu + 1.0)) * std::polar(1.0, 0.5 * kPi * (mu + 1.0)) *
                  std::pow(k, -mu - 1.0);
  C term = 1.0;
  C series = 0.0;
  double last = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 400; ++m) {
    const double mag = std::abs(term);
    if (mag > last) break;
    series += term;
    if (mag < 1e-18 * std::abs(series)) break;
    last = mag;
    term *= -(mu - static_cast<double>(m)) / ik;
    if (term == C(0.0)) break;
  }
  const C tail = -(std::exp(ik) / ik) * series;
  return (whole - tail).imag();
}

double rg(double x) { return rgamma(x); }

}  // namespace

std::vector<double> sine_coefficients(double mu, std::size_t n_max) {
  if (!(mu > -1.0)) throw DomainError("sine_coefficients: mu must exceed -1, got " + std::to_string(mu));
  std::vector<double> v(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double k = static_cast<double>(n) * kPi;
    const double m = k < kAsymptoticWaveNumber ? sine_moment_quadrature(mu, k)
                                               : sine_moment_asymptotic(mu, k);
    v[n - 1] = kSqrt2 * m;
  }
  return v;
}

double mode_response(double alpha, double lambda, double mu, double t) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("mode_response: alpha must lie in (0, 2]");
  if (!(lambda >= 0.0)) throw DomainError("mode_response: lambda must be nonnegative");
  if (!(mu > -1.0)) throw DomainError("mode_response: mu must exceed -1");
  if (!(t >= 0.0)) throw DomainError("mode_response: t must be nonnegative");
  if (t == 0.0) return 0.0;
  const double g = gamma(mu + 1.0);
  const double ta = std::pow(t, alpha);
  if (lambda == 0.0) return g * rg(alpha + mu + 1.0) * ta * std::pow(t, mu);
  return g * ta * std::pow(t, mu) *
         mittag_leffler({alpha, alpha + mu + 1.0}, -lambda * ta);
}

double mode_response_derivative(double alpha, double lambda, double mu, double t) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("mode_response: alpha must lie in (0, 2]");
  if (!(lambda >= 0.0)) throw DomainError("mode_response: lambda must be nonnegative");
  if (!(mu > -1.0)) throw DomainError("mode_response: mu must exceed -1");
  if (!(t > 0.0)) throw DomainError("mode_response_derivative: t must be positive");
  const double g = gamma(mu + 1.0);
  return g * std::pow(t, mu) * mittag_leffler({alpha, mu + 1.0}, -lambda * std::pow(t, alpha));
}

SpectralSolution spectral_solution(const ProblemSpec& p, std::size_t max_modes) {
  p.validate();
  if (!std::holds_alternative<datum::Zero>(p.u0) || !std::holds_alternative<datum::Zero>(p.u1)) {
    throw ConfigError("spectral reference needs zero initial data");
  }
  const auto* s = std::get_if<source::SeparablePower>(&p.source);
  if (s == nullptr) throw ConfigError("spectral reference needs a separable power source");
  if (max_modes == 0) throw ConfigError("spectral reference needs at least one mode");
  SpectralSolution out;
  out.alpha = p.alpha;
  out.mu_t = s->mu_t;
  out.scale = s->scale;
  out.mu_x = s->mu_x;
  out.v = sine_coefficients(s->mu_x, max_modes);
  out.lambda.resize(max_modes);
  for (std::size_t n = 1; n <= max_modes; ++n) {
    const double k = static_cast<double>(n) * kPi;
    out.lambda[n - 1] = k * k;
  }
  return out;
}

SpectralSolution single_mode_solution(double alpha, double mu_t, std::size_t k, double scale) {
  if (k == 0) throw ConfigError("single_mode_solution: mode index starts at 1");
  if (!(mu_t > -1.0)) throw DomainError("single_mode_solution: mu_t must exceed -1");
  SpectralSolution out;
  out.alpha = alpha;
  out.mu_t = mu_t;
  out.scale = scale;
  out.v.assign(k, 0.0);
  out.v[k - 1] = 1.0;
  out.lambda.resize(k);
  for (std::size_t n = 1; n <= k; ++n) {
    const double w = static_cast<double>(n) * kPi;
    out.lambda[n - 1] = w * w;
  }
  return out;
}

namespace {

// Decay exponent p and constant C in |v_n| <= C n^{-p}.
struct CoefficientBound {
  double p = 1.0;
  double C = 0.0;
};

CoefficientBound coefficient_bound(const SpectralSolution& s) {
  CoefficientBound b;
  b.p = std::min(*s.mu_x + 1.0, 1.0);
  for (std::size_t n = 1; n <= s.v.size(); ++n) {
    b.C = std::max(b.C, std::abs(s.v[n - 1]) * std::pow(static_cast<double>(n), b.p));
  }
  b.C *= 10.0;
  return b;
}

// Bound on |y_n - t^mu / lambda_n| once lambda t^alpha >= 10: the second
// algebraic term and the pole residues, each doubled.
double quasi_static_remainder_bound(double alpha, double mu, double lambda, double t) {
  const double g = gamma(mu + 1.0);
  const double algebraic = 2.0 * g * std::abs(rgamma(mu + 1.0 - alpha)) * std::pow(t, mu - alpha) /
                           (lambda * lambda);
  const double next = 2.0 * g * std::abs(rgamma(mu + 1.0 - 2.0 * alpha)) *
                      std::pow(t, mu - 2.0 * alpha) / (lambda * lambda * lambda);
  double residue = 0.0;
  if (alpha > 1.0) {
    residue = 2.0 * (2.0 * g / alpha) * std::pow(lambda, -(alpha + mu) / alpha) *
              std::exp(std::pow(lambda, 1.0 / alpha) * t * std::cos(kPi / alpha));
  }
  return algebraic + next + residue;
}

constexpr double kAsymptoticThreshold = 10.0;

double tail_with_bound(const SpectralSolution& s, const CoefficientBound& cb, std::size_t K,
                       double t) {
  if (!s.mu_x) return K >= s.v.size() ? 0.0 : std::numeric_limits<double>::infinity();
  if (t == 0.0) return 0.0;
  const double a = s.alpha;
  auto lam = [](double n) { return (n * kPi) * (n * kPi); };
  if (lam(static_cast<double>(K + 1)) * std::pow(t, a) < kAsymptoticThreshold) {
    return std::numeric_limits<double>::infinity();
  }
  // Sum over dyadic blocks [n, 2n) of the (decreasing) per-mode bound times
  // the block length.
  auto sq_term = [&](double n) {
    const double l = lam(n);
    const double v = cb.C * std::pow(n, -cb.p);
    const double z = quasi_static_remainder_bound(a, s.mu_t, l, t);
    return l * v * v * z * z;
  };
  double total = 0.0;
  double n = static_cast<double>(K + 1);
  for (int block = 0; block < 200; ++block) {
    const double part = n * sq_term(n);
    total += part;
    if (part <= 1e-4 * total || part == 0.0) break;
    n *= 2.0;
  }
  return std::abs(s.scale) * std::sqrt(total);
}

}  // namespace

double spectral_tail_estimate(const SpectralSolution& s, std::size_t K, double t) {
  if (!s.mu_x) return tail_with_bound(s, {}, K, t);
  return tail_with_bound(s, coefficient_bound(s), K, t);
}

SpectralReference reference_solution(const SpectralSolution& s, const TemporalGrid& tg,
                                     const SpatialMesh& sm, const SpectralOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("spectral reference: tol must be positive");
  if (s.v.size() != s.lambda.size() || s.v.empty()) {
    throw ConfigError("spectral reference: inconsistent mode data");
  }
  const std::size_t N = sm.N;
  const std::size_t J = tg.J;
  const std::size_t max_modes = s.v.size();
  CoefficientBound cb;
  if (s.mu_x) cb = coefficient_bound(s);

  SpectralReference out;
  out.field = SolutionField(tg, sm, s.alpha);
  out.modes_used.assign(J + 1, 0);

  // Choose the truncation per node before the expensive part, so a
  // TruncationError surfaces immediately.
  std::vector<double> tails(J + 1, 0.0);
  for (std::size_t j = 1; j <= J; ++j) {
    const double t = tg.node(j);
    std::size_t K = s.mu_x ? std::min<std::size_t>(64, max_modes) : max_modes;
    double tail = tail_with_bound(s, cb, K, t);
    while (!(tail < options.tol) && K < max_modes) {
      K = std::min(max_modes, 2 * K);
      tail = tail_with_bound(s, cb, K, t);
    }
    if (!(tail < options.tol)) {
      throw TruncationError("spectral reference: tolerance " + std::to_string(options.tol) +
                            " not reached at t = " + std::to_string(t) + " with " +
                            std::to_string(max_modes) + " modes");
    }
    out.modes_used[j] = K;
    tails[j] = tail;
  }
  out.tail_estimate = *std::max_element(tails.begin(), tails.end());

  std::vector<double> profile(N, 0.0);
  if (s.mu_x) {
    const double m = *s.mu_x;
    for (std::size_t k = 0; k < N; ++k) {
      const double x = sm.node(k);
      profile[k] = (x - std::pow(x, m + 2.0)) / ((m + 1.0) * (m + 2.0));
    }
  }

  // sum_n c_n sqrt(2) sin(n pi x_k) by folding n into 1..N and one DST-I.
  fftw_plan plan = nullptr;
  double* in = fftw_alloc_real(N);
  double* res = fftw_alloc_real(N);
  if (in == nullptr || res == nullptr) {
    fftw_free(in);
    fftw_free(res);
    throw ResourceError("spectral reference: allocation failed");
  }
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_r2r_1d(static_cast<int>(N), in, res, FFTW_RODFT00, FFTW_ESTIMATE);
  }
  fftw_free(in);
  fftw_free(res);

  const std::size_t period = 2 * (N + 1);
  auto fill_row = [&](std::size_t j, double* folded, double* dst) {
    const double t = tg.node(j);
    std::fill(folded, folded + N, 0.0);
    const double tmu = std::pow(t, s.mu_t);
    for (std::size_t n = 1; n <= out.modes_used[j]; ++n) {
      const double v = s.v[n - 1];
      if (v == 0.0) continue;
      double y = mode_response(s.alpha, s.lambda[n - 1], s.mu_t, t);
      if (s.mu_x) y -= tmu / s.lambda[n - 1];
      const double c = s.scale * v * y;
      const std::size_t r = n % period;
      if (r == 0 || r == N + 1) continue;
      if (r <= N) {
        folded[r - 1] += c;
      } else {
        folded[period - r - 1] -= c;
      }
    }
    fftw_execute_r2r(plan, folded, dst);
    auto row = out.field.row(j);
    for (std::size_t k = 0; k < N; ++k) {
      row[k] = 0.5 * kSqrt2 * dst[k] + s.scale * tmu * profile[k];
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, J));
  auto work = [&](std::size_t first) {
    double* folded = fftw_alloc_real(N);
    double* dst = fftw_alloc_real(N);
    for (std::size_t j = 1 + first; j <= J; j += workers) fill_row(j, folded, dst);
    fftw_free(folded);
    fftw_free(dst);
  };
  try {
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            work(w);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
  } catch (...) {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
    throw;
  }
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace fracwave
