#include "fracwave/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracwave/error.hpp"
#include "fracwave/quadrature.hpp"

namespace fracwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogPi = 1.1447298858494002;  // log(pi)
// tgamma overflows just above 171.6.
constexpr double kGammaDirectLimit = 170.0;

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  [[nodiscard]] double value() const { return sum + carry; }
};

// log|1/Gamma(x)| and its sign; -inf at the poles.
double log_abs_rgamma(double x, int& sign) {
  if (x > 0.0) {
    sign = 1;
    return -std::lgamma(x);
  }
  if (x == std::floor(x)) {
    sign = 0;
    return -std::numeric_limits<double>::infinity();
  }
  const double s = sin_pi(x);
  sign = s > 0.0 ? 1 : -1;
  return std::lgamma(1.0 - x) + std::log(std::abs(s)) - kLogPi;
}

bool nearly_integer(double x) { return std::abs(x - std::round(x)) < 1e-14; }

// Sum z^k / Gamma(alpha k + beta), k >= 0.
double ml_series(double alpha, double beta, double z) {
  if (z == 0.0) return rgamma(beta);
  CompensatedSum acc;
  const double az = std::abs(z);
  const double log_az = std::log(az);
  const double peak = std::pow(az, 1.0 / alpha);
  for (int k = 0; k < 100000; ++k) {
    const double arg = alpha * k + beta;
    double term = 0.0;
    const double klog = k * log_az;
    if (arg < kGammaDirectLimit && klog < 700.0) {
      term = std::pow(z, k) * rgamma(arg);
    } else {
      int sign = 0;
      const double l = log_abs_rgamma(arg, sign);
      term = sign * std::exp(klog + l);
      if (z < 0.0 && (k % 2) == 1) term = -term;
    }
    acc.add(term);
    if (!std::isfinite(acc.sum)) {
      throw OverflowError("mittag_leffler: series overflow at z = " + std::to_string(z));
    }
    if (arg > peak + 2.0 && std::abs(term) <= 1e-17 * std::abs(acc.value())) break;
    if (arg > peak + 2.0 && term == 0.0) break;
  }
  return acc.value();
}

// Contribution of the two conjugate poles s = t^{1/alpha} e^{+-i pi/alpha}
// of s^{alpha-beta}/(s^alpha + t); present for 1 < alpha <= 2.
double ml_residues(double alpha, double beta, double t) {
  if (!(alpha > 1.0)) return 0.0;
  const double r = std::pow(t, 1.0 / alpha);
  const double phi = kPi / alpha;
  const double mag = std::pow(t, (1.0 - beta) / alpha) * std::exp(r * std::cos(phi));
  return (2.0 / alpha) * mag * std::cos(r * std::sin(phi) + (1.0 - beta) * phi);
}

// Algebraic asymptotic series -sum_{k>=1} z^{-k}/Gamma(beta - alpha k) at
// z = -t. Returns false when the optimally truncated remainder is not
// below roundoff relative to `scale`.
bool ml_asymptotic_algebraic(double alpha, double beta, double t, double scale, double& out) {
  CompensatedSum acc;
  const double log_t = std::log(t);
  double prev_env = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 400; ++k) {
    const double arg = beta - alpha * k;
    int sign = 0;
    const double l = log_abs_rgamma(arg, sign);
    const double log_mag = -k * log_t + l;
    if (sign != 0) {
      double term = sign * std::exp(log_mag);
      if (k % 2 == 0) term = -term;
      acc.add(term);
    }
    // |1/Gamma(arg)| <= Gamma(1 - arg)/pi bounds the coefficient size.
    const double one_minus = 1.0 - arg;
    const double log_env = one_minus > 0.5 ? -k * log_t + std::lgamma(one_minus) - kLogPi : log_mag;
    const double env = std::exp(log_env);
    const double ref = std::max({std::abs(acc.value()), scale, 1e-300});
    if (k >= 2 && env <= 1e-17 * ref) {
      out = acc.value();
      return true;
    }
    if (k >= 3 && one_minus > 1.5 && env > prev_env) return false;
    prev_env = env;
  }
  return false;
}

// (1/pi) int_0^inf e^{-r} r^{alpha-beta} (r^alpha sin(pi beta) -
//   t sin(pi(alpha-beta))) / (r^{2alpha} + 2 t r^alpha cos(pi alpha) + t^2) dr
double ml_branch_cut(double alpha, double beta, double t) {
  const double p = alpha - beta;
  const double sb = sin_pi(beta);
  const double sab = sin_pi(alpha - beta);
  const double ca = std::cos(kPi * alpha);
  auto f = [&](double r) {
    const double ra = std::pow(r, alpha);
    const double den = ra * ra + 2.0 * t * ra * ca + t * t;
    return std::exp(-r) * std::pow(r, p) * (ra * sb - t * sab) / den;
  };
  const quad::Result res = quad::exp_sinh(f, 1e-18, 1e-15, 12);
  return res.value / kPi;
}

double ml_negative(double alpha, double beta, double t, MittagLefflerBranch& branch) {
  if (std::pow(t, 1.0 / alpha) <= 5.0) {
    branch = MittagLefflerBranch::Series;
    return ml_series(alpha, beta, -t);
  }

  if (alpha == 1.0) {
    if (beta == 1.0) {
      branch = MittagLefflerBranch::Series;
      return std::exp(-t);
    }
    double alg = 0.0;
    if (nearly_integer(beta) && ml_asymptotic_algebraic(alpha, beta, t, 1.0 / t, alg)) {
      // e^z z^{1-beta} at z = -t, real for integer beta.
      const double n = std::round(1.0 - beta);
      const double sign = std::fmod(std::abs(n), 2.0) == 1.0 ? -1.0 : 1.0;
      branch = MittagLefflerBranch::Asymptotic;
      return alg + sign * std::exp(-t) * std::pow(t, 1.0 - beta);
    }
    throw DomainError("mittag_leffler: alpha = 1 with non-integer beta beyond the series range");
  }

  const double residues = ml_residues(alpha, beta, t);
  double alg = 0.0;
  if (ml_asymptotic_algebraic(alpha, beta, t, std::abs(residues), alg)) {
    branch = MittagLefflerBranch::Asymptotic;
    return alg + residues;
  }

  branch = MittagLefflerBranch::BranchCut;
  if (beta > alpha) {
    // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z keeps the branch-cut
    // integrand bounded at the origin.
    MittagLefflerBranch inner = branch;
    const double reduced = ml_negative(alpha, beta - alpha, t, inner);
    return (reduced - rgamma(beta - alpha)) / (-t);
  }
  return residues + ml_branch_cut(alpha, beta, t);
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0)) throw DomainError("gamma: argument must be positive, got " + std::to_string(x));
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) throw OverflowError("gamma: overflow at x = " + std::to_string(x));
  return g;
}

double sin_pi(double x) {
  double r = std::fmod(x, 2.0);
  if (r > 1.0) {
    r -= 2.0;
  } else if (r < -1.0) {
    r += 2.0;
  }
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  return std::sin(kPi * r);
}

double rgamma(double x) {
  if (x > 0.0) {
    if (x < kGammaDirectLimit) return 1.0 / std::tgamma(x);
    return std::exp(-std::lgamma(x));
  }
  if (x == std::floor(x)) return 0.0;
  const double one_minus = 1.0 - x;
  if (one_minus < kGammaDirectLimit) return std::tgamma(one_minus) * sin_pi(x) / kPi;
  int sign = 0;
  const double l = log_abs_rgamma(x, sign);
  return sign * std::exp(l);
}

void MittagLefflerParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("mittag_leffler: alpha must lie in (0, 2], got " + std::to_string(alpha));
  }
  if (!(beta > 0.0)) {
    throw DomainError("mittag_leffler: beta must be positive, got " + std::to_string(beta));
  }
}

double mittag_leffler(const MittagLefflerParams& p, double z, MittagLefflerBranch& branch) {
  p.validate();
  if (!std::isfinite(z)) throw DomainError("mittag_leffler: non-finite argument");
  double value = 0.0;
  if (z >= 0.0) {
    branch = MittagLefflerBranch::Series;
    value = ml_series(p.alpha, p.beta, z);
  } else {
    value = ml_negative(p.alpha, p.beta, -z, branch);
  }
  if (!std::isfinite(value)) {
    throw OverflowError("mittag_leffler: value not representable at z = " + std::to_string(z));
  }
  return value;
}

double mittag_leffler(const MittagLefflerParams& p, double z) {
  MittagLefflerBranch branch{};
  return mittag_leffler(p, z, branch);
}

double frac_integral_monomial(double gamma_order, double mu, double t) {
  if (!(mu > -1.0)) throw DomainError("frac_integral_monomial: mu must exceed -1");
  if (!(gamma_order >= 0.0)) throw DomainError("frac_integral_monomial: order must be >= 0");
  if (!(t >= 0.0)) throw DomainError("frac_integral_monomial: t must be >= 0");
  if (gamma_order == 0.0) return std::pow(t, mu);
  const double a = mu + 1.0;
  const double b = mu + 1.0 + gamma_order;
  double ratio = 0.0;
  if (b < kGammaDirectLimit) {
    ratio = std::tgamma(a) / std::tgamma(b);
  } else {
    ratio = std::exp(std::lgamma(a) - std::lgamma(b));
  }
  return ratio * std::pow(t, mu + gamma_order);
}

double first_difference_of_power(double p, std::size_t m) {
  if (m == 0) throw DomainError("first_difference_of_power: m must be >= 1");
  if (m == 1) return 1.0;
  const auto md = static_cast<double>(m);
  return -std::pow(md, p) * std::expm1(p * std::log1p(-1.0 / md));
}

double second_difference_of_power(double p, std::size_t m) {
  if (m == 0) throw DomainError("second_difference_of_power: m must be >= 1");
  const auto md = static_cast<double>(m);
  if (m <= 4) {
    return std::pow(md + 1.0, p) - 2.0 * std::pow(md, p) + std::pow(md - 1.0, p);
  }
  // 2 m^p sum_{k>=1} binom(p, 2k) m^{-2k}
  const double inv2 = 1.0 / (md * md);
  double binom = p * (p - 1.0) / 2.0;
  double scale = inv2;
  double sum = 0.0;
  for (int k = 1; k < 60; ++k) {
    const double term = binom * scale;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    const double j = 2.0 * k;
    binom *= (p - j) * (p - j - 1.0) / ((j + 1.0) * (j + 2.0));
    scale *= inv2;
  }
  return 2.0 * std::pow(md, p) * sum;
}

KernelWeights rl_cell_average_weights(double nu, double tau, std::size_t J) {
  if (!(nu > 0.0 && nu < 1.0)) {
    throw DomainError("rl_cell_average_weights: nu must lie in (0, 1), got " + std::to_string(nu));
  }
  if (!(tau > 0.0)) throw DomainError("rl_cell_average_weights: tau must be positive");
  if (J == 0) throw DomainError("rl_cell_average_weights: need J >= 1");
  const double p = 1.0 - nu;
  const double c = std::pow(tau, p) / std::tgamma(2.0 - nu);
  KernelWeights w{nu, tau, std::vector<double>(J)};
  w.kappa[0] = c;
  for (std::size_t m = 1; m < J; ++m) w.kappa[m] = c * second_difference_of_power(p, m);
  return w;
}

}  // namespace fracwave
