#include "fracwave/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "fracwave/error.hpp"

namespace fracwave {

TridiagonalOperator::TridiagonalOperator(std::size_t n, double lower, double centre,
                                         double upper)
    : sub(n > 0 ? n - 1 : 0, lower), diag(n, centre), super(n > 0 ? n - 1 : 0, upper) {}

void TridiagonalOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = order();
  if (x.size() != n || y.size() != n) throw ConfigError("TridiagonalOperator::apply: size mismatch");
  if (n == 0) return;
  if (n == 1) {
    y[0] = diag[0] * x[0];
    return;
  }
  y[0] = diag[0] * x[0] + super[0] * x[1];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    y[k] = sub[k - 1] * x[k - 1] + diag[k] * x[k] + super[k] * x[k + 1];
  }
  y[n - 1] = sub[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

std::vector<double> TridiagonalOperator::apply(std::span<const double> x) const {
  std::vector<double> y(order());
  apply(x, y);
  return y;
}

void TridiagonalOperator::apply_add(std::span<const double> x, double scale,
                                    std::span<double> y) const {
  const std::size_t n = order();
  if (x.size() != n || y.size() != n) {
    throw ConfigError("TridiagonalOperator::apply_add: size mismatch");
  }
  if (n == 0) return;
  if (n == 1) {
    y[0] += scale * diag[0] * x[0];
    return;
  }
  y[0] += scale * (diag[0] * x[0] + super[0] * x[1]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    y[k] += scale * (sub[k - 1] * x[k - 1] + diag[k] * x[k] + super[k] * x[k + 1]);
  }
  y[n - 1] += scale * (sub[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1]);
}

double TridiagonalOperator::bilinear_form(std::span<const double> x,
                                          std::span<const double> y) const {
  const std::size_t n = order();
  if (x.size() != n || y.size() != n) {
    throw ConfigError("TridiagonalOperator::bilinear_form: size mismatch");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double row = diag[k] * y[k];
    if (k > 0) row += sub[k - 1] * y[k - 1];
    if (k + 1 < n) row += super[k] * y[k + 1];
    s += x[k] * row;
  }
  return s;
}

double TridiagonalOperator::quadratic_form(std::span<const double> x) const {
  return bilinear_form(x, x);
}

TridiagonalOperator TridiagonalOperator::combine(double a, const TridiagonalOperator& lhs, double b,
                                                 const TridiagonalOperator& rhs) {
  if (lhs.order() != rhs.order()) throw ConfigError("TridiagonalOperator::combine: order mismatch");
  TridiagonalOperator out;
  out.sub.resize(lhs.sub.size());
  out.diag.resize(lhs.diag.size());
  out.super.resize(lhs.super.size());
  for (std::size_t k = 0; k < lhs.diag.size(); ++k) out.diag[k] = a * lhs.diag[k] + b * rhs.diag[k];
  for (std::size_t k = 0; k < lhs.sub.size(); ++k) {
    out.sub[k] = a * lhs.sub[k] + b * rhs.sub[k];
    out.super[k] = a * lhs.super[k] + b * rhs.super[k];
  }
  return out;
}

TridiagonalFactor::TridiagonalFactor(const TridiagonalOperator& op)
    : sub_(op.sub), pivot_(op.order()), upper_ratio_(op.super.size()) {
  const std::size_t n = op.order();
  for (std::size_t k = 0; k < n; ++k) {
    double p = op.diag[k];
    if (k > 0) p -= op.sub[k - 1] * upper_ratio_[k - 1];
    if (p == 0.0 || !std::isfinite(p)) {
      throw SingularityError("thomas_solve: zero pivot in row " + std::to_string(k));
    }
    pivot_[k] = p;
    if (k + 1 < n) upper_ratio_[k] = op.super[k] / p;
  }
}

void TridiagonalFactor::solve_in_place(std::span<double> rhs) const {
  const std::size_t n = order();
  if (rhs.size() != n) throw ConfigError("TridiagonalFactor::solve: size mismatch");
  if (n == 0) return;
  rhs[0] /= pivot_[0];
  for (std::size_t k = 1; k < n; ++k) rhs[k] = (rhs[k] - sub_[k - 1] * rhs[k - 1]) / pivot_[k];
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] -= upper_ratio_[k] * rhs[k + 1];
}

std::vector<double> TridiagonalFactor::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

std::vector<double> thomas_solve(const TridiagonalOperator& op, std::span<const double> rhs) {
  return TridiagonalFactor(op).solve(rhs);
}

bool cholesky_succeeds(const TridiagonalOperator& op) {
  if (!op.symmetric()) return false;
  double prev_l = 0.0;  // L(k, k-1)
  for (std::size_t k = 0; k < op.order(); ++k) {
    const double d = op.diag[k] - prev_l * prev_l;
    if (!(d > 0.0)) return false;
    const double lkk = std::sqrt(d);
    if (k + 1 < op.order()) prev_l = op.sub[k] / lkk;
  }
  return true;
}

}  // namespace fracwave
