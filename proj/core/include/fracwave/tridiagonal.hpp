#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracwave {

/// Square tridiagonal matrix of order N. `sub[k]` is entry (k+1, k),
/// `super[k]` is entry (k, k+1).
struct TridiagonalOperator {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> super;

  TridiagonalOperator() = default;
  /// Constant-stencil matrix: every row is (lower, centre, upper).
  TridiagonalOperator(std::size_t n, double lower, double centre, double upper);

  [[nodiscard]] std::size_t order() const noexcept { return diag.size(); }
  [[nodiscard]] bool symmetric() const noexcept { return sub == super; }

  /// y = this * x
  void apply(std::span<const double> x, std::span<double> y) const;
  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
  /// y += scale * this * x
  void apply_add(std::span<const double> x, double scale, std::span<double> y) const;
  /// x^T (this) x
  [[nodiscard]] double quadratic_form(std::span<const double> x) const;
  /// x^T (this) y
  [[nodiscard]] double bilinear_form(std::span<const double> x, std::span<const double> y) const;

  /// a * lhs + b * rhs, both of the same order.
  [[nodiscard]] static TridiagonalOperator combine(double a, const TridiagonalOperator& lhs,
                                                   double b, const TridiagonalOperator& rhs);
};

/// LU factors of a tridiagonal matrix without pivoting (Thomas algorithm).
/// Factor once and reuse for every right-hand side.
class TridiagonalFactor {
 public:
  /// Throws SingularityError on a zero (or non-finite) pivot.
  explicit TridiagonalFactor(const TridiagonalOperator& op);

  [[nodiscard]] std::size_t order() const noexcept { return pivot_.size(); }
  void solve_in_place(std::span<double> rhs) const;
  [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::vector<double> sub_;
  std::vector<double> pivot_;
  std::vector<double> upper_ratio_;
};

/// Solves op * x = rhs; throws SingularityError on a zero pivot.
[[nodiscard]] std::vector<double> thomas_solve(const TridiagonalOperator& op,
                                               std::span<const double> rhs);

/// Cholesky factorization of a symmetric tridiagonal matrix; false when a
/// pivot is not strictly positive, i.e. the matrix is not SPD.
[[nodiscard]] bool cholesky_succeeds(const TridiagonalOperator& op);

}  // namespace fracwave
