#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracwave {

/// Gamma function for x > 0; throws DomainError otherwise.
[[nodiscard]] double gamma(double x);

/// 1/Gamma(x) for any real x, zero at the poles.
[[nodiscard]] double rgamma(double x);

/// sin(pi * x) with exact argument reduction.
[[nodiscard]] double sin_pi(double x);

/// Parameters of the two-parameter Mittag-Leffler function E_{alpha,beta}.
struct MittagLefflerParams {
  double alpha = 1.0;  ///< in (0, 2]
  double beta = 1.0;   ///< > 0

  /// Throws DomainError unless 0 < alpha <= 2 and beta > 0.
  void validate() const;
};

/// Which evaluation route produced a Mittag-Leffler value.
enum class MittagLefflerBranch { Series, Asymptotic, BranchCut };

/// E_{alpha,beta}(z) for real z.
///
/// Routes: the Taylor series (compensated) while |z|^{1/alpha} <= 5 or z >= 0;
/// for z < 0 beyond that, the algebraic asymptotic series plus the pole
/// residues when its optimally truncated remainder is below roundoff, and
/// otherwise the residues plus the Hankel branch-cut integral evaluated by
/// exp-sinh quadrature. Throws OverflowError when the value exceeds double
/// range and DomainError for alpha == 1 in the intermediate band with beta != 1.
[[nodiscard]] double mittag_leffler(const MittagLefflerParams& p, double z);

/// Same as mittag_leffler and reports the evaluation route.
[[nodiscard]] double mittag_leffler(const MittagLefflerParams& p, double z,
                                    MittagLefflerBranch& branch);

/// Riemann-Liouville integral of order gamma >= 0 of t^mu evaluated at t:
/// Gamma(mu+1)/Gamma(mu+1+gamma) t^{mu+gamma}.
[[nodiscard]] double frac_integral_monomial(double gamma_order, double mu, double t);

/// m^p - (m-1)^p for m >= 1 without cancellation.
[[nodiscard]] double first_difference_of_power(double p, std::size_t m);

/// (m+1)^p - 2 m^p + (m-1)^p for m >= 1 without cancellation.
[[nodiscard]] double second_difference_of_power(double p, std::size_t m);

/// Cell-integrated Riemann-Liouville derivative weights on a uniform grid.
///
/// kappa[m] = integral over I_{j+m} of D^nu chi_{I_j}; the same for every
/// cell j because the grid is uniform.
struct KernelWeights {
  double nu = 0.5;
  double tau = 1.0;
  std::vector<double> kappa;

  [[nodiscard]] std::size_t size() const noexcept { return kappa.size(); }
  [[nodiscard]] std::span<const double> view() const noexcept { return kappa; }
  [[nodiscard]] double operator[](std::size_t m) const noexcept { return kappa[m]; }
};

/// kappa_m = tau^{1-nu}/Gamma(2-nu) [(m+1)^{1-nu} - 2 m^{1-nu} + (m-1)_+^{1-nu}],
/// m = 0..J-1. Throws DomainError unless 0 < nu < 1 and J >= 1.
[[nodiscard]] KernelWeights rl_cell_average_weights(double nu, double tau, std::size_t J);

}  // namespace fracwave
