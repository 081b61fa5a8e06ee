#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracwave {

struct SelftestOptions {
  std::uint64_t seed = 0;
  /// Fault injection: the fast solver sees kappa_1 * (1 + 1e-3).
  bool perturb_kappa1 = false;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestSummary {
  std::vector<SuiteResult> suites;

  [[nodiscard]] bool passed() const;
  /// One "PASS|FAIL name: detail" line per suite.
  [[nodiscard]] std::string text() const;
};

/// Operator identities (semigroup, adjoint, coercivity, Mittag-Leffler
/// identities and growth), solver equivalence and E2 oracle agreement.
[[nodiscard]] SelftestSummary run_selftest(const SelftestOptions& options = {});

}  // namespace fracwave
