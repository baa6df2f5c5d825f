#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace corrlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  int cases = 0;
  int failed = 0;
  double worst_residual = 0.0;
  double seconds = 0.0;
  /// 0 when there is no time limit.
  double time_limit = 0.0;
  std::string detail;
};

/// Residual tolerance used by the dedicated acceptance binary.
inline constexpr double kAcceptanceTolerance = 1e-9;

/// Runs criterion `id` (1..10) with the given seed and tolerance.
CriterionResult run_criterion(int id, std::uint64_t seed, double tol);
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, double tol);

/// "[PASS] 3 subdivision functoriality: 50 cases, worst 1.2e-15, 0.8 s"
std::string format_line(const CriterionResult& r);

}  // namespace corrlab
