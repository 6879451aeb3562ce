#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "fraclab/config.hpp"

namespace fraclab {

struct CheckResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

enum class VerifyLevel { kQuick, kFull };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::kFull;
  /// Reference physics and grid; the other sections are ignored.
  RunConfig reference;
  /// Multiplies the Hartree spectrum seen by the oracle check (1 = healthy).
  double kernel_fault = 1.0;
  std::uint64_t seed = 1;
  /// Restrict to these criterion ids (empty = all of the level).
  std::set<int> only;
  /// Called after each check finishes.
  std::function<void(const CheckResult&)> on_result;
};

/// Ids run at each level: quick covers 1-5, 8, 9; full adds 6, 7, 10-12.
std::vector<int> checks_for(VerifyLevel level);

std::vector<CheckResult> run_acceptance(const VerifyOptions& opts);

/// "[PASS]  3  negativity ...  (1.2 s)"
std::string format_result(const CheckResult& r);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace fraclab
