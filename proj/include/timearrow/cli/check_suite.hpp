#pragma once

// The invariant suite run by `timearrow check`: every module's properties on
// golden and seeded random states, each reported as one pass/fail row.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace timearrow::cli {

struct CheckOptions {
  /// Substring matched against "module/name"; empty runs everything.
  std::string filter;
  std::uint64_t seed = 20080217;
  /// Resolution of the golden states.
  std::size_t grid_n = 4096;
  /// Replace the forward kernel by one with broken antisymmetry.
  bool corrupt_kernel = false;
};

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct CheckReport {
  std::vector<CheckResult> results;
  bool all_passed() const;
  std::size_t failures() const;
};

/// Runs the selected checks in a fixed order. When `progress` is given each
/// row is printed as soon as it completes.
CheckReport run_check_suite(const CheckOptions& options, std::ostream* progress = nullptr);

void print_row(const CheckResult& r, std::ostream& out);
void print_summary(const CheckReport& report, std::ostream& out);

}  // namespace timearrow::cli
