#pragma once

// Acceptance suite. Each criterion computes its own oracle and prints one
// PASS/FAIL line; the `verify` command and the acceptance test binary share it.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace inflow::acceptance {

struct Outcome {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::vector<int> only;  // empty: all criteria
  unsigned jobs = 0;      // 0: hardware concurrency
  std::function<void(const std::string&)> progress;
};

inline constexpr int kCriteria = 9;

/// Runs the selected criteria concurrently; results are ordered by id.
std::vector<Outcome> run(const Options& opts = {});

/// "[PASS] 3 traveling-wave order: ratio 4.08 in [3.2, 4.8] (3.1 s)"
std::string format(const Outcome& o);

/// Prints every outcome and a summary line; returns the number of failures.
int report(const std::vector<Outcome>& outcomes, std::ostream& out);

}  // namespace inflow::acceptance
