#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace polyvis::app {

struct CheckOutcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the command line (without program name); returns exit code and stdout.
using CliInvoker = std::function<std::pair<int, std::string>(const std::vector<std::string>&)>;

struct CheckConfig {
  bool quick = false;     // fewer instances and samples, no timing or literal event-count check
  unsigned threads = 1;   // for the Monte Carlo oracles
  std::vector<int> only;  // empty runs every selected criterion
  CliInvoker cli;         // required by the determinism check
  std::function<void(const CheckOutcome&)> on_result;
};

/// Criteria run by default: all thirteen, or the quick subset.
std::vector<int> default_checks(bool quick);

std::vector<CheckOutcome> run_checks(const CheckConfig& config);

/// Report lines with timing fields removed, for byte comparisons.
std::string strip_timing(const std::string& report);

}  // namespace polyvis::app
