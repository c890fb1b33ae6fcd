#pragma once

#include "hopflab/cli/config.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Invariant suites behind `hopflab verify`. Each check records the measured
// value and the bound it is held to; random probes come from the seed only,
// so a report is a pure function of (suite, seed).

namespace hopflab::cli {

enum class Bound { Below, Above };

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  Bound bound = Bound::Below;
  bool passed = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  bool passed() const;
  void below(std::string name, double value, double threshold, std::string note = {});
  void above(std::string name, double value, double threshold, std::string note = {});
  // Records a boolean condition as value 1 (true) or 0 against threshold 0.5.
  void require(std::string name, bool condition, std::string note = {});
};

const std::vector<std::string>& suite_names();

// Runs one suite, or every suite for "all". Throws InvalidArgument for an
// unknown name.
std::vector<SuiteReport> run_suite(std::string_view name, std::uint64_t seed);

Json to_json(const std::vector<SuiteReport>& reports);
// Fixed-width table, one line per check, then one summary line per suite.
std::string format_table(const std::vector<SuiteReport>& reports);

}  // namespace hopflab::cli
