#pragma once

// Self-check suite: compares the library against the reference computations
// in oracles.hpp and against closed forms. Used by `kronstat validate` and by
// the acceptance test.

#include <cstdint>
#include <string>
#include <vector>

#include "kronstat/serialization.hpp"

namespace kronstat {

struct CheckResult {
  int criterion = 0;
  std::string suite;
  std::string check;
  /// Most checks measure an error: expected 0, pass when got <= tolerance.
  /// Threshold checks (at_least) pass when got >= expected.
  bool at_least = false;
  double expected = 0.0;
  double got = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidationOptions {
  /// Suites to run; empty means all.
  std::vector<std::string> only;
  std::uint64_t seed = 20240607;
  /// "golden" perturbs one coefficient of the compiled-in moment table.
  std::string inject_fault;
};

/// Suite names in criterion order.
const std::vector<std::string>& validation_suites();

/// Throws InputError for an unknown suite name or fault.
std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

Json to_json(const CheckResult& r);
Json validation_report(const std::vector<CheckResult>& results);

}  // namespace kronstat
