#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace amoebakit {

struct AcceptanceOptions {
  int threads = 4;
  std::uint64_t seed = 1;   // sampling phase of the raster criteria
  int quad_nodes = 0;       // nonzero replaces the field quadrature size everywhere
  std::vector<int> criteria;  // empty: 1..8
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckResult> checks;
  std::string error;  // message of an exception that stopped the criterion
  double seconds = 0.0;
  double budget = 0.0;

  bool checks_pass() const;
  bool within_budget() const { return seconds <= budget; }
  bool pass() const { return checks_pass() && within_budget(); }
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool pass() const;
};

/// Runs one criterion (1..7) at the current thread count. Exceptions from
/// the library are caught and recorded as a failed criterion.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Runs the selected criteria. Criterion 8 compares the timing-free JSON of
/// 1..7 at one and at four threads byte for byte, reusing the main run when
/// it already covered 1..7 at one of those counts; its runtime is the rerun.
AcceptanceReport run_acceptance(const AcceptanceOptions& opts);

/// Check values and pass flags without timings: stable across thread counts.
nlohmann::json results_json(const AcceptanceReport& report);
nlohmann::json timing_json(const AcceptanceReport& report);

/// "criterion 3 PASS three-tentacle amoeba (7.1 s of 300 s)" plus any failed checks.
std::string summary_line(const CriterionResult& r);

}  // namespace amoebakit
