#pragma once

#include <string>
#include <vector>

#include "exponents.hpp"

namespace fel {

struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0;
  double expected = 0;
  double tolerance = 0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  bool pass = true;
  std::vector<CheckResult> checks;
};

struct VerifyOptions {
  std::string suite;       // empty: run all of saddle, sandwich, mcollapse, limits, gmd
  double ro_override = 0;  // saddle suite: single-ro mode
  double tol_override = 0; // saddle suite: value tolerance (default 1e-3)
  int threads = 0;
};

std::vector<SuiteResult> run_verification(const Channel& ch,
                                          const VerifyOptions& opt = {});

int count_failures(const std::vector<SuiteResult>& suites);

std::string verification_json(const std::vector<SuiteResult>& suites);

// human-readable one-line-per-check summary
std::string verification_summary(const std::vector<SuiteResult>& suites);

}  // namespace fel
