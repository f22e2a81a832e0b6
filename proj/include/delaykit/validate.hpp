// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace delaykit::validate {

struct ValidateOptions {
  std::int64_t trials = 100'000;            // draws per distribution/moment check
  std::int64_t violation_trials = 100'000;  // draws per violation-probability check
  std::uint64_t seed = 42;
  int streams = 1;
  std::set<int> criteria;  // empty runs all of 1..9
};

/// One comparison: `measured` is the statistic that must not exceed `tolerance`
/// (or, for ordering checks, a count of violations against a tolerance of 0).
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = true;
  std::vector<CheckResult> checks;

  void add(CheckResult c);
};

struct ValidationReport {
  ValidateOptions options;
  std::vector<CriterionResult> criteria;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

inline constexpr int kCriterionCount = 9;

std::string criterion_title(int id);

CriterionResult run_criterion(int id, const ValidateOptions& opts);

ValidationReport run_acceptance(const ValidateOptions& opts);

/// Allowed |F - F̂| at a point: max(factor·√(F(1-F)/n) + floor, min_band).
double binomial_band(double f, std::int64_t n, double factor = 3.0, double floor = 0.0, double min_band = 0.0);

/// Compares `pdf` with the central difference of `cdf` (step 1e-4·t) at each
/// point; fails when any relative mismatch exceeds `rel_tol`.
CheckResult check_pdf_matches_cdf(const std::string& name, const std::function<double(double)>& cdf,
                                  const std::function<double(double)>& pdf, const std::vector<double>& points,
                                  double rel_tol = 1e-5);

/// JSON value for a double; non-finite values become the strings "inf", "-inf", "nan".
nlohmann::ordered_json json_number(double v);

}  // namespace delaykit::validate
