#pragma once

#include "levytrim/verify.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace levytrim::cli {

struct SuiteOptions {
  std::uint64_t seed = 1;
  int threads = 1;
  std::filesystem::path work_dir;  // scratch space for the determinism criterion
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  std::vector<VerificationReport> reports;
  double runtime_ms = 0.0;
};

inline constexpr int kCriterionCount = 9;

/// Runs one acceptance criterion (1..9) at its documented sample sizes.
CriterionResult run_criterion(int id, const SuiteOptions& options);

/// Failing statistics recorded as unattainable with the analysis in the README. A criterion
/// whose only failures are listed here is reported as FAIL but does not count as a regression.
struct KnownDeviation {
  int criterion;
  std::string measure;  // empty: any report
  std::string statistic;
  std::string reason;
};

const std::vector<KnownDeviation>& known_deviations();

/// Failing statistics of a result that are not known deviations.
std::vector<std::string> unexpected_failures(const CriterionResult& result);

}  // namespace levytrim::cli
