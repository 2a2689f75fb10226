#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace slerho {

struct Artifact {
  std::string name;
  std::string content;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool values_ok = false;  ///< every numerical check holds
  bool pass = false;       ///< values_ok and within the runtime limit
  double seconds = 0;
  double time_limit = 0;  ///< 0: no runtime requirement
  std::string detail;
  nlohmann::json data;    ///< deterministic numbers only
  std::vector<Artifact> artifacts;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240531;
  std::size_t mc_paths = 100000;
  /// Empty: all criteria.
  std::vector<int> only;
  /// Where criterion 12 writes its two runs; a temporary directory if unset.
  std::optional<std::filesystem::path> scratch;
};

inline constexpr int kCriteria = 12;

CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Runs the selected criteria in order. Criterion 12 repeats criteria 1-11
/// twice and compares every artifact byte for byte.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// Criteria 1-11 written as files under `dir`: one JSON per criterion plus
/// its CSV/SVG artifacts and summary.json. Returns the results.
std::vector<CriterionResult> run_verify(const AcceptanceOptions& opts,
                                        const std::filesystem::path& dir);

/// "[PASS] 3 zero-driving oracle (0.01 s): ..." style line.
std::string format_line(const CriterionResult& r);

/// Numerical verdicts and data, without timings.
nlohmann::json summary_json(const std::vector<CriterionResult>& results);

}  // namespace slerho
