#pragma once

// Structured outcome of a verification campaign.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mgig {

inline constexpr int kReportSchema = 1;

enum class Comparison {
  kAtMost,       ///< value <= tolerance
  kGreaterThan,  ///< value > tolerance
  kLessThan,     ///< value < tolerance
};

struct CheckResult {
  std::string name;
  double value;
  double tolerance;
  Comparison comparison = Comparison::kAtMost;

  /// NaN values never pass.
  bool pass() const;
};

CheckResult at_most(std::string name, double value, double tolerance);
CheckResult greater_than(std::string name, double value, double threshold);
CheckResult less_than(std::string name, double value, double threshold);

struct VerificationReport {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<CheckResult> results;
  /// Campaign-specific fields merged into the top level of the JSON.
  nlohmann::json extra = nlohmann::json::object();
  std::uint64_t seed = 0;
  double wallclock_seconds = 0.0;

  bool pass() const;
  void add(CheckResult r) { results.push_back(std::move(r)); }
  void merge(const VerificationReport& other, const std::string& prefix);
  const CheckResult* find(const std::string& name) const;

  /// {schema, command, config, results[], seed, versions, pass, ..., wallclock}.
  /// Everything except "wallclock" is a function of config and seed.
  nlohmann::json to_json() const;
};

/// JSON with the "wallclock" member removed, for reproducibility comparisons.
nlohmann::json without_wallclock(nlohmann::json j);

std::string library_version();

}  // namespace mgig
