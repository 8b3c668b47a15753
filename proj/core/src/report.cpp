#include "mgig/report.hpp"

#include <Eigen/Core>

#include <cmath>

namespace mgig {

namespace {

const char* comparison_name(Comparison c) {
  switch (c) {
    case Comparison::kAtMost: return "at_most";
    case Comparison::kGreaterThan: return "greater_than";
    case Comparison::kLessThan: return "less_than";
  }
  return "unknown";
}

// JSON has no NaN or infinity.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

bool CheckResult::pass() const {
  if (std::isnan(value)) return false;
  switch (comparison) {
    case Comparison::kAtMost: return value <= tolerance;
    case Comparison::kGreaterThan: return value > tolerance;
    case Comparison::kLessThan: return value < tolerance;
  }
  return false;
}

CheckResult at_most(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, Comparison::kAtMost};
}

CheckResult greater_than(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, Comparison::kGreaterThan};
}

CheckResult less_than(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, Comparison::kLessThan};
}

bool VerificationReport::pass() const {
  if (results.empty()) return false;
  for (const auto& r : results)
    if (!r.pass()) return false;
  return true;
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (const auto& r : other.results) {
    CheckResult copy = r;
    copy.name = prefix + copy.name;
    results.push_back(std::move(copy));
  }
  for (const auto& [key, value] : other.extra.items()) extra[prefix + key] = value;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& r : results)
    if (r.name == name) return &r;
  return nullptr;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["config"] = config;
  auto& rs = j["results"] = nlohmann::json::array();
  for (const auto& r : results) {
    rs.push_back({{"name", r.name},
                  {"value", number(r.value)},
                  {"tolerance", number(r.tolerance)},
                  {"comparison", comparison_name(r.comparison)},
                  {"pass", r.pass()}});
  }
  j["seed"] = seed;
  j["versions"] = {{"mgig", library_version()},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                 "." + std::to_string(EIGEN_MINOR_VERSION)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  j["pass"] = pass();
  for (const auto& [key, value] : extra.items()) j[key] = value;
  j["wallclock"] = wallclock_seconds;
  return j;
}

nlohmann::json without_wallclock(nlohmann::json j) {
  j.erase("wallclock");
  return j;
}

std::string library_version() { return MGIG_VERSION_STRING; }

}  // namespace mgig
