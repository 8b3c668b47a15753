#pragma once

#include "mgig/spd.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mgig::cli {

enum class Command { kVerifyYb, kVerifyMaps, kVerifyAppendix, kVerifyTransport, kSample, kTestDirec, kTestMy };

enum class Law { kMgig, kGig, kGamma, kWishart };

/// Environment variable that overrides the built-in default seed.
inline constexpr const char* kSeedEnv = "MGIGYB_SEED";

struct RunConfig {
  Command command = Command::kVerifyYb;
  Law law = Law::kMgig;

  std::vector<int> dims;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::optional<double> lambda;
  /// Matrix specs: identity, diag:v1,v2,..., scaled:c or a CSV path.
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::optional<std::string> c;
  std::optional<double> shape;
  std::optional<double> rate;

  std::optional<std::size_t> trials;
  std::optional<std::size_t> n;
  std::optional<std::size_t> permutations;
  std::optional<std::size_t> control_permutations;
  std::optional<double> level;
  std::optional<double> tolerance;
  bool negative_control = true;

  std::optional<std::size_t> burn_in;
  std::optional<std::size_t> thin;
  std::optional<double> step_scale;

  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// JSON report path; stdout when empty.
  std::string out;
  /// CSV output of `sample`; stdout when empty.
  std::string csv;
};

/// Parses argv into a RunConfig. Throws ConfigError on malformed input.
/// Returns nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv);

/// Runs the campaign, writes the report, returns 0 iff every check passed.
int run(const RunConfig& config);

/// Parses argv and runs; maps errors to exit codes (2 for configuration and
/// I/O errors, 3 for numerical errors).
int main_entry(int argc, const char* const* argv);

/// Resolves a matrix spec for dimension `dim`.
SpdMatrix parse_matrix_spec(const std::string& spec, int dim);

std::uint64_t default_seed();

}  // namespace mgig::cli
