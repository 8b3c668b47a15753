#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace mgig {

/// Reproducible random stream. (seed, stream_id) fixes the sequence; distinct
/// stream ids give independent streams (seed_seq mixing of both words).
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Deterministic stream id for the `index`-th task within a named role.
std::uint64_t stream_for(std::uint64_t role, std::uint64_t index);

}  // namespace mgig
