#pragma once

// Permutation tests of independence and of equality in law on batches of
// vectorized draws, plus Kolmogorov-Smirnov helpers.

#include "mgig/rng.hpp"
#include "mgig/spd.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mgig {

/// N draws in isometric vectorize coordinates (one row per draw) plus the
/// manifest that produced them: {"sampler", "seed", "params", ...}.
class SampleBatch {
 public:
  SampleBatch(Eigen::MatrixXd coords, int matrix_dim, nlohmann::json manifest = nlohmann::json::object());

  static SampleBatch from_matrices(std::span<const SpdMatrix> draws, nlohmann::json manifest = nlohmann::json::object());
  static SampleBatch from_sym(std::span<const SymMatrix> draws, nlohmann::json manifest = nlohmann::json::object());
  static SampleBatch from_scalars(std::span<const double> draws, nlohmann::json manifest = nlohmann::json::object());

  std::size_t size() const { return static_cast<std::size_t>(coords_.rows()); }
  int coord_dim() const { return static_cast<int>(coords_.cols()); }
  int matrix_dim() const { return matrix_dim_; }
  const Eigen::MatrixXd& coords() const { return coords_; }
  const nlohmann::json& manifest() const { return manifest_; }
  nlohmann::json& manifest() { return manifest_; }
  /// True when the manifest names the sampler, the seed and the parameters.
  bool manifest_complete() const;

  SymMatrix matrix(std::size_t i) const;

 private:
  Eigen::MatrixXd coords_;
  int matrix_dim_;
  nlohmann::json manifest_;
};

struct IndependenceReport {
  std::string statistic;
  double value;
  std::size_t permutations;
  double p_value;
  double level;

  bool reject() const { return p_value < level; }
  nlohmann::json to_json() const;
};

inline constexpr std::size_t kMinPermutations = 99;
inline constexpr std::size_t kMinSamples = 100;

/// Squared distance covariance V-statistic of two univariate samples,
/// O(n log n).
double dcov2_fast(std::span<const double> x, std::span<const double> y);
/// Squared distance covariance V-statistic by the O(n^2) double-centering
/// definition; rows are observations.
double dcov2_exact(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
/// Squared distance correlation, dispatching on dimension.
double dcor2(const SampleBatch& u, const SampleBatch& v);

/// Distance correlation with a B-permutation null, p = (1 + #{T_b >= T}) / (B + 1).
/// Permutation b uses its own stream derived from one draw of `rng`, so the
/// result does not depend on `threads`.
IndependenceReport distance_correlation(const SampleBatch& u, const SampleBatch& v, std::size_t permutations,
                                        RngStream& rng, double level = 0.01, unsigned threads = 1);

/// Two-sample energy distance statistic n m / (n + m) * E_{n,m}.
double energy_statistic(const SampleBatch& a, const SampleBatch& b);

/// Energy two-sample test with a label-permutation null.
IndependenceReport energy_distance_test(const SampleBatch& a, const SampleBatch& b, std::size_t permutations,
                                        RngStream& rng, double level = 0.01, unsigned threads = 1);

struct KsResult {
  double statistic;
  double p_value;
};

/// Kolmogorov's limiting survival function Q(t) = 2 sum (-1)^(k-1) exp(-2 k^2 t^2).
double kolmogorov_q(double t);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Uniform random permutation of [0, n) by Fisher-Yates.
std::vector<std::size_t> random_permutation(std::size_t n, RngStream& rng);

}  // namespace mgig
