#pragma once

// Verification campaigns behind the CLI verbs. Each returns a
// VerificationReport whose numerical fields depend only on the config and
// seed, never on the worker count.

#include "mgig/identities.hpp"
#include "mgig/independence.hpp"
#include "mgig/maps.hpp"
#include "mgig/mh_sampler.hpp"
#include "mgig/report.hpp"
#include "mgig/yang_baxter.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mgig {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

// ---------------------------------------------------------------------------
// Maps

struct MapsCampaignConfig {
  std::vector<int> dims{1, 2, 3};
  std::vector<MapParams> grid{MapParams(2.0, 0.5)};
  std::size_t pairs = 200;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  double max_condition = 1e4;

  bool involution = true;
  bool jacobians = true;
  bool derivatives = true;
  bool cone = true;
  /// Jacobian and derivative checks run on the first N pairs of each dim
  /// up to jacobian_max_dim.
  std::size_t jacobian_pairs = 50;
  int jacobian_max_dim = 3;

  double involution_tolerance = 1e-10;
  double symmetry_tolerance = 1e-9;
  double determinant_tolerance = 1e-10;
  double scaling_tolerance = 1e-12;
  double jacobian_tolerance = 1e-4;
  double fd_tolerance = kFdIdentityTolerance;
  double algebraic_tolerance = kAlgebraicIdentityTolerance;
  double cone_tolerance = 1e-9;
  /// Relative agreement of the r = 1 matrix maps with the scalar maps.
  double scalar_tolerance = 1e-14;
};

VerificationReport maps_campaign(const MapsCampaignConfig& config);

/// Random pairs shared by several campaigns; pair i of dim r is a pure
/// function of (seed, role, r, i).
std::vector<SpdPair> random_pairs(int dim, std::size_t count, std::uint64_t seed, std::uint64_t role,
                                  double max_condition = 1e4);

// ---------------------------------------------------------------------------
// Density transport and the univariate functional equation

struct TransportSetting {
  double lambda;
  double alpha;
  double beta;
};

struct EffSetting {
  double lambda, alpha, beta, gamma1, gamma2;
};

struct TransportCampaignConfig {
  std::vector<int> dims{1, 2, 3};
  std::vector<TransportSetting> settings{
      {0.7, 2.0, 0.5}, {-1.3, 1.0, 0.0}, {2.5, 0.5, 3.0}, {1.0, 1.0, 1.0}, {0.3, 0.0, 1.5}};
  /// Coefficients a, b; random well-conditioned draws per dim when unset.
  std::optional<SpdMatrix> a;
  std::optional<SpdMatrix> b;
  std::size_t pairs = 1000;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  double max_condition = 1e4;
  double tolerance = 1e-9;

  std::vector<EffSetting> eff_settings{{1.0, 1.0, 0.0, 1.0, 1.0}, {0.7, 2.0, 0.5, 1.2, 0.8}, {-1.5, 0.3, 2.0, 0.5, 3.0}};
  std::size_t eff_grid_points = 50;
  double eff_grid_lo = 1e-2;
  double eff_grid_hi = 1e2;
  double eff_tolerance = 1e-10;

  bool mutation_control = true;
  double mutation_threshold = 1e-2;
};

VerificationReport transport_campaign(const TransportCampaignConfig& config);

// ---------------------------------------------------------------------------
// Monte Carlo independence campaigns

struct McCampaignConfig {
  int dim = 1;
  double lambda = 1.0;
  /// Map parameters of the direc campaign; both must be positive.
  double alpha = 2.0;
  double beta = 0.5;
  /// Identity when unset.
  std::optional<SpdMatrix> a;
  std::optional<SpdMatrix> b;
  std::size_t n = 20000;
  std::size_t permutations = 999;
  /// A p-value below 1e-3 needs B >= 1000; controls use their own count.
  std::size_t control_permutations = 4999;
  /// Family-wise level, Bonferroni-split across the three sub-tests.
  double level = 0.01;
  double control_level = 0.001;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  ChainConfig chain{};
  bool negative_control = true;
  std::size_t transport_pairs = 200;
  double transport_tolerance = 1e-9;

  /// Defaults for r >= 2, where draws come from MCMC and the tests use the
  /// O(N^2) exact statistics.
  static McCampaignConfig matrix_defaults(int dim);
  void validate() const;
};

/// phi^(alpha,beta) applied to MGIG(lambda, alpha a, b) x MGIG(lambda, beta b, a):
/// transport constancy, dCor(U, V), energy tests of U and V against their
/// claimed laws, and a control with X drawn at 3 alpha.
VerificationReport direc_campaign(const McCampaignConfig& config);

/// (U, V) = ((X + Y)^{-1}, X^{-1} - (X + Y)^{-1}) for
/// (X, Y) ~ MGIG(-lambda, a, b) x W(lambda, a): dCor(U, V) and energy tests of
/// U ~ MGIG(-lambda, b, a) and V ~ W(lambda, b), and a dependence control
/// with X ~ MGIG(+lambda, a, b).
VerificationReport my_property_campaign(const McCampaignConfig& config);

}  // namespace mgig
