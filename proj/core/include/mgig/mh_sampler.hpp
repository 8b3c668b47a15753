#pragma once

// Random-walk Metropolis-Hastings on the SPD cone for MGIG targets.
// Coordinates: log-Cholesky chart theta = (log L_ii, L_ij for i > j),
// x = L L^T, which is a global diffeomorphism onto the cone.

#include "mgig/distributions.hpp"
#include "mgig/rng.hpp"
#include "mgig/spd.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mgig {

struct ChainConfig {
  std::size_t burn_in = 2000;
  std::size_t thin = 10;
  double step_scale = 0.3;
  double target_accept = 0.3;
  bool adapt = true;
  /// Starting point; identity when unset.
  std::optional<SpdMatrix> start;

  void validate() const;
};

struct ChainResult {
  std::vector<SpdMatrix> draws;
  /// Post-burn-in acceptance rate.
  double acceptance_rate = 0.0;
  /// Effective sample size of the log-determinant trace divided by draws.
  double ess_per_draw = 0.0;
  /// Step scale in force after burn-in (adapted or not).
  double step_scale = 0.0;
  bool non_convergence = false;
};

ChainResult mgig_mh_sample(const MgigParams& p, const ChainConfig& cfg, std::size_t n, RngStream& rng);

/// Metropolis decision for log acceptance ratio `log_ratio`.
bool metropolis_accept(double log_ratio, RngStream& rng);

/// Log-Cholesky coordinates, packed row-major lower triangle.
Eigen::VectorXd log_cholesky_coords(const SpdMatrix& x);
SpdMatrix from_log_cholesky(const Eigen::Ref<const Eigen::VectorXd>& theta, int dim);
/// log |d x / d theta| up to an additive constant (entry coordinates):
/// sum_i (r - i + 1) theta_ii, 0-based i.
double log_cholesky_log_volume(const Eigen::Ref<const Eigen::VectorXd>& theta, int dim);

/// Geyer initial-monotone-sequence effective sample size.
double effective_sample_size(std::span<const double> series);

}  // namespace mgig
