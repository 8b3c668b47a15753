#pragma once

// Deterministic density-level checks of the independence theorems: since
// phi has unit Jacobian, the log-density balance between inputs and
// outputs must be the same constant at every point.

#include "mgig/distributions.hpp"
#include "mgig/maps.hpp"

#include <span>
#include <vector>

namespace mgig {

/// Input and output laws for phi^(alpha,beta) with shape lambda and
/// coefficients a, b:
///   X ~ MGIG(lambda, alpha a, b),  Y ~ MGIG(lambda, beta b, a),
///   U ~ MGIG(lambda, alpha b, a),  V ~ MGIG(lambda, beta a, b).
struct TransportLaws {
  MgigKernel x, y, u, v;
};

TransportLaws theorem_laws(double lambda, const SpdMatrix& a, const SpdMatrix& b, const MapParams& p);

struct TransportResult {
  /// Delta at each pair.
  std::vector<double> deltas;
  double mean_delta;
  /// max |Delta - mean Delta|.
  double residual;
};

/// Constant offsets added to the four log-kernels; the residual must not
/// depend on them.
struct KernelOffsets {
  double x = 0.0, y = 0.0, u = 0.0, v = 0.0;
};

TransportResult density_transport_check(const TransportLaws& laws, const MapParams& p,
                                        std::span<const SpdPair> pairs, const KernelOffsets& offsets = {});
TransportResult density_transport_check(double lambda, const SpdMatrix& a, const SpdMatrix& b, const MapParams& p,
                                        std::span<const SpdPair> pairs);

/// The four GIG laws of the reciprocal-form independence property:
///   X ~ GIG(-lambda, alpha g1, g2),  Y ~ GIG(lambda, g1, beta g2),
///   U ~ GIG(-lambda, alpha g2, g1),  V ~ GIG(lambda, g2, beta g1).
/// Coefficients may be zero (Gamma and inverse-Gamma edges).
struct EffLaws {
  struct Law {
    double lambda, alpha, beta;
  };
  Law x, y, u, v;
};

EffLaws eff_laws(double lambda, double alpha, double beta, double gamma1, double gamma2);

struct GridPoint {
  double sigma;
  double tau;
};

/// log d_U(u) + log d_V(v) + 2 log((tau + b sigma) / (tau sigma (tau + a sigma)))
///   - log d_X(sigma) - log d_Y(tau)
/// with (u, v) = gig1_map(sigma, tau), over the grid; returns max deviation
/// from the grid mean.
double univariate_eff_check(const EffLaws& laws, const MapParams& p, std::span<const GridPoint> grid);
double univariate_eff_check(double lambda, double alpha, double beta, double gamma1, double gamma2,
                            std::span<const GridPoint> grid);

/// n log-spaced points on [lo, hi].
std::vector<double> log_spaced(double lo, double hi, std::size_t n);
/// Cartesian product of log_spaced(lo, hi, n) with itself.
std::vector<GridPoint> log_grid(double lo, double hi, std::size_t n);

}  // namespace mgig
