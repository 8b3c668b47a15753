#pragma once

// Deterministic maps: the scalar H_III,B map and its reciprocal form, the
// matrix map phi^(alpha,beta) on pairs of SPD matrices, its conjugate psi,
// the quadratic-representation candidate, and numerical checkers for their
// Jacobians and differential identities.

#include "mgig/spd.hpp"

#include <string>
#include <vector>

namespace mgig {

/// Relative asymmetry above which a map output is rejected.
inline constexpr double kSymmetryTolerance = 1e-8;

struct MapParams {
  MapParams(double alpha, double beta);

  /// phi^(alpha,alpha) is the swap; only alpha != beta carries information.
  bool characterizing() const { return alpha != beta; }

  double alpha;
  double beta;
};

struct SpdPair {
  SpdPair(SpdMatrix first, SpdMatrix second);

  int dim() const { return first.dim(); }

  SpdMatrix first;
  SpdMatrix second;
};

struct ScalarPair {
  double first;
  double second;
};

/// Unsymmetrized map output, as produced by the matrix products.
struct DensePair {
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;
};

/// (u, v) = (y (1 + b xy) / (1 + a xy), x (1 + a xy) / (1 + b xy)).
ScalarPair h3b(const MapParams& p, double x, double y);
/// (u, v) = ((b x + y) / (y (a x + y)), (b x + y) / (x (a x + y))).
ScalarPair gig1_map(const MapParams& p, double x, double y);
/// Affine-in-inverses form of gig1_map; requires alpha > 0.
ScalarPair gig1_map_affine(const MapParams& p, double x, double y);

DensePair phi_raw(const MapParams& p, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
/// phi(x, y) = (y (I + a xy)^{-1} (I + b xy), x (I + b yx)^{-1} (I + a yx)).
SpdPair phi(const MapParams& p, const SpdPair& xy);

/// (u^{-1}, v^{-1}) for (u, v) = phi(x, y), evaluated as
/// ((I + b xy)^{-1}(I + a xy) y^{-1}, (I + a yx)^{-1}(I + b yx) x^{-1}) from the
/// input inverses; avoids inverting outputs whose condition number can be
/// far above that of the inputs.
DensePair phi_inverse_outputs(const MapParams& p, const SpdPair& xy, const ConditionGuard& guard = {});

DensePair psi_raw(const MapParams& p, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
/// psi(x, y) = ((a x + y)^{-1} (b x + y) y^{-1}, (a x + y)^{-1} (b x + y) x^{-1}).
SpdPair psi(const MapParams& p, const SpdPair& xy);
/// psi in the form (b/a y^{-1} + (1 - b/a)(a x + y)^{-1}, x^{-1} + (b - a)(a x + y)^{-1});
/// requires alpha > 0.
SpdPair psi_affine(const MapParams& p, const SpdPair& xy);

/// phi written with quadratic representations and square roots only.
SpdPair cone_candidate(const MapParams& p, const SpdPair& xy, const ConditionGuard& guard = {});

/// Symmetrizes a raw product, raising SymmetryLoss above kSymmetryTolerance,
/// and certifies the result positive definite.
SpdMatrix certify_output(const Eigen::MatrixXd& m, const char* what);

/// |a - b| / max(|a|, |b|) with the pair norm sqrt(|first|^2 + |second|^2).
double pair_relative_difference(const SpdPair& a, const SpdPair& b);

// ---------------------------------------------------------------------------
// Jacobians and differential identities

/// |det D phi(x, y)| by central differences in vectorize coordinates.
/// h_step <= 0 selects 1e-5 times the smallest eigenvalue of the inputs.
double phi_jacobian_fd(const MapParams& p, const SpdPair& xy, double h_step = 0.0,
                       const ConditionGuard& guard = {});

struct JacobianCheck {
  double fd_value;
  double closed_form;

  double relative_difference() const;
};

/// FD |det D psi(x, y)| against (det v / det y)^(r+1).
JacobianCheck psi_jacobian_check(const MapParams& p, const SpdPair& xy, double h_step = 0.0,
                                 const ConditionGuard& guard = {});

/// |det| of the FD Jacobian of an arbitrary map on pairs (test hook).
template <class Map>
double pair_map_jacobian_fd(Map&& map, const SpdPair& xy, double h_step);

struct IdentityResidual {
  std::string name;
  double residual;
  double tolerance;
  bool finite_difference;

  bool pass() const { return residual <= tolerance; }
};

struct DerivativeReport {
  std::vector<IdentityResidual> entries;

  double max_residual() const;
  bool pass() const;
  const IdentityResidual* find(const std::string& name) const;
};

enum class BetaDividing {
  kAuto,     ///< include identities that divide by beta only when beta > 0
  kRequire,  ///< include them; DomainError when beta == 0
  kSkip,
};

inline constexpr double kFdIdentityTolerance = 1e-5;
inline constexpr double kAlgebraicIdentityTolerance = 1e-11;

/// Checks the closed-form differentials of u^{-1}, v^{-1}, zy and yz (with
/// (u, v) = psi(x, y) and z = (b x + y)^{-1}) against central differences in
/// direction h, plus the algebraic forms of u^{-1}, v^{-1} and
/// b v^{-1} + u^{-1} = a x + y.
DerivativeReport derivative_identities_check(const MapParams& p, const SpdPair& xy, const SymMatrix& h,
                                             BetaDividing beta_dividing = BetaDividing::kAuto,
                                             double h_step = 0.0);

}  // namespace mgig

#include "mgig/detail/pair_jacobian.hpp"
