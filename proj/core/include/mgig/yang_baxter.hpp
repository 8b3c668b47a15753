#pragma once

// Lifts of phi to triples and numerical verification of the parametric
// Yang-Baxter equation F12(a,b) F13(a,c) F23(b,c) = F23(b,c) F13(a,c) F12(a,b).

#include "mgig/maps.hpp"
#include "mgig/report.hpp"
#include "mgig/rng.hpp"
#include "mgig/spd.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace mgig {

struct SpdTriple {
  SpdTriple(SpdMatrix x, SpdMatrix y, SpdMatrix z);

  int dim() const { return x.dim(); }

  SpdMatrix x;
  SpdMatrix y;
  SpdMatrix z;
};

struct YbParams {
  YbParams(double alpha, double beta, double gamma);

  double alpha;
  double beta;
  double gamma;
};

/// phi applied to slots (1,2), (1,3) or (2,3); the remaining slot is copied.
SpdTriple apply_f12(const MapParams& p, const SpdTriple& t);
SpdTriple apply_f13(const MapParams& p, const SpdTriple& t);
SpdTriple apply_f23(const MapParams& p, const SpdTriple& t);

/// Max over slots of |lhs - rhs|_F / max(|lhs|_F, |rhs|_F).
double triple_relative_difference(const SpdTriple& a, const SpdTriple& b);

/// Residual of the Yang-Baxter equation at t. Throws IllConditioned when an
/// input exceeds the guard.
double yb_residual(const YbParams& p, const SpdTriple& t, const ConditionGuard& guard = {});

/// Same with the F12 factor of the left side evaluated at (beta, alpha);
/// a negative control that must produce a large residual.
double yb_residual_mutated(const YbParams& p, const SpdTriple& t);

/// Both composition chains, step by step, plus the auxiliary identities used
/// to prove that they agree.
struct AppendixTrace {
  /// (x1,y1,z1) = F23(x,y,z), (x2,y2,z2) = F13(.), (x3,y3,z3) = F12(.)
  std::vector<SpdTriple> lhs_chain;
  /// (X1,Y1,Z1) = F12(x,y,z), (X2,Y2,Z2) = F13(.), (X3,Y3,Z3) = F23(.)
  std::vector<SpdTriple> rhs_chain;

  double x3_residual = 0.0;
  double y3_residual = 0.0;
  double z3_residual = 0.0;

  /// x3 against z [A* + a yx B*]^{-1} [C* + yx (a + b c yz)], with
  /// A = I + a zy, B = I + b zy, C = I + c zy and * the transpose.
  double x3_closed_form = 0.0;
  /// s(I + ts) = (I + st)s and s(I + ts)^{-1} = (I + st)^{-1} s at (s,t) = (x,y).
  double eleq_product = 0.0;
  double eleq_inverse = 0.0;
  /// The reduced y3 = Y3 equation in u = yx, v = yz.
  double eq3 = 0.0;
  /// v s_a - s_a u = s_a* v - u s_a*  and  (I + b v) s_a s_c = s_c* s_a* (I + b v),
  /// with s = u + v + b uv, s_k = (I + k s)^{-1}, M* = y M^T y^{-1}.
  double eq5_first = 0.0;
  double eq5_second = 0.0;
  /// (I + b v) s = s* (I + b v)  and  s (I + b u) = (I + b u) s*.
  double commutation_v = 0.0;
  double commutation_u = 0.0;

  double max_chain_residual() const;
  double max_auxiliary_residual() const;
};

AppendixTrace appendix_trace(const YbParams& p, const SpdTriple& t, const ConditionGuard& guard = {});

/// Random SPD matrix from Wishart(lambda = r, c = I), redrawn until its
/// condition number is at most max_condition.
SpdMatrix random_spd(int dim, RngStream& rng, double max_condition = 1e4);
SpdTriple random_triple(int dim, RngStream& rng, double max_condition = 1e4);

/// {(2,1,0.5), (1,0,2), (1,1,1), (0.3,0.3,5), (1,0,0)}.
std::vector<YbParams> default_yb_grid();

struct YbCampaignConfig {
  std::vector<int> dims{1, 2, 3, 5};
  std::size_t trials = 500;
  std::vector<YbParams> grid = default_yb_grid();
  std::uint64_t seed = 20240917;
  unsigned threads = 1;
  double tolerance = 1e-9;
  /// Tolerance for cells with alpha = beta = gamma.
  double all_equal_tolerance = 1e-12;
  double max_condition = 1e4;
  /// Also run the mutated map on every cell with alpha != beta and require
  /// a residual above mutation_threshold.
  bool mutation_control = true;
  double mutation_threshold = 1e-2;
};

struct YbFailure {
  int dim;
  std::size_t cell;
  std::size_t trial;
  double residual;
};

struct YbCellSummary {
  int dim;
  std::size_t cell;
  double max_residual;
  double mean_residual;
  double tolerance;
  double mutated_median_residual;  ///< NaN when the cell has no control
};

struct YbCampaignResult {
  YbCampaignConfig config;
  std::vector<YbCellSummary> cells;
  std::vector<YbFailure> failures;
  double max_residual = 0.0;
  double mean_residual = 0.0;

  VerificationReport to_report() const;
};

YbCampaignResult yb_campaign(const YbCampaignConfig& config);

/// Appendix traces over random triples; one report line per quantity.
struct AppendixCampaignConfig {
  std::vector<int> dims{1, 2, 3};
  std::size_t trials = 200;
  std::vector<YbParams> grid = default_yb_grid();
  std::uint64_t seed = 20240917;
  unsigned threads = 1;
  double tolerance = 1e-10;
  double max_condition = 1e4;
};

VerificationReport appendix_campaign(const AppendixCampaignConfig& config);

}  // namespace mgig
