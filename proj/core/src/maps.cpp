#include "mgig/maps.hpp"

#include "mgig/errors.hpp"

#include <cmath>
#include <string>

namespace mgig {

namespace {

void require_positive_scalar(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string(what) + ": inputs must be positive");
}

Eigen::MatrixXd eye(int r) { return Eigen::MatrixXd::Identity(r, r); }

}  // namespace

MapParams::MapParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("map parameters must be finite and non-negative");
  }
}

SpdPair::SpdPair(SpdMatrix first_, SpdMatrix second_) : first(std::move(first_)), second(std::move(second_)) {
  require_same_dim(first.dim(), second.dim(), "SpdPair");
}

ScalarPair h3b(const MapParams& p, double x, double y) {
  require_positive_scalar(x, "h3b");
  require_positive_scalar(y, "h3b");
  const double xy = x * y;
  const double num = 1.0 + p.beta * xy;
  const double den = 1.0 + p.alpha * xy;
  return {y * num / den, x * den / num};
}

ScalarPair gig1_map(const MapParams& p, double x, double y) {
  require_positive_scalar(x, "gig1_map");
  require_positive_scalar(y, "gig1_map");
  const double num = p.beta * x + y;
  const double den = p.alpha * x + y;
  return {num / (y * den), num / (x * den)};
}

ScalarPair gig1_map_affine(const MapParams& p, double x, double y) {
  if (!(p.alpha > 0.0)) throw DomainError("gig1_map_affine requires alpha > 0");
  require_positive_scalar(x, "gig1_map_affine");
  require_positive_scalar(y, "gig1_map_affine");
  const double ratio = p.beta / p.alpha;
  const double s = 1.0 / (p.alpha * x + y);
  return {ratio / y + (1.0 - ratio) * s, 1.0 / x + (p.beta - p.alpha) * s};
}

DensePair phi_raw(const MapParams& p, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const int r = static_cast<int>(x.rows());
  const Eigen::MatrixXd xy = x * y;
  const Eigen::MatrixXd yx = y * x;
  const Eigen::MatrixXd left = (eye(r) + p.alpha * xy).partialPivLu().solve(eye(r) + p.beta * xy);
  const Eigen::MatrixXd right = (eye(r) + p.beta * yx).partialPivLu().solve(eye(r) + p.alpha * yx);
  return {y * left, x * right};
}

SpdMatrix certify_output(const Eigen::MatrixXd& m, const char* what) {
  const double skew = asymmetry(m);
  if (!(skew <= kSymmetryTolerance)) {
    throw SymmetryLoss(std::string(what) + ": relative asymmetry " + std::to_string(skew));
  }
  auto out = SpdMatrix::try_from(SymMatrix::from_dense(m));
  if (!out) throw DomainError(std::string(what) + ": output is not positive definite");
  return std::move(*out);
}

SpdPair phi(const MapParams& p, const SpdPair& xy) {
  const DensePair raw = phi_raw(p, xy.first.dense(), xy.second.dense());
  return {certify_output(raw.first, "phi first"), certify_output(raw.second, "phi second")};
}

DensePair phi_inverse_outputs(const MapParams& p, const SpdPair& xy, const ConditionGuard& guard) {
  const int r = xy.dim();
  const Eigen::MatrixXd x = xy.first.dense(), y = xy.second.dense();
  const Eigen::MatrixXd x_inv = spd_inverse(xy.first, guard).dense();
  const Eigen::MatrixXd y_inv = spd_inverse(xy.second, guard).dense();
  const Eigen::MatrixXd xy_prod = x * y, yx_prod = y * x;
  return {(eye(r) + p.beta * xy_prod).partialPivLu().solve((eye(r) + p.alpha * xy_prod) * y_inv),
          (eye(r) + p.alpha * yx_prod).partialPivLu().solve((eye(r) + p.beta * yx_prod) * x_inv)};
}

DensePair psi_raw(const MapParams& p, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (p.alpha == 0.0 && p.beta == 0.0) throw DomainError("psi requires alpha and beta not both zero");
  const Eigen::MatrixXd common = (p.alpha * x + y).llt().solve(p.beta * x + y);
  // common * y^{-1} = (y^{-1} common^T)^T since y is symmetric.
  const Eigen::MatrixXd u = y.llt().solve(common.transpose()).transpose();
  const Eigen::MatrixXd v = x.llt().solve(common.transpose()).transpose();
  return {u, v};
}

SpdPair psi(const MapParams& p, const SpdPair& xy) {
  const DensePair raw = psi_raw(p, xy.first.dense(), xy.second.dense());
  return {certify_output(raw.first, "psi first"), certify_output(raw.second, "psi second")};
}

SpdPair psi_affine(const MapParams& p, const SpdPair& xy) {
  if (!(p.alpha > 0.0)) throw DomainError("psi_affine requires alpha > 0");
  const int r = xy.dim();
  const Eigen::MatrixXd x = xy.first.dense();
  const Eigen::MatrixXd y = xy.second.dense();
  const Eigen::MatrixXd s = (p.alpha * x + y).llt().solve(eye(r));
  const Eigen::MatrixXd yinv = y.llt().solve(eye(r));
  const Eigen::MatrixXd xinv = x.llt().solve(eye(r));
  const double ratio = p.beta / p.alpha;
  return {certify_output(ratio * yinv + (1.0 - ratio) * s, "psi_affine first"),
          certify_output(xinv + (p.beta - p.alpha) * s, "psi_affine second")};
}

namespace {

// P{s} P{(I + c2 m)^{1/2}} (I + c1 m)^{-1} with m = P{s} w and s = base^{1/2}.
SpdMatrix cone_component(const SpdMatrix& base, const SpdMatrix& w, double c1, double c2,
                         const ConditionGuard& guard) {
  const int r = base.dim();
  const SpdMatrix root = spd_sqrt(base, guard);
  const SymMatrix m = quad_rep(root, w).sym();
  const SymMatrix id = SymMatrix::identity(r);
  const SpdMatrix outer = spd_sqrt(SpdMatrix(id + c2 * m), guard);
  const SpdMatrix inner = spd_inverse(SpdMatrix(id + c1 * m), guard);
  return quad_rep(root, quad_rep(outer, inner));
}

}  // namespace

SpdPair cone_candidate(const MapParams& p, const SpdPair& xy, const ConditionGuard& guard) {
  return {cone_component(xy.second, xy.first, p.alpha, p.beta, guard),
          cone_component(xy.first, xy.second, p.beta, p.alpha, guard)};
}

double pair_relative_difference(const SpdPair& a, const SpdPair& b) {
  const double na = std::hypot(a.first.sym().frobenius_norm(), a.second.sym().frobenius_norm());
  const double nb = std::hypot(b.first.sym().frobenius_norm(), b.second.sym().frobenius_norm());
  const double diff = std::hypot((a.first.sym() - b.first.sym()).frobenius_norm(),
                                 (a.second.sym() - b.second.sym()).frobenius_norm());
  const double scale = std::max(na, nb);
  return scale == 0.0 ? 0.0 : diff / scale;
}

}  // namespace mgig
