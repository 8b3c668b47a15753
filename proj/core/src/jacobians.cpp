#include "mgig/errors.hpp"
#include "mgig/maps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace mgig {

namespace {

constexpr double kRelativeStep = 1e-5;

// The maps bend on the scale of the smallest input eigenvalue, so that sets
// the step rather than the input norm.
double default_step(const SpdPair& xy, double h_step) {
  if (h_step > 0.0) return h_step;
  return kRelativeStep * std::min(min_eigenvalue(xy.first), min_eigenvalue(xy.second));
}

void guard_inputs(const SpdPair& xy, const ConditionGuard& guard) {
  check_condition(xy.first, guard);
  check_condition(xy.second, guard);
}

Eigen::MatrixXd eye(int r) { return Eigen::MatrixXd::Identity(r, r); }

Eigen::MatrixXd inverse_of(const Eigen::MatrixXd& m) { return m.llt().solve(eye(static_cast<int>(m.rows()))); }

using DenseField = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y)>;

// Central difference of f along (dx, dy) with scalar step t.
Eigen::MatrixXd directional_fd(const DenseField& f, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                               const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy, double t) {
  return (f(x + t * dx, y + t * dy) - f(x - t * dx, y - t * dy)) / (2.0 * t);
}

}  // namespace

double phi_jacobian_fd(const MapParams& p, const SpdPair& xy, double h_step, const ConditionGuard& guard) {
  guard_inputs(xy, guard);
  return pair_map_jacobian_fd(
      [&](const SpdPair& in) { return phi_raw(p, in.first.dense(), in.second.dense()); }, xy,
      default_step(xy, h_step));
}

double JacobianCheck::relative_difference() const {
  const double scale = std::max(std::abs(fd_value), std::abs(closed_form));
  return scale == 0.0 ? 0.0 : std::abs(fd_value - closed_form) / scale;
}

JacobianCheck psi_jacobian_check(const MapParams& p, const SpdPair& xy, double h_step, const ConditionGuard& guard) {
  guard_inputs(xy, guard);
  const double fd = pair_map_jacobian_fd(
      [&](const SpdPair& in) { return psi_raw(p, in.first.dense(), in.second.dense()); }, xy,
      default_step(xy, h_step));
  const SpdPair uv = psi(p, xy);
  const int r = xy.dim();
  const double closed = std::exp((r + 1) * (uv.second.logdet() - xy.second.logdet()));
  return {fd, closed};
}

double DerivativeReport::max_residual() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.residual);
  return m;
}

bool DerivativeReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const IdentityResidual& e) { return e.pass(); });
}

const IdentityResidual* DerivativeReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

DerivativeReport derivative_identities_check(const MapParams& p, const SpdPair& xy, const SymMatrix& h,
                                             BetaDividing beta_dividing, double h_step) {
  require_same_dim(xy.dim(), h.dim(), "derivative_identities_check");
  const double alpha = p.alpha;
  const double beta = p.beta;
  bool with_beta_division = false;
  switch (beta_dividing) {
    case BetaDividing::kAuto:
      with_beta_division = beta > 0.0;
      break;
    case BetaDividing::kRequire:
      if (!(beta > 0.0)) throw DomainError("identities dividing by beta requested with beta = 0");
      with_beta_division = true;
      break;
    case BetaDividing::kSkip:
      break;
  }

  const Eigen::MatrixXd x = xy.first.dense();
  const Eigen::MatrixXd y = xy.second.dense();
  const Eigen::MatrixXd hd = h.dense();
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  const Eigen::MatrixXd z = inverse_of(beta * x + y);

  const double hnorm = h.frobenius_norm();
  const double t = hnorm == 0.0 ? 1.0 : default_step(xy, h_step) / hnorm;

  // Algebraic identities are checked on inverted psi outputs. The fields
  // differentiated numerically use the factored inverses
  // u^{-1} = y (b x + y)^{-1} (a x + y), v^{-1} = x (b x + y)^{-1} (a x + y),
  // which stay accurate when u or v is badly conditioned.
  auto psi_inverse = [&](bool first) {
    const DensePair raw = psi_raw(p, x, y);
    return inverse_of(SymMatrix::from_dense(first ? raw.first : raw.second).dense());
  };
  const DenseField u_inv = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return Eigen::MatrixXd(b * (beta * a + b).partialPivLu().solve(alpha * a + b));
  };
  const DenseField v_inv = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return Eigen::MatrixXd(a * (beta * a + b).partialPivLu().solve(alpha * a + b));
  };
  const DenseField zy = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return Eigen::MatrixXd(inverse_of(beta * a + b) * b);
  };
  const DenseField yz = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return Eigen::MatrixXd(b * inverse_of(beta * a + b));
  };

  DerivativeReport report;
  // FD residuals are relative to the larger of the two derivatives, floored at
  // the first-order scale |f| |h| / |(x, y)| so that vanishing derivatives
  // (alpha == beta, beta == 0) compare against rounding noise, not zero.
  const double input_norm = std::max(x.norm(), y.norm());
  auto fd_entry = [&](std::string name, const Eigen::MatrixXd& closed, const Eigen::MatrixXd& numeric,
                      double value_norm) {
    const double floor = value_norm * hnorm / input_norm;
    const double scale = std::max({closed.norm(), numeric.norm(), floor});
    const double residual = scale == 0.0 ? 0.0 : (closed - numeric).norm() / scale;
    report.entries.push_back({std::move(name), residual, kFdIdentityTolerance, true});
  };
  auto algebraic_entry = [&](std::string name, const Eigen::MatrixXd& closed, const Eigen::MatrixXd& direct) {
    report.entries.push_back(
        {std::move(name), relative_difference(closed, direct), kAlgebraicIdentityTolerance, false});
  };

  const Eigen::MatrixXd uinv_direct = psi_inverse(true);
  const Eigen::MatrixXd vinv_direct = psi_inverse(false);
  const Eigen::MatrixXd zy_direct = zy(x, y);

  // v^{-1} = x + (a - b) x z x
  algebraic_entry("r2", x + (alpha - beta) * x * z * x, vinv_direct);
  // b v^{-1} + u^{-1} = a x + y
  algebraic_entry("linear", beta * vinv_direct + uinv_direct, alpha * x + y);
  if (with_beta_division) {
    // u^{-1} = (a/b) y - ((a - b)/b) y z y
    algebraic_entry("r1", (alpha / beta) * y - ((alpha - beta) / beta) * y * z * y, uinv_direct);
  }

  fd_entry("dux", (alpha - beta) * y * z * hd * z * y, directional_fd(u_inv, x, y, hd, zero, t), uinv_direct.norm());
  fd_entry("dvy", -(alpha - beta) * x * z * hd * z * x, directional_fd(v_inv, x, y, zero, hd, t), vinv_direct.norm());
  fd_entry("duy", hd + beta * (alpha - beta) * x * z * hd * z * x, directional_fd(u_inv, x, y, zero, hd, t), uinv_direct.norm());
  if (with_beta_division) {
    fd_entry("dvx", (alpha / beta) * hd - ((alpha - beta) / beta) * y * z * hd * z * y,
             directional_fd(v_inv, x, y, hd, zero, t), vinv_direct.norm());
  }
  fd_entry("Dy_zy", beta * z * hd * z * x, directional_fd(zy, x, y, zero, hd, t), zy_direct.norm());
  fd_entry("Dy_yz", beta * x * z * hd * z, directional_fd(yz, x, y, zero, hd, t), zy_direct.norm());
  return report;
}

}  // namespace mgig
