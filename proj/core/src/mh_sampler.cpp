#include "mgig/mh_sampler.hpp"

#include "mgig/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>

namespace mgig {

namespace {

// Lower factor from log-Cholesky coordinates.
Eigen::MatrixXd factor_of(const Eigen::Ref<const Eigen::VectorXd>& theta, int r) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(r, r);
  Eigen::Index k = 0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j <= i; ++j, ++k) l(i, j) = (i == j) ? std::exp(theta(k)) : theta(k);
  }
  return l;
}

// Log target in theta coordinates: MGIG exponent evaluated through the factor
// plus the chart volume term.
struct ChartTarget {
  double power;
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  int r;

  double operator()(const Eigen::VectorXd& theta) const {
    const Eigen::MatrixXd l = factor_of(theta, r);
    double logdet = 0.0;
    for (int i = 0; i < r; ++i) logdet += 2.0 * std::log(l(i, i));
    // tr(a L L^T) and tr(b (L L^T)^{-1}) = |L^{-1} b^{1/2}|^2 via triangular solves.
    const double tr_ax = (l.transpose() * a * l).trace();
    const Eigen::MatrixXd linv = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(r, r));
    const double tr_bxinv = (linv * b * linv.transpose()).trace();
    if (!std::isfinite(logdet) || !std::isfinite(tr_bxinv)) return -std::numeric_limits<double>::infinity();
    return power * logdet - tr_ax - tr_bxinv + log_cholesky_log_volume(theta, r);
  }
};

}  // namespace

void ChainConfig::validate() const {
  if (thin < 1) throw ConfigError("ChainConfig: thin must be >= 1");
  if (!(step_scale > 0.0)) throw ConfigError("ChainConfig: step_scale must be > 0");
  if (!(target_accept > 0.0 && target_accept < 1.0)) throw ConfigError("ChainConfig: target_accept must be in (0,1)");
}

bool metropolis_accept(double log_ratio, RngStream& rng) {
  if (log_ratio >= 0.0) return true;
  return std::log(rng.uniform()) < log_ratio;
}

Eigen::VectorXd log_cholesky_coords(const SpdMatrix& x) {
  const int r = x.dim();
  const Eigen::MatrixXd& l = x.cholesky();
  Eigen::VectorXd theta(static_cast<Eigen::Index>(SymMatrix::packed_size(r)));
  Eigen::Index k = 0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j <= i; ++j) theta(k++) = (i == j) ? std::log(l(i, j)) : l(i, j);
  }
  return theta;
}

SpdMatrix from_log_cholesky(const Eigen::Ref<const Eigen::VectorXd>& theta, int dim) {
  if (static_cast<std::size_t>(theta.size()) != SymMatrix::packed_size(dim)) {
    throw DimMismatch("from_log_cholesky: coordinate length does not match dimension");
  }
  Eigen::MatrixXd l = factor_of(theta, dim);
  SymMatrix x = SymMatrix::from_dense(l * l.transpose());
  return SpdMatrix::from_factor(std::move(x), std::move(l));
}

double log_cholesky_log_volume(const Eigen::Ref<const Eigen::VectorXd>& theta, int dim) {
  double v = 0.0;
  for (int i = 0; i < dim; ++i) {
    const Eigen::Index k = static_cast<Eigen::Index>(i) * (i + 1) / 2 + i;
    v += (dim - i + 1) * theta(k);
  }
  return v;
}

double effective_sample_size(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 4) return static_cast<double>(n);
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (series[t] - mean) * (series[t + lag] - mean);
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (c0 <= 0.0) return static_cast<double>(n);
  // Sum of consecutive-pair autocorrelations, truncated at the first
  // non-positive pair and forced monotone.
  double sum = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double pair = (autocov(2 * m) + autocov(2 * m + 1)) / c0;
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    sum += pair;
  }
  const double tau = std::max(2.0 * sum - 1.0, 1.0 / static_cast<double>(n));
  return std::min(static_cast<double>(n) / tau, static_cast<double>(n));
}

ChainResult mgig_mh_sample(const MgigParams& p, const ChainConfig& cfg, std::size_t n, RngStream& rng) {
  cfg.validate();
  if (n < 1) throw ConfigError("mgig_mh_sample: n must be >= 1");
  const int r = p.dim();
  if (cfg.start) require_same_dim(cfg.start->dim(), r, "mgig_mh_sample start");

  const ChartTarget target{p.lambda - 0.5 * (r + 1), p.a.dense(), p.b.dense(), r};
  Eigen::VectorXd theta = log_cholesky_coords(cfg.start ? *cfg.start : SpdMatrix::identity(r));
  double current = target(theta);
  const Eigen::Index d = theta.size();

  double log_step = std::log(cfg.step_scale);
  Eigen::VectorXd proposal(d);

  auto step = [&](double scale) {
    for (Eigen::Index k = 0; k < d; ++k) proposal(k) = theta(k) + scale * rng.normal();
    const double candidate = target(proposal);
    if (metropolis_accept(candidate - current, rng)) {
      theta = proposal;
      current = candidate;
      return true;
    }
    return false;
  };

  for (std::size_t t = 0; t < cfg.burn_in; ++t) {
    const bool accepted = step(std::exp(log_step));
    if (cfg.adapt) {
      log_step += ((accepted ? 1.0 : 0.0) - cfg.target_accept) / std::pow(static_cast<double>(t) + 1.0, 0.6);
    }
  }

  ChainResult out;
  out.step_scale = std::exp(log_step);
  out.draws.reserve(n);
  std::vector<double> trace;
  trace.reserve(n);
  std::size_t accepted = 0;
  std::size_t total = 0;
  while (out.draws.size() < n) {
    for (std::size_t k = 0; k < cfg.thin; ++k) {
      accepted += step(out.step_scale) ? 1 : 0;
      ++total;
    }
    out.draws.push_back(from_log_cholesky(theta, r));
    trace.push_back(out.draws.back().logdet());
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total);
  out.ess_per_draw = effective_sample_size(trace) / static_cast<double>(n);
  out.non_convergence = out.acceptance_rate < 0.05 || out.acceptance_rate > 0.9 || out.ess_per_draw < 0.01;
  return out;
}

}  // namespace mgig
