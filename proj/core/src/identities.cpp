#include "mgig/identities.hpp"

#include "mgig/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mgig {

namespace {

TransportResult summarize(std::vector<double> deltas) {
  if (deltas.empty()) throw ConfigError("constancy check needs at least one point");
  double mean = 0.0;
  for (double d : deltas) mean += d;
  mean /= static_cast<double>(deltas.size());
  double residual = 0.0;
  for (double d : deltas) residual = std::max(residual, std::isfinite(d) ? std::abs(d - mean) : INFINITY);
  return {std::move(deltas), mean, residual};
}

double log_kernel(const EffLaws::Law& law, double x) { return gig_log_kernel(law.lambda, law.alpha, law.beta, x); }

}  // namespace

TransportLaws theorem_laws(double lambda, const SpdMatrix& a, const SpdMatrix& b, const MapParams& p) {
  require_same_dim(a.dim(), b.dim(), "theorem_laws");
  return {{lambda, p.alpha * a.sym(), b.sym()},
          {lambda, p.beta * b.sym(), a.sym()},
          {lambda, p.alpha * b.sym(), a.sym()},
          {lambda, p.beta * a.sym(), b.sym()}};
}

TransportResult density_transport_check(const TransportLaws& laws, const MapParams& p,
                                        std::span<const SpdPair> pairs, const KernelOffsets& offsets) {
  std::vector<double> deltas;
  deltas.reserve(pairs.size());
  for (const auto& xy : pairs) {
    const SpdPair uv = phi(p, xy);
    const DensePair inv = phi_inverse_outputs(p, xy);
    const double in = laws.x(xy.first) + offsets.x + laws.y(xy.second) + offsets.y;
    const double out = laws.u.with_inverse(uv.first, SymMatrix::from_dense(inv.first)) + offsets.u +
                       laws.v.with_inverse(uv.second, SymMatrix::from_dense(inv.second)) + offsets.v;
    deltas.push_back(in - out);
  }
  return summarize(std::move(deltas));
}

TransportResult density_transport_check(double lambda, const SpdMatrix& a, const SpdMatrix& b, const MapParams& p,
                                        std::span<const SpdPair> pairs) {
  return density_transport_check(theorem_laws(lambda, a, b, p), p, pairs);
}

EffLaws eff_laws(double lambda, double alpha, double beta, double gamma1, double gamma2) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) throw DomainError("eff_laws: gamma1 and gamma2 must be positive");
  const MapParams p(alpha, beta);  // validates alpha, beta >= 0
  return {{-lambda, p.alpha * gamma1, gamma2},
          {lambda, gamma1, p.beta * gamma2},
          {-lambda, p.alpha * gamma2, gamma1},
          {lambda, gamma2, p.beta * gamma1}};
}

double univariate_eff_check(const EffLaws& laws, const MapParams& p, std::span<const GridPoint> grid) {
  std::vector<double> deltas;
  deltas.reserve(grid.size());
  for (const auto& g : grid) {
    if (!(g.sigma > 0.0) || !(g.tau > 0.0)) throw DomainError("univariate_eff_check: grid must be positive");
    const ScalarPair uv = gig1_map(p, g.sigma, g.tau);
    const double jac = 2.0 * std::log((g.tau + p.beta * g.sigma) / (g.tau * g.sigma * (g.tau + p.alpha * g.sigma)));
    const double lhs = log_kernel(laws.u, uv.first) + log_kernel(laws.v, uv.second) + jac;
    const double rhs = log_kernel(laws.x, g.sigma) + log_kernel(laws.y, g.tau);
    deltas.push_back(lhs - rhs);
  }
  return summarize(std::move(deltas)).residual;
}

double univariate_eff_check(double lambda, double alpha, double beta, double gamma1, double gamma2,
                            std::span<const GridPoint> grid) {
  return univariate_eff_check(eff_laws(lambda, alpha, beta, gamma1, gamma2), MapParams(alpha, beta), grid);
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) throw DomainError("log_spaced: need 0 < lo <= hi and n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.back() = hi;
  return out;
}

std::vector<GridPoint> log_grid(double lo, double hi, std::size_t n) {
  const auto axis = log_spaced(lo, hi, n);
  std::vector<GridPoint> grid;
  grid.reserve(n * n);
  for (double s : axis)
    for (double t : axis) grid.push_back({s, t});
  return grid;
}

}  // namespace mgig
