#include "mgig/yang_baxter.hpp"

#include "mgig/distributions.hpp"
#include "mgig/errors.hpp"
#include "mgig/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mgig {

namespace {

constexpr std::uint64_t kRoleYbTriples = 0x5942;
constexpr std::uint64_t kRoleAppendixTriples = 0x4150;

using Eigen::MatrixXd;

MatrixXd eye(int r) { return MatrixXd::Identity(r, r); }

MatrixXd inv(const MatrixXd& m) { return m.partialPivLu().inverse(); }

SpdPair apply_pair(const MapParams& p, const SpdMatrix& a, const SpdMatrix& b) {
  return phi(p, SpdPair(a, b));
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

nlohmann::json grid_json(const std::vector<YbParams>& grid) {
  auto out = nlohmann::json::array();
  for (const auto& g : grid) out.push_back({g.alpha, g.beta, g.gamma});
  return out;
}

bool all_equal(const YbParams& p) { return p.alpha == p.beta && p.beta == p.gamma; }

}  // namespace

SpdTriple::SpdTriple(SpdMatrix x_, SpdMatrix y_, SpdMatrix z_)
    : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {
  require_same_dim(x.dim(), y.dim(), "SpdTriple");
  require_same_dim(x.dim(), z.dim(), "SpdTriple");
}

YbParams::YbParams(double alpha_, double beta_, double gamma_) : alpha(alpha_), beta(beta_), gamma(gamma_) {
  for (double v : {alpha, beta, gamma}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("Yang-Baxter parameters must be finite and non-negative");
  }
}

SpdTriple apply_f12(const MapParams& p, const SpdTriple& t) {
  SpdPair uv = apply_pair(p, t.x, t.y);
  return {std::move(uv.first), std::move(uv.second), t.z};
}

SpdTriple apply_f13(const MapParams& p, const SpdTriple& t) {
  SpdPair uv = apply_pair(p, t.x, t.z);
  return {std::move(uv.first), t.y, std::move(uv.second)};
}

SpdTriple apply_f23(const MapParams& p, const SpdTriple& t) {
  SpdPair uv = apply_pair(p, t.y, t.z);
  return {t.x, std::move(uv.first), std::move(uv.second)};
}

double triple_relative_difference(const SpdTriple& a, const SpdTriple& b) {
  return std::max({relative_difference(a.x.dense(), b.x.dense()), relative_difference(a.y.dense(), b.y.dense()),
                   relative_difference(a.z.dense(), b.z.dense())});
}

double yb_residual(const YbParams& p, const SpdTriple& t, const ConditionGuard& guard) {
  check_condition(t.x, guard);
  check_condition(t.y, guard);
  check_condition(t.z, guard);
  const MapParams ab(p.alpha, p.beta), ac(p.alpha, p.gamma), bc(p.beta, p.gamma);
  const SpdTriple lhs = apply_f12(ab, apply_f13(ac, apply_f23(bc, t)));
  const SpdTriple rhs = apply_f23(bc, apply_f13(ac, apply_f12(ab, t)));
  return triple_relative_difference(lhs, rhs);
}

double yb_residual_mutated(const YbParams& p, const SpdTriple& t) {
  const MapParams ab(p.alpha, p.beta), ba(p.beta, p.alpha), ac(p.alpha, p.gamma), bc(p.beta, p.gamma);
  const SpdTriple lhs = apply_f12(ba, apply_f13(ac, apply_f23(bc, t)));
  const SpdTriple rhs = apply_f23(bc, apply_f13(ac, apply_f12(ab, t)));
  return triple_relative_difference(lhs, rhs);
}

double AppendixTrace::max_chain_residual() const { return std::max({x3_residual, y3_residual, z3_residual}); }

double AppendixTrace::max_auxiliary_residual() const {
  return std::max({x3_closed_form, eleq_product, eleq_inverse, eq3, eq5_first, eq5_second, commutation_v,
                   commutation_u});
}

AppendixTrace appendix_trace(const YbParams& p, const SpdTriple& t, const ConditionGuard& guard) {
  check_condition(t.x, guard);
  check_condition(t.y, guard);
  check_condition(t.z, guard);
  const MapParams ab(p.alpha, p.beta), ac(p.alpha, p.gamma), bc(p.beta, p.gamma);
  const double a = p.alpha, b = p.beta, c = p.gamma;

  AppendixTrace out;
  out.lhs_chain.push_back(apply_f23(bc, t));
  out.lhs_chain.push_back(apply_f13(ac, out.lhs_chain[0]));
  out.lhs_chain.push_back(apply_f12(ab, out.lhs_chain[1]));
  out.rhs_chain.push_back(apply_f12(ab, t));
  out.rhs_chain.push_back(apply_f13(ac, out.rhs_chain[0]));
  out.rhs_chain.push_back(apply_f23(bc, out.rhs_chain[1]));

  const SpdTriple& l3 = out.lhs_chain[2];
  const SpdTriple& r3 = out.rhs_chain[2];
  out.x3_residual = relative_difference(l3.x.dense(), r3.x.dense());
  out.y3_residual = relative_difference(l3.y.dense(), r3.y.dense());
  out.z3_residual = relative_difference(l3.z.dense(), r3.z.dense());

  const int r = t.dim();
  const MatrixXd I = eye(r);
  const MatrixXd x = t.x.dense(), y = t.y.dense(), z = t.z.dense();
  const MatrixXd yx = y * x, yz = y * z, zy = z * y;

  // A* = (I + a zy)^T = I + a yz, likewise for B and C.
  const MatrixXd As = I + a * yz, Bs = I + b * yz, Cs = I + c * yz;
  const MatrixXd x3 = z * (As + a * yx * Bs).partialPivLu().solve(Cs + yx * (a * I + b * c * yz));
  out.x3_closed_form = relative_difference(x3, l3.x.dense());

  const MatrixXd st = x * y, ts = y * x;
  out.eleq_product = relative_difference(x * (I + ts), (I + st) * x);
  out.eleq_inverse = relative_difference(x * inv(I + ts), inv(I + st) * x);

  const MatrixXd& u = yx;
  const MatrixXd& v = yz;
  const MatrixXd uv = u * v, vu = v * u;
  const MatrixXd s = u + v + b * uv;
  const MatrixXd s_adj = u + v + b * vu;
  {
    const MatrixXd lhs = inv(I + a * u + c * v + b * c * uv) * (I + c * s) * (I + a * s) *
                         inv(I + a * u + c * v + a * b * uv);
    const MatrixXd rhs = inv(I + a * u + c * v + a * b * vu) * (I + a * s_adj) * (I + c * s_adj) *
                         inv(I + a * u + c * v + b * c * vu);
    out.eq3 = relative_difference(lhs, rhs);
  }

  const MatrixXd sa = inv(I + a * s), sc = inv(I + c * s);
  const MatrixXd sa_adj = inv(I + a * s_adj), sc_adj = inv(I + c * s_adj);
  out.eq5_first = relative_difference(v * sa - sa * u, sa_adj * v - u * sa_adj);
  out.eq5_second = relative_difference((I + b * v) * sa * sc, sc_adj * sa_adj * (I + b * v));
  out.commutation_v = relative_difference((I + b * v) * s, s_adj * (I + b * v));
  out.commutation_u = relative_difference(s * (I + b * u), (I + b * u) * s_adj);
  return out;
}

SpdMatrix random_spd(int dim, RngStream& rng, double max_condition) {
  const WishartParams law(static_cast<double>(dim), SpdMatrix::identity(dim));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    WishartDraw draw = wishart_sample(law, rng);
    auto m = SpdMatrix::try_from(draw.value);
    if (m && m->condition_number() <= max_condition) return std::move(*m);
  }
  throw IllConditioned("random_spd: no draw within the condition bound");
}

SpdTriple random_triple(int dim, RngStream& rng, double max_condition) {
  SpdMatrix x = random_spd(dim, rng, max_condition);
  SpdMatrix y = random_spd(dim, rng, max_condition);
  SpdMatrix z = random_spd(dim, rng, max_condition);
  return {std::move(x), std::move(y), std::move(z)};
}

std::vector<YbParams> default_yb_grid() {
  return {{2.0, 1.0, 0.5}, {1.0, 0.0, 2.0}, {1.0, 1.0, 1.0}, {0.3, 0.3, 5.0}, {1.0, 0.0, 0.0}};
}

YbCampaignResult yb_campaign(const YbCampaignConfig& config) {
  if (config.trials < 1) throw ConfigError("yb_campaign: trials must be at least 1");
  if (config.grid.empty() || config.dims.empty()) throw ConfigError("yb_campaign: empty grid or dims");

  YbCampaignResult result;
  result.config = config;
  const std::size_t n_cells = config.grid.size();
  double total = 0.0;
  std::size_t count = 0;

  for (int dim : config.dims) {
    if (dim < 1) throw ConfigError("yb_campaign: dims must be positive");
    // residual[trial * n_cells + cell]
    std::vector<double> residual(config.trials * n_cells);
    std::vector<double> mutated(config.trials * n_cells, std::numeric_limits<double>::quiet_NaN());
    parallel_for(config.trials, config.threads, [&](std::size_t trial) {
      RngStream rng(config.seed, stream_for(kRoleYbTriples, (static_cast<std::uint64_t>(dim) << 32) | trial));
      const SpdTriple t = random_triple(dim, rng, config.max_condition);
      for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const YbParams& p = config.grid[cell];
        residual[trial * n_cells + cell] = yb_residual(p, t);
        if (config.mutation_control && p.alpha != p.beta) {
          mutated[trial * n_cells + cell] = yb_residual_mutated(p, t);
        }
      }
    });

    for (std::size_t cell = 0; cell < n_cells; ++cell) {
      const double tol = all_equal(config.grid[cell]) ? config.all_equal_tolerance : config.tolerance;
      YbCellSummary summary{dim, cell, 0.0, 0.0, tol, std::numeric_limits<double>::quiet_NaN()};
      std::vector<double> controls;
      for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const double res = residual[trial * n_cells + cell];
        summary.max_residual = std::max(summary.max_residual, std::isnan(res) ? INFINITY : res);
        summary.mean_residual += res;
        if (!(res <= tol)) result.failures.push_back({dim, cell, trial, res});
        const double m = mutated[trial * n_cells + cell];
        if (!std::isnan(m)) controls.push_back(m);
      }
      total += summary.mean_residual;
      count += config.trials;
      summary.mean_residual /= static_cast<double>(config.trials);
      summary.mutated_median_residual = median(controls);
      result.max_residual = std::max(result.max_residual, summary.max_residual);
      result.cells.push_back(summary);
    }
  }
  result.mean_residual = total / static_cast<double>(count);
  return result;
}

VerificationReport YbCampaignResult::to_report() const {
  VerificationReport rep;
  rep.command = "verify-yb";
  rep.seed = config.seed;
  rep.config = {{"dims", config.dims},
                {"trials", config.trials},
                {"params_grid", grid_json(config.grid)},
                {"tolerance", config.tolerance},
                {"all_equal_tolerance", config.all_equal_tolerance},
                {"max_condition", config.max_condition},
                {"mutation_control", config.mutation_control},
                {"mutation_threshold", config.mutation_threshold}};

  double general_max = 0.0, equal_max = 0.0;
  bool has_general = false, has_equal = false;
  double control_min = INFINITY;
  auto cells = nlohmann::json::array();
  for (const auto& c : this->cells) {
    const YbParams& p = config.grid[c.cell];
    if (all_equal(p)) {
      equal_max = std::max(equal_max, c.max_residual);
      has_equal = true;
    } else {
      general_max = std::max(general_max, c.max_residual);
      has_general = true;
    }
    if (!std::isnan(c.mutated_median_residual)) control_min = std::min(control_min, c.mutated_median_residual);
    cells.push_back({{"dim", c.dim},
                     {"params", {p.alpha, p.beta, p.gamma}},
                     {"max_residual", c.max_residual},
                     {"mean_residual", c.mean_residual},
                     {"tolerance", c.tolerance},
                     {"mutated_median_residual",
                      std::isnan(c.mutated_median_residual) ? nlohmann::json(nullptr)
                                                         : nlohmann::json(c.mutated_median_residual)}});
  }
  if (has_general) rep.add(at_most("yb_max_residual", general_max, config.tolerance));
  if (has_equal) rep.add(at_most("yb_all_equal_max_residual", equal_max, config.all_equal_tolerance));
  if (config.mutation_control && std::isfinite(control_min)) {
    rep.add(greater_than("mutation_control_min_median_residual", control_min, config.mutation_threshold));
  }

  auto failures_json = nlohmann::json::array();
  for (const auto& f : failures) {
    const YbParams& p = config.grid[f.cell];
    failures_json.push_back(
        {{"dim", f.dim}, {"params", {p.alpha, p.beta, p.gamma}}, {"trial", f.trial}, {"residual", f.residual}});
  }
  rep.extra = {{"params_grid", grid_json(config.grid)},
               {"dims", config.dims},
               {"trials", config.trials},
               {"max_residual", max_residual},
               {"mean_residual", mean_residual},
               {"failures", failures_json},
               {"cells", cells}};
  return rep;
}

VerificationReport appendix_campaign(const AppendixCampaignConfig& config) {
  if (config.trials < 1) throw ConfigError("appendix_campaign: trials must be at least 1");
  VerificationReport rep;
  rep.command = "verify-appendix";
  rep.seed = config.seed;
  rep.config = {{"dims", config.dims},
                {"trials", config.trials},
                {"params_grid", grid_json(config.grid)},
                {"tolerance", config.tolerance},
                {"max_condition", config.max_condition}};

  struct Maxima {
    double x3 = 0, y3 = 0, z3 = 0, x3_closed = 0, eleq_product = 0, eleq_inverse = 0;
    double eq3 = 0, eq5_first = 0, eq5_second = 0, comm_v = 0, comm_u = 0;
  };
  auto worst = [](double acc, double v) { return std::isnan(v) ? INFINITY : std::max(acc, v); };
  Maxima total;
  for (int dim : config.dims) {
    std::vector<Maxima> per_trial(config.trials);
    parallel_for(config.trials, config.threads, [&](std::size_t trial) {
      RngStream rng(config.seed, stream_for(kRoleAppendixTriples, (static_cast<std::uint64_t>(dim) << 32) | trial));
      const SpdTriple t = random_triple(dim, rng, config.max_condition);
      Maxima& m = per_trial[trial];
      for (const auto& p : config.grid) {
        const AppendixTrace tr = appendix_trace(p, t);
        m.x3 = worst(m.x3, tr.x3_residual);
        m.y3 = worst(m.y3, tr.y3_residual);
        m.z3 = worst(m.z3, tr.z3_residual);
        m.x3_closed = worst(m.x3_closed, tr.x3_closed_form);
        m.eleq_product = worst(m.eleq_product, tr.eleq_product);
        m.eleq_inverse = worst(m.eleq_inverse, tr.eleq_inverse);
        m.eq3 = worst(m.eq3, tr.eq3);
        m.eq5_first = worst(m.eq5_first, tr.eq5_first);
        m.eq5_second = worst(m.eq5_second, tr.eq5_second);
        m.comm_v = worst(m.comm_v, tr.commutation_v);
        m.comm_u = worst(m.comm_u, tr.commutation_u);
      }
    });
    for (const auto& m : per_trial) {
      total.x3 = worst(total.x3, m.x3);
      total.y3 = worst(total.y3, m.y3);
      total.z3 = worst(total.z3, m.z3);
      total.x3_closed = worst(total.x3_closed, m.x3_closed);
      total.eleq_product = worst(total.eleq_product, m.eleq_product);
      total.eleq_inverse = worst(total.eleq_inverse, m.eleq_inverse);
      total.eq3 = worst(total.eq3, m.eq3);
      total.eq5_first = worst(total.eq5_first, m.eq5_first);
      total.eq5_second = worst(total.eq5_second, m.eq5_second);
      total.comm_v = worst(total.comm_v, m.comm_v);
      total.comm_u = worst(total.comm_u, m.comm_u);
    }
  }
  const double tol = config.tolerance;
  rep.add(at_most("x3_residual", total.x3, tol));
  rep.add(at_most("y3_residual", total.y3, tol));
  rep.add(at_most("z3_residual", total.z3, tol));
  rep.add(at_most("x3_closed_form", total.x3_closed, tol));
  rep.add(at_most("eleq_product", total.eleq_product, tol));
  rep.add(at_most("eleq_inverse", total.eleq_inverse, tol));
  rep.add(at_most("eq3", total.eq3, tol));
  rep.add(at_most("eq5_first", total.eq5_first, tol));
  rep.add(at_most("eq5_second", total.eq5_second, tol));
  rep.add(at_most("commutation_v", total.comm_v, tol));
  rep.add(at_most("commutation_u", total.comm_u, tol));
  return rep;
}

}  // namespace mgig
