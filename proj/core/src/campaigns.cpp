#include "mgig/campaigns.hpp"

#include "mgig/distributions.hpp"
#include "mgig/errors.hpp"
#include "mgig/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mgig {

namespace {

// Stream roles; stream ids are stream_for(role, index).
constexpr std::uint64_t kRoleMapPairs = 0x4d50;
constexpr std::uint64_t kRoleDirections = 0x4844;
constexpr std::uint64_t kRoleTransportPairs = 0x5450;
constexpr std::uint64_t kRoleCoefficients = 0x4342;
constexpr std::uint64_t kRoleInputX = 0x5831;
constexpr std::uint64_t kRoleInputY = 0x5931;
constexpr std::uint64_t kRoleReferenceU = 0x5552;
constexpr std::uint64_t kRoleReferenceV = 0x5652;
constexpr std::uint64_t kRoleControl = 0x4354;
constexpr std::uint64_t kRolePermutations = 0x5054;

std::uint64_t dim_index(int dim, std::size_t i) { return (static_cast<std::uint64_t>(dim) << 32) | i; }

double worst(double acc, double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : std::max(acc, v); }

SymMatrix random_direction(int dim, RngStream& rng) {
  SymMatrix h(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) h.set(i, j, rng.normal());
  return h;
}

nlohmann::json grid_json(const std::vector<MapParams>& grid) {
  auto out = nlohmann::json::array();
  for (const auto& p : grid) out.push_back({p.alpha, p.beta});
  return out;
}

nlohmann::json matrix_json(const std::optional<SpdMatrix>& m) {
  if (!m) return "identity";
  return m->sym().packed();
}

SpdMatrix or_identity(const std::optional<SpdMatrix>& m, int dim) {
  if (!m) return SpdMatrix::identity(dim);
  require_same_dim(m->dim(), dim, "campaign coefficient");
  return *m;
}

struct MapsPairResult {
  double involution_phi = 0, involution_psi = 0, symmetry = 0, determinant = 0, scaling = 0, cone = 0;
  double scalar = 0, jacobian_phi = 0, jacobian_psi = 0, fd = 0, algebraic = 0;
};

}  // namespace

std::vector<SpdPair> random_pairs(int dim, std::size_t count, std::uint64_t seed, std::uint64_t role,
                                  double max_condition) {
  std::vector<SpdPair> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng(seed, stream_for(role, dim_index(dim, i)));
    SpdMatrix x = random_spd(dim, rng, max_condition);
    SpdMatrix y = random_spd(dim, rng, max_condition);
    pairs.emplace_back(std::move(x), std::move(y));
  }
  return pairs;
}

// ---------------------------------------------------------------------------

VerificationReport maps_campaign(const MapsCampaignConfig& config) {
  if (config.pairs < 1 || config.dims.empty() || config.grid.empty()) {
    throw ConfigError("maps_campaign: need at least one pair, dim and parameter setting");
  }
  VerificationReport rep;
  rep.command = "verify-maps";
  rep.seed = config.seed;
  rep.config = {{"dims", config.dims},
                {"params_grid", grid_json(config.grid)},
                {"pairs", config.pairs},
                {"max_condition", config.max_condition},
                {"jacobian_pairs", config.jacobian_pairs},
                {"jacobian_max_dim", config.jacobian_max_dim},
                {"checks",
                 {{"involution", config.involution},
                  {"jacobians", config.jacobians},
                  {"derivatives", config.derivatives},
                  {"cone", config.cone}}}};

  MapsPairResult total;
  bool any_psi = false, any_scalar = false, any_jac = false;
  for (const auto& p : config.grid) any_psi = any_psi || p.alpha > 0.0 || p.beta > 0.0;

  for (int dim : config.dims) {
    if (dim < 1) throw ConfigError("maps_campaign: dims must be positive");
    any_scalar = any_scalar || dim == 1;
    const bool jac_dim = dim <= config.jacobian_max_dim;
    std::vector<MapsPairResult> per(config.pairs);
    parallel_for(config.pairs, config.threads, [&](std::size_t i) {
      RngStream rng(config.seed, stream_for(kRoleMapPairs, dim_index(dim, i)));
      SpdMatrix x0 = random_spd(dim, rng, config.max_condition);
      SpdMatrix y0 = random_spd(dim, rng, config.max_condition);
      const SpdPair xy(std::move(x0), std::move(y0));
      RngStream hrng(config.seed, stream_for(kRoleDirections, dim_index(dim, i)));
      const SymMatrix h = random_direction(dim, hrng);
      const Eigen::MatrixXd x = xy.first.dense(), y = xy.second.dense();
      MapsPairResult& m = per[i];

      for (const auto& p : config.grid) {
        const bool has_psi = p.alpha > 0.0 || p.beta > 0.0;
        const SpdPair uv = phi(p, xy);
        if (config.involution) {
          m.involution_phi = worst(m.involution_phi, pair_relative_difference(phi(p, uv), xy));
          const DensePair raw = phi_raw(p, x, y);
          m.symmetry = worst(m.symmetry, std::max(asymmetry(raw.first), asymmetry(raw.second)));
          m.determinant = worst(m.determinant, std::abs(uv.first.logdet() + uv.second.logdet() -
                                                        xy.first.logdet() - xy.second.logdet()));
          const double c = 1.7;
          const SpdPair scaled(SpdMatrix(c * xy.first.sym()), SpdMatrix(c * xy.second.sym()));
          const SpdPair lhs = phi(p, scaled);
          const SpdPair rhs_raw = phi(MapParams(c * c * p.alpha, c * c * p.beta), xy);
          const SpdPair rhs(SpdMatrix(c * rhs_raw.first.sym()), SpdMatrix(c * rhs_raw.second.sym()));
          m.scaling = worst(m.scaling, pair_relative_difference(lhs, rhs));
          if (has_psi) {
            const SpdPair st = psi(p, xy);
            m.involution_psi = worst(m.involution_psi, pair_relative_difference(psi(p, st), xy));
            const DensePair praw = psi_raw(p, x, y);
            m.symmetry = worst(m.symmetry, std::max(asymmetry(praw.first), asymmetry(praw.second)));
          }
        }
        if (config.cone) m.cone = worst(m.cone, pair_relative_difference(cone_candidate(p, xy), uv));
        if (dim == 1) {
          // Pair-relative: 1/x - 1/(x + y) cancels when y << x, so the
          // affine form has no componentwise relative accuracy there.
          auto pair_rel = [](double a1, double a2, double b1, double b2) {
            const double scale = std::max(std::hypot(a1, a2), std::hypot(b1, b2));
            return scale == 0.0 ? 0.0 : std::hypot(a1 - b1, a2 - b2) / scale;
          };
          const double xs = x(0, 0), ys = y(0, 0);
          const ScalarPair s = h3b(p, xs, ys);
          double r = pair_rel(uv.first.sym()(0, 0), uv.second.sym()(0, 0), s.first, s.second);
          if (has_psi) {
            const SpdPair st = psi(p, xy);
            const ScalarPair g = gig1_map(p, xs, ys);
            r = std::max(r, pair_rel(st.first.sym()(0, 0), st.second.sym()(0, 0), g.first, g.second));
            if (p.alpha > 0.0) {
              const ScalarPair ga = gig1_map_affine(p, xs, ys);
              r = std::max(r, pair_rel(ga.first, ga.second, g.first, g.second));
            }
          }
          m.scalar = worst(m.scalar, r);
        }
        if (jac_dim && i < config.jacobian_pairs) {
          if (config.jacobians) {
            m.jacobian_phi = worst(m.jacobian_phi, std::abs(phi_jacobian_fd(p, xy) - 1.0));
            if (has_psi) m.jacobian_psi = worst(m.jacobian_psi, psi_jacobian_check(p, xy).relative_difference());
          }
          if (config.derivatives && has_psi) {
            const DerivativeReport d = derivative_identities_check(p, xy, h);
            for (const auto& e : d.entries) {
              if (e.finite_difference) {
                m.fd = worst(m.fd, e.residual);
              } else {
                m.algebraic = worst(m.algebraic, e.residual);
              }
            }
          }
        }
      }
    });
    any_jac = any_jac || (jac_dim && config.jacobian_pairs > 0);
    for (const auto& m : per) {
      total.involution_phi = worst(total.involution_phi, m.involution_phi);
      total.involution_psi = worst(total.involution_psi, m.involution_psi);
      total.symmetry = worst(total.symmetry, m.symmetry);
      total.determinant = worst(total.determinant, m.determinant);
      total.scaling = worst(total.scaling, m.scaling);
      total.cone = worst(total.cone, m.cone);
      total.scalar = worst(total.scalar, m.scalar);
      total.jacobian_phi = worst(total.jacobian_phi, m.jacobian_phi);
      total.jacobian_psi = worst(total.jacobian_psi, m.jacobian_psi);
      total.fd = worst(total.fd, m.fd);
      total.algebraic = worst(total.algebraic, m.algebraic);
    }
  }

  if (config.involution) {
    rep.add(at_most("phi_involution", total.involution_phi, config.involution_tolerance));
    if (any_psi) rep.add(at_most("psi_involution", total.involution_psi, config.involution_tolerance));
    rep.add(at_most("raw_output_asymmetry", total.symmetry, config.symmetry_tolerance));
    rep.add(at_most("determinant_product", total.determinant, config.determinant_tolerance));
    rep.add(at_most("scaling_law", total.scaling, config.scaling_tolerance));
  }
  if (any_scalar) rep.add(at_most("scalar_reduction", total.scalar, config.scalar_tolerance));
  if (any_jac && config.jacobians) {
    rep.add(at_most("phi_jacobian", total.jacobian_phi, config.jacobian_tolerance));
    if (any_psi) rep.add(at_most("psi_jacobian", total.jacobian_psi, config.jacobian_tolerance));
  }
  if (any_jac && config.derivatives && any_psi) {
    rep.add(at_most("derivative_fd", total.fd, config.fd_tolerance));
    rep.add(at_most("derivative_algebraic", total.algebraic, config.algebraic_tolerance));
  }
  if (config.cone) rep.add(at_most("cone_candidate", total.cone, config.cone_tolerance));
  return rep;
}

// ---------------------------------------------------------------------------

VerificationReport transport_campaign(const TransportCampaignConfig& config) {
  if (config.pairs < 2) throw ConfigError("transport_campaign: need at least two pairs");
  VerificationReport rep;
  rep.command = "verify-transport";
  rep.seed = config.seed;
  auto settings_json = nlohmann::json::array();
  for (const auto& s : config.settings) settings_json.push_back({s.lambda, s.alpha, s.beta});
  auto eff_json = nlohmann::json::array();
  for (const auto& e : config.eff_settings) eff_json.push_back({e.lambda, e.alpha, e.beta, e.gamma1, e.gamma2});
  rep.config = {{"dims", config.dims},
                {"settings", settings_json},
                {"a", matrix_json(config.a)},
                {"b", matrix_json(config.b)},
                {"coefficients", config.a && config.b ? "given" : "random"},
                {"pairs", config.pairs},
                {"max_condition", config.max_condition},
                {"tolerance", config.tolerance},
                {"eff_settings", eff_json},
                {"eff_grid", {config.eff_grid_lo, config.eff_grid_hi, config.eff_grid_points}},
                {"eff_tolerance", config.eff_tolerance},
                {"mutation_threshold", config.mutation_threshold}};

  double residual = 0.0;
  double control = std::numeric_limits<double>::infinity();
  auto cells = nlohmann::json::array();
  for (int dim : config.dims) {
    RngStream crng(config.seed, stream_for(kRoleCoefficients, static_cast<std::uint64_t>(dim)));
    const SpdMatrix a = config.a ? or_identity(config.a, dim) : random_spd(dim, crng, 1e2);
    const SpdMatrix b = config.b ? or_identity(config.b, dim) : random_spd(dim, crng, 1e2);
    const std::vector<SpdPair> pairs =
        random_pairs(dim, config.pairs, config.seed, kRoleTransportPairs, config.max_condition);
    std::vector<double> res(config.settings.size()), ctl(config.settings.size());
    parallel_for(config.settings.size(), config.threads, [&](std::size_t k) {
      const auto& s = config.settings[k];
      const MapParams p(s.alpha, s.beta);
      TransportLaws laws = theorem_laws(s.lambda, a, b, p);
      res[k] = density_transport_check(laws, p, pairs).residual;
      laws.x.lambda += 0.5;
      ctl[k] = density_transport_check(laws, p, pairs).residual;
    });
    for (std::size_t k = 0; k < config.settings.size(); ++k) {
      residual = worst(residual, res[k]);
      control = std::min(control, ctl[k]);
      const auto& s = config.settings[k];
      cells.push_back({{"dim", dim}, {"setting", {s.lambda, s.alpha, s.beta}}, {"residual", res[k]},
                       {"control_residual", ctl[k]}});
    }
  }
  rep.add(at_most("transport_constancy", residual, config.tolerance));

  const auto grid = log_grid(config.eff_grid_lo, config.eff_grid_hi, config.eff_grid_points);
  double eff = 0.0;
  double eff_control = std::numeric_limits<double>::infinity();
  for (const auto& e : config.eff_settings) {
    const MapParams p(e.alpha, e.beta);
    EffLaws laws = eff_laws(e.lambda, e.alpha, e.beta, e.gamma1, e.gamma2);
    eff = worst(eff, univariate_eff_check(laws, p, grid));
    // gamma1 perturbed by 10% in the law of X only.
    laws.x.alpha = p.alpha * e.gamma1 * 1.1;
    laws.x.lambda = -e.lambda;
    if (p.alpha == 0.0) laws.x.beta = e.gamma2 * 1.1;
    eff_control = std::min(eff_control, univariate_eff_check(laws, p, grid));
  }
  rep.add(at_most("eff_constancy", eff, config.eff_tolerance));
  if (config.mutation_control) {
    rep.add(greater_than("transport_mutation_control", control, config.mutation_threshold));
    rep.add(greater_than("eff_mutation_control", eff_control, config.mutation_threshold));
  }
  rep.extra = {{"cells", cells}};
  return rep;
}

// ---------------------------------------------------------------------------

McCampaignConfig McCampaignConfig::matrix_defaults(int dim) {
  McCampaignConfig c;
  c.dim = dim;
  c.lambda = static_cast<double>(dim);
  c.n = 1000;
  c.permutations = 499;
  c.control_permutations = 1999;
  return c;
}

void McCampaignConfig::validate() const {
  if (dim < 1) throw ConfigError("campaign dim must be positive");
  if (n < kMinSamples) throw ConfigError("campaign sample size must be at least " + std::to_string(kMinSamples));
  if (permutations < kMinPermutations || (negative_control && control_permutations < kMinPermutations)) {
    throw ConfigError("permutation counts must be at least " + std::to_string(kMinPermutations));
  }
  if (!(level > 0.0 && level < 1.0) || !(control_level > 0.0 && control_level < 1.0)) {
    throw ConfigError("test levels must lie in (0, 1)");
  }
  if (a) require_same_dim(a->dim(), dim, "campaign a");
  if (b) require_same_dim(b->dim(), dim, "campaign b");
  chain.validate();
}

namespace {

nlohmann::json mc_config_json(const McCampaignConfig& c, bool with_map) {
  nlohmann::json j = {{"dim", c.dim},
                      {"lambda", c.lambda},
                      {"a", matrix_json(c.a)},
                      {"b", matrix_json(c.b)},
                      {"n", c.n},
                      {"permutations", c.permutations},
                      {"control_permutations", c.control_permutations},
                      {"level", c.level},
                      {"control_level", c.control_level},
                      {"negative_control", c.negative_control},
                      {"chain",
                       {{"burn_in", c.chain.burn_in},
                        {"thin", c.chain.thin},
                        {"step_scale", c.chain.step_scale},
                        {"target_accept", c.chain.target_accept},
                        {"adapt", c.chain.adapt}}}};
  if (with_map) {
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["transport_pairs"] = c.transport_pairs;
    j["transport_tolerance"] = c.transport_tolerance;
  }
  return j;
}

struct Sampled {
  std::vector<SpdMatrix> draws;
  nlohmann::json manifest;
  bool non_convergence = false;
};

/// Exact GIG draws at r = 1, MCMC above.
Sampled sample_mgig(const MgigParams& p, const McCampaignConfig& c, std::uint64_t role) {
  RngStream rng(c.seed, stream_for(role, 0));
  Sampled out;
  out.manifest = {{"params", {{"law", "mgig"}, {"lambda", p.lambda}, {"a", p.a.sym().packed()}, {"b", p.b.sym().packed()}}},
                  {"seed", c.seed},
                  {"stream", stream_for(role, 0)}};
  if (p.dim() == 1) {
    out.manifest["sampler"] = "gig-exact";
    const GigParams g(p.lambda, p.a.sym()(0, 0), p.b.sym()(0, 0));
    out.draws.reserve(c.n);
    for (std::size_t i = 0; i < c.n; ++i) out.draws.push_back(SpdMatrix(SymMatrix::scaled_identity(1, gig_sample(g, rng))));
    return out;
  }
  ChainResult chain = mgig_mh_sample(p, c.chain, c.n, rng);
  out.manifest["sampler"] = "mgig-mh-log-cholesky";
  out.manifest["acceptance_rate"] = chain.acceptance_rate;
  out.manifest["ess_per_draw"] = chain.ess_per_draw;
  out.manifest["step_scale"] = chain.step_scale;
  out.non_convergence = chain.non_convergence;
  out.draws = std::move(chain.draws);
  return out;
}

Sampled sample_wishart(double lambda, const SpdMatrix& c_mat, const McCampaignConfig& c, std::uint64_t role) {
  RngStream rng(c.seed, stream_for(role, 0));
  Sampled out;
  out.manifest = {{"params", {{"law", "wishart"}, {"lambda", lambda}, {"c", c_mat.sym().packed()}}},
                  {"seed", c.seed},
                  {"stream", stream_for(role, 0)},
                  {"sampler", c_mat.dim() == 1 ? "gamma-exact" : "wishart-bartlett"}};
  out.draws.reserve(c.n);
  if (c_mat.dim() == 1) {
    const GammaParams g(lambda, c_mat.sym()(0, 0));
    for (std::size_t i = 0; i < c.n; ++i) out.draws.push_back(SpdMatrix(SymMatrix::scaled_identity(1, gamma_sample(g, rng))));
    return out;
  }
  const WishartParams w(lambda, c_mat);
  for (std::size_t i = 0; i < c.n; ++i) out.draws.emplace_back(wishart_sample(w, rng).value);
  return out;
}

SampleBatch batch_of(const Sampled& s) { return SampleBatch::from_matrices(s.draws, s.manifest); }

SampleBatch batch_of(const std::vector<SpdMatrix>& draws, const char* what) {
  return SampleBatch::from_matrices(draws, {{"sampler", what}});
}

IndependenceReport run_dcor(const SampleBatch& u, const SampleBatch& v, std::size_t b, double level,
                            const McCampaignConfig& c, std::uint64_t index) {
  RngStream rng(c.seed, stream_for(kRolePermutations, index));
  return distance_correlation(u, v, b, rng, level, c.threads);
}

IndependenceReport run_energy(const SampleBatch& u, const SampleBatch& v, std::size_t b, double level,
                              const McCampaignConfig& c, std::uint64_t index) {
  RngStream rng(c.seed, stream_for(kRolePermutations, index));
  return energy_distance_test(u, v, b, rng, level, c.threads);
}

void add_chain_check(VerificationReport& rep, int flags) {
  rep.add(at_most("mcmc_nonconvergence_flags", static_cast<double>(flags), 0.0));
}

}  // namespace

VerificationReport direc_campaign(const McCampaignConfig& config) {
  config.validate();
  if (!(config.alpha > 0.0) || !(config.beta > 0.0)) {
    throw ConfigError("direc campaign needs alpha > 0 and beta > 0 (all four laws must have densities)");
  }
  const int r = config.dim;
  const SpdMatrix a = or_identity(config.a, r), b = or_identity(config.b, r);
  const MapParams p(config.alpha, config.beta);
  const double sub_level = config.level / 3.0;

  VerificationReport rep;
  rep.command = "test-direc";
  rep.seed = config.seed;
  rep.config = mc_config_json(config, true);

  const std::vector<SpdPair> pairs = random_pairs(r, config.transport_pairs, config.seed, kRoleTransportPairs);
  rep.add(at_most("transport_constancy", density_transport_check(config.lambda, a, b, p, pairs).residual,
                  config.transport_tolerance));

  const MgigParams law_x(config.lambda, SpdMatrix(p.alpha * a.sym()), b);
  const MgigParams law_y(config.lambda, SpdMatrix(p.beta * b.sym()), a);
  const MgigParams law_u(config.lambda, SpdMatrix(p.alpha * b.sym()), a);
  const MgigParams law_v(config.lambda, SpdMatrix(p.beta * a.sym()), b);

  const Sampled xs = sample_mgig(law_x, config, kRoleInputX);
  const Sampled ys = sample_mgig(law_y, config, kRoleInputY);
  std::vector<SpdMatrix> us, vs;
  us.reserve(config.n);
  vs.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    SpdPair uv = phi(p, SpdPair(xs.draws[i], ys.draws[i]));
    us.push_back(std::move(uv.first));
    vs.push_back(std::move(uv.second));
  }
  const Sampled ref_u = sample_mgig(law_u, config, kRoleReferenceU);
  const Sampled ref_v = sample_mgig(law_v, config, kRoleReferenceV);
  int flags = xs.non_convergence + ys.non_convergence + ref_u.non_convergence + ref_v.non_convergence;

  const SampleBatch bu = batch_of(us, "phi-pushforward"), bv = batch_of(vs, "phi-pushforward");
  const auto dcor = run_dcor(bu, bv, config.permutations, sub_level, config, 0);
  const auto eu = run_energy(bu, batch_of(ref_u), config.permutations, sub_level, config, 1);
  const auto ev = run_energy(bv, batch_of(ref_v), config.permutations, sub_level, config, 2);
  rep.add(greater_than("independence_dcor_p", dcor.p_value, sub_level));
  rep.add(greater_than("marginal_u_energy_p", eu.p_value, sub_level));
  rep.add(greater_than("marginal_v_energy_p", ev.p_value, sub_level));
  nlohmann::json tests = {{"dcor", dcor.to_json()}, {"energy_u", eu.to_json()}, {"energy_v", ev.to_json()}};
  nlohmann::json manifests = {{"x", xs.manifest}, {"y", ys.manifest}, {"reference_u", ref_u.manifest},
                              {"reference_v", ref_v.manifest}};

  if (config.negative_control) {
    // X drawn at 3 alpha while phi keeps alpha: U no longer has its claimed law.
    const MgigParams wrong_x(config.lambda, SpdMatrix(3.0 * p.alpha * a.sym()), b);
    const Sampled xw = sample_mgig(wrong_x, config, kRoleControl);
    flags += xw.non_convergence;
    std::vector<SpdMatrix> uw;
    uw.reserve(config.n);
    for (std::size_t i = 0; i < config.n; ++i) uw.push_back(phi(p, SpdPair(xw.draws[i], ys.draws[i])).first);
    const auto ctl = run_energy(batch_of(uw, "phi-pushforward-control"), batch_of(ref_u), config.control_permutations,
                                config.control_level, config, 3);
    rep.add(less_than("control_energy_u_p", ctl.p_value, config.control_level));
    tests["control_energy_u"] = ctl.to_json();
    manifests["control_x"] = xw.manifest;
  }
  if (r > 1) add_chain_check(rep, flags);
  rep.extra = {{"tests", tests}, {"manifests", manifests}};
  return rep;
}

VerificationReport my_property_campaign(const McCampaignConfig& config) {
  config.validate();
  const int r = config.dim;
  if (!(config.lambda > 0.5 * (r - 1))) {
    throw ConfigError("MY campaign needs lambda > (r-1)/2 (Wishart density regime)");
  }
  const SpdMatrix a = or_identity(config.a, r), b = or_identity(config.b, r);
  const MapParams my(1.0, 0.0);
  const double sub_level = config.level / 3.0;

  VerificationReport rep;
  rep.command = "test-my";
  rep.seed = config.seed;
  rep.config = mc_config_json(config, false);

  const Sampled xs = sample_mgig(MgigParams(-config.lambda, a, b), config, kRoleInputX);
  const Sampled ys = sample_wishart(config.lambda, a, config, kRoleInputY);
  auto transform = [&](const std::vector<SpdMatrix>& x, const std::vector<SpdMatrix>& y, std::vector<SpdMatrix>& u,
                       std::vector<SpdMatrix>& v) {
    u.reserve(config.n);
    v.reserve(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
      SpdPair uv = psi(my, SpdPair(x[i], y[i]));
      u.push_back(std::move(uv.first));
      v.push_back(std::move(uv.second));
    }
  };
  std::vector<SpdMatrix> us, vs;
  transform(xs.draws, ys.draws, us, vs);
  const Sampled ref_u = sample_mgig(MgigParams(-config.lambda, b, a), config, kRoleReferenceU);
  const Sampled ref_v = sample_wishart(config.lambda, b, config, kRoleReferenceV);
  int flags = xs.non_convergence + ref_u.non_convergence;

  const SampleBatch bu = batch_of(us, "my-map"), bv = batch_of(vs, "my-map");
  const auto dcor = run_dcor(bu, bv, config.permutations, sub_level, config, 0);
  const auto eu = run_energy(bu, batch_of(ref_u), config.permutations, sub_level, config, 1);
  const auto ev = run_energy(bv, batch_of(ref_v), config.permutations, sub_level, config, 2);
  rep.add(greater_than("independence_dcor_p", dcor.p_value, sub_level));
  rep.add(greater_than("marginal_u_energy_p", eu.p_value, sub_level));
  rep.add(greater_than("marginal_v_energy_p", ev.p_value, sub_level));
  nlohmann::json tests = {{"dcor", dcor.to_json()}, {"energy_u", eu.to_json()}, {"energy_v", ev.to_json()}};
  nlohmann::json manifests = {{"x", xs.manifest}, {"y", ys.manifest}, {"reference_u", ref_u.manifest},
                              {"reference_v", ref_v.manifest}};

  if (config.negative_control) {
    // Wrong pairing: X ~ MGIG(+lambda, a, b) with the same Wishart Y.
    const Sampled xw = sample_mgig(MgigParams(config.lambda, a, b), config, kRoleControl);
    flags += xw.non_convergence;
    std::vector<SpdMatrix> uw, vw;
    transform(xw.draws, ys.draws, uw, vw);
    const auto ctl = run_dcor(batch_of(uw, "my-map-control"), batch_of(vw, "my-map-control"),
                              config.control_permutations, config.control_level, config, 3);
    rep.add(less_than("control_dcor_p", ctl.p_value, config.control_level));
    tests["control_dcor"] = ctl.to_json();
    manifests["control_x"] = xw.manifest;
  }
  if (r > 1) add_chain_check(rep, flags);
  rep.extra = {{"tests", tests}, {"manifests", manifests}};
  return rep;
}

}  // namespace mgig
