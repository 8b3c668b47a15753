#include "mgig_cli/cli.hpp"

#include "mgig/batch_io.hpp"
#include "mgig/campaigns.hpp"
#include "mgig/distributions.hpp"
#include "mgig/errors.hpp"
#include "mgig/mh_sampler.hpp"
#include "mgig/yang_baxter.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>

namespace mgig::cli {

namespace {

constexpr std::uint64_t kRoleSample = 0x534d;

template <class T>
void set_if(const std::optional<T>& v, T& target) {
  if (v) target = *v;
}

int single_dim(const RunConfig& c, int fallback) {
  if (c.dims.empty()) return fallback;
  if (c.dims.size() != 1) throw ConfigError("this command takes a single --dim");
  return c.dims.front();
}

ChainConfig chain_of(const RunConfig& c) {
  ChainConfig chain;
  set_if(c.burn_in, chain.burn_in);
  set_if(c.thin, chain.thin);
  set_if(c.step_scale, chain.step_scale);
  chain.validate();
  return chain;
}

void require_all(std::initializer_list<std::pair<const char*, bool>> flags, const char* what) {
  bool any = false, all = true;
  for (const auto& [name, set] : flags) {
    any = any || set;
    all = all && set;
  }
  if (any && !all) {
    std::string names;
    for (const auto& [name, set] : flags) names += std::string(names.empty() ? "" : ", ") + name;
    throw ConfigError(std::string(what) + ": give all of " + names + " or none");
  }
}

template <class T>
T required(const std::optional<T>& v, const char* name) {
  if (!v) throw ConfigError(std::string("missing required option ") + name);
  return *v;
}

VerificationReport run_yb(const RunConfig& c) {
  YbCampaignConfig cfg;
  if (!c.dims.empty()) cfg.dims = c.dims;
  set_if(c.trials, cfg.trials);
  set_if(c.tolerance, cfg.tolerance);
  require_all({{"--alpha", c.alpha.has_value()}, {"--beta", c.beta.has_value()}, {"--gamma", c.gamma.has_value()}},
              "verify-yb");
  if (c.alpha) cfg.grid = {YbParams(*c.alpha, *c.beta, *c.gamma)};
  cfg.mutation_control = c.negative_control;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  return yb_campaign(cfg).to_report();
}

VerificationReport run_maps(const RunConfig& c) {
  MapsCampaignConfig cfg;
  if (!c.dims.empty()) cfg.dims = c.dims;
  set_if(c.trials, cfg.pairs);
  set_if(c.tolerance, cfg.involution_tolerance);
  require_all({{"--alpha", c.alpha.has_value()}, {"--beta", c.beta.has_value()}}, "verify-maps");
  if (c.alpha) cfg.grid = {MapParams(*c.alpha, *c.beta)};
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  return maps_campaign(cfg);
}

VerificationReport run_appendix(const RunConfig& c) {
  AppendixCampaignConfig cfg;
  if (!c.dims.empty()) cfg.dims = c.dims;
  set_if(c.trials, cfg.trials);
  set_if(c.tolerance, cfg.tolerance);
  require_all({{"--alpha", c.alpha.has_value()}, {"--beta", c.beta.has_value()}, {"--gamma", c.gamma.has_value()}},
              "verify-appendix");
  if (c.alpha) cfg.grid = {YbParams(*c.alpha, *c.beta, *c.gamma)};
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  return appendix_campaign(cfg);
}

VerificationReport run_transport(const RunConfig& c) {
  TransportCampaignConfig cfg;
  if (!c.dims.empty()) cfg.dims = c.dims;
  set_if(c.trials, cfg.pairs);
  set_if(c.tolerance, cfg.tolerance);
  require_all({{"--lambda", c.lambda.has_value()}, {"--alpha", c.alpha.has_value()}, {"--beta", c.beta.has_value()}},
              "verify-transport");
  if (c.lambda) cfg.settings = {{*c.lambda, *c.alpha, *c.beta}};
  if (c.a || c.b) {
    const int dim = single_dim(c, 1);
    cfg.dims = {dim};
    cfg.a = parse_matrix_spec(c.a.value_or("identity"), dim);
    cfg.b = parse_matrix_spec(c.b.value_or("identity"), dim);
  }
  cfg.mutation_control = c.negative_control;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  return transport_campaign(cfg);
}

McCampaignConfig mc_config(const RunConfig& c) {
  const int dim = single_dim(c, 1);
  McCampaignConfig cfg = dim == 1 ? McCampaignConfig{} : McCampaignConfig::matrix_defaults(dim);
  cfg.dim = dim;
  set_if(c.lambda, cfg.lambda);
  set_if(c.alpha, cfg.alpha);
  set_if(c.beta, cfg.beta);
  if (c.a) cfg.a = parse_matrix_spec(*c.a, dim);
  if (c.b) cfg.b = parse_matrix_spec(*c.b, dim);
  set_if(c.n, cfg.n);
  set_if(c.permutations, cfg.permutations);
  set_if(c.control_permutations, cfg.control_permutations);
  set_if(c.level, cfg.level);
  set_if(c.tolerance, cfg.transport_tolerance);
  cfg.negative_control = c.negative_control;
  cfg.chain = chain_of(c);
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  return cfg;
}

void emit_csv(const RunConfig& c, const SampleBatch& batch) {
  if (c.csv.empty()) {
    write_batch_csv(std::cout, batch);
  } else {
    write_batch_csv(c.csv, batch);
  }
}

VerificationReport run_sample(const RunConfig& c) {
  const std::size_t n = c.n.value_or(1000);
  if (n < 1) throw ConfigError("--n must be at least 1");
  RngStream rng(c.seed, stream_for(kRoleSample, 0));
  VerificationReport rep;
  rep.command = "sample";
  rep.seed = c.seed;
  nlohmann::json manifest = {{"seed", c.seed}, {"stream", stream_for(kRoleSample, 0)}, {"n", n}};

  switch (c.law) {
    case Law::kGig: {
      const GigParams p(required(c.lambda, "--lambda"), required(c.alpha, "--alpha"), required(c.beta, "--beta"));
      std::vector<double> draws(n);
      for (auto& d : draws) d = gig_sample(p, rng);
      manifest["sampler"] = "gig-exact";
      manifest["params"] = {{"law", "gig"}, {"lambda", p.lambda}, {"alpha", p.alpha}, {"beta", p.beta}};
      emit_csv(c, SampleBatch::from_scalars(draws, manifest));
      break;
    }
    case Law::kGamma: {
      const GammaParams p(required(c.shape, "--shape"), required(c.rate, "--rate"));
      std::vector<double> draws(n);
      for (auto& d : draws) d = gamma_sample(p, rng);
      manifest["sampler"] = "gamma-exact";
      manifest["params"] = {{"law", "gamma"}, {"shape", p.shape}, {"rate", p.rate}};
      emit_csv(c, SampleBatch::from_scalars(draws, manifest));
      break;
    }
    case Law::kWishart: {
      const int dim = single_dim(c, 1);
      const WishartParams p(required(c.lambda, "--lambda"), parse_matrix_spec(c.c.value_or("identity"), dim));
      std::vector<SymMatrix> draws;
      draws.reserve(n);
      std::size_t boundary = 0;
      for (std::size_t i = 0; i < n; ++i) {
        WishartDraw d = wishart_sample(p, rng);
        boundary += d.on_boundary;
        draws.push_back(std::move(d.value));
      }
      manifest["sampler"] = "wishart-bartlett";
      manifest["params"] = {{"law", "wishart"}, {"dim", dim}, {"lambda", p.lambda}, {"c", p.scale.sym().packed()}};
      manifest["on_boundary"] = boundary > 0;
      emit_csv(c, SampleBatch::from_sym(draws, manifest));
      break;
    }
    case Law::kMgig: {
      const int dim = single_dim(c, 1);
      const MgigParams p(required(c.lambda, "--lambda"), parse_matrix_spec(c.a.value_or("identity"), dim),
                         parse_matrix_spec(c.b.value_or("identity"), dim));
      const ChainConfig chain = chain_of(c);
      const ChainResult res = mgig_mh_sample(p, chain, n, rng);
      manifest["sampler"] = "mgig-mh-log-cholesky";
      manifest["params"] = {{"law", "mgig"},
                            {"dim", dim},
                            {"lambda", p.lambda},
                            {"a", p.a.sym().packed()},
                            {"b", p.b.sym().packed()}};
      manifest["chain"] = {{"burn_in", chain.burn_in},
                           {"thin", chain.thin},
                           {"step_scale", chain.step_scale},
                           {"target_accept", chain.target_accept},
                           {"adapt", chain.adapt}};
      manifest["acceptance_rate"] = res.acceptance_rate;
      manifest["ess_per_draw"] = res.ess_per_draw;
      manifest["adapted_step_scale"] = res.step_scale;
      manifest["non_convergence"] = res.non_convergence;
      rep.add(at_most("mcmc_nonconvergence_flags", res.non_convergence ? 1.0 : 0.0, 0.0));
      emit_csv(c, SampleBatch::from_matrices(res.draws, manifest));
      break;
    }
  }
  rep.add(greater_than("draw_count", static_cast<double>(n), 0.0));
  rep.config = {{"n", n}, {"csv", c.csv.empty() ? "stdout" : c.csv}};
  rep.extra = {{"manifest", manifest}};
  return rep;
}

VerificationReport dispatch(const RunConfig& c) {
  switch (c.command) {
    case Command::kVerifyYb: return run_yb(c);
    case Command::kVerifyMaps: return run_maps(c);
    case Command::kVerifyAppendix: return run_appendix(c);
    case Command::kVerifyTransport: return run_transport(c);
    case Command::kSample: return run_sample(c);
    case Command::kTestDirec: return direc_campaign(mc_config(c));
    case Command::kTestMy: return my_property_campaign(mc_config(c));
  }
  throw ConfigError("unknown command");
}

}  // namespace

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ConfigError(std::string(kSeedEnv) + " is not an unsigned integer: '" + env + "'");
  return static_cast<std::uint64_t>(v);
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv) {
  RunConfig c;
  c.seed = default_seed();

  CLI::App app{"Verification campaigns for matrix GIG laws and the Yang-Baxter map phi", "mgigyb"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", c.seed, "Random seed (default " + std::to_string(c.seed) + ", env " + kSeedEnv + ")");
  app.add_option("--threads", c.threads, "Worker threads, 0 for all cores")->capture_default_str();
  app.add_option("--out", c.out, "JSON report path (stdout when omitted)");

  auto opt = [](CLI::App* sub, const std::string& name, auto& field, const std::string& help) {
    using T = typename std::decay_t<decltype(field)>::value_type;
    return sub->add_option_function<T>(name, [&field](const T& v) { field = v; }, help);
  };

  std::map<std::string, Command> commands;
  auto add = [&](const std::string& name, Command cmd, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands[name] = cmd;
    return sub;
  };

  CLI::App* yb = add("verify-yb", Command::kVerifyYb, "Parametric Yang-Baxter equation on random triples");
  CLI::App* maps = add("verify-maps", Command::kVerifyMaps, "Involution, Jacobian, derivative and cone checks");
  CLI::App* appendix = add("verify-appendix", Command::kVerifyAppendix, "Step-by-step trace of both composition chains");
  CLI::App* transport = add("verify-transport", Command::kVerifyTransport, "Density-level transport constancy");
  CLI::App* sample = add("sample", Command::kSample, "Draw from a GIG, Gamma, Wishart or matrix GIG law");
  CLI::App* direc = add("test-direc", Command::kTestDirec, "Monte Carlo check of independence under phi");
  CLI::App* my = add("test-my", Command::kTestMy, "Monte Carlo check of the Matsumoto-Yor property");

  for (CLI::App* sub : {yb, maps, appendix, transport, sample, direc, my}) {
    sub->add_option("--dim", c.dims, "Matrix dimension(s)")->check(CLI::PositiveNumber);
  }
  for (CLI::App* sub : {yb, maps, appendix, transport, sample, direc}) {
    opt(sub, "--alpha", c.alpha, "Map parameter alpha (gig: coefficient of x)");
    opt(sub, "--beta", c.beta, "Map parameter beta (gig: coefficient of 1/x)");
  }
  for (CLI::App* sub : {yb, appendix}) opt(sub, "--gamma", c.gamma, "Third Yang-Baxter parameter");
  for (CLI::App* sub : {transport, sample, direc, my}) opt(sub, "--lambda", c.lambda, "Shape parameter lambda");
  for (CLI::App* sub : {transport, sample, direc, my}) {
    opt(sub, "--a", c.a, "Matrix a: identity, diag:v1,..., scaled:c or CSV path");
    opt(sub, "--b", c.b, "Matrix b: identity, diag:v1,..., scaled:c or CSV path");
  }
  for (CLI::App* sub : {yb, maps, appendix, transport}) {
    opt(sub, "--trials", c.trials, "Random inputs per dimension");
    opt(sub, "--tolerance", c.tolerance, "Override the main residual tolerance");
  }
  opt(transport, "--pairs", c.trials, "Alias of --trials");
  for (CLI::App* sub : {yb, transport, direc, my}) {
    sub->add_flag("!--no-control", c.negative_control, "Skip the negative control");
  }
  for (CLI::App* sub : {sample, direc, my}) {
    opt(sub, "--n", c.n, "Number of draws");
    opt(sub, "--burn-in", c.burn_in, "MCMC burn-in iterations");
    opt(sub, "--thin", c.thin, "MCMC thinning interval");
    opt(sub, "--step-scale", c.step_scale, "Initial MCMC step scale");
  }
  for (CLI::App* sub : {direc, my}) {
    opt(sub, "--permutations", c.permutations, "Permutations per test (B)");
    opt(sub, "--control-permutations", c.control_permutations, "Permutations for the negative control");
    opt(sub, "--level", c.level, "Family-wise test level");
    opt(sub, "--tolerance", c.tolerance, "Transport constancy tolerance");
  }

  std::string law = "mgig";
  sample->add_option("law", law, "mgig, gig, gamma or wishart")
      ->required()
      ->check(CLI::IsMember({"mgig", "gig", "gamma", "wishart"}));
  opt(sample, "--c", c.c, "Wishart scale matrix c");
  opt(sample, "--shape", c.shape, "Gamma shape");
  opt(sample, "--rate", c.rate, "Gamma rate");
  sample->add_option("--csv", c.csv, "CSV output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  for (const auto& [name, cmd] : commands) {
    if (app.got_subcommand(name)) c.command = cmd;
  }
  static const std::map<std::string, Law> laws = {
      {"mgig", Law::kMgig}, {"gig", Law::kGig}, {"gamma", Law::kGamma}, {"wishart", Law::kWishart}};
  c.law = laws.at(law);
  return c;
}

int run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report = dispatch(config);
  report.wallclock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const nlohmann::json j = report.to_json();
  if (config.out.empty()) {
    if (config.command == Command::kSample && config.csv.empty()) {
      // stdout carries the CSV
    } else {
      std::cout << j.dump(2) << '\n';
    }
  } else {
    write_json(config.out, j);
  }
  return report.pass() ? 0 : 1;
}

int main_entry(int argc, const char* const* argv) {
  try {
    const auto config = parse_args(argc, argv);
    if (!config) return 0;
    return run(*config);
  } catch (const ConfigError& e) {
    std::cerr << "mgigyb: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "mgigyb: I/O error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mgigyb: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace mgig::cli
