#include "mgig/distributions.hpp"
#include "mgig/errors.hpp"
#include "mgig/independence.hpp"
#include "mgig/mh_sampler.hpp"
#include "mgig/yang_baxter.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

using namespace mgig;

namespace {

std::vector<double> draw_gig(const GigParams& p, std::size_t n, std::uint64_t stream) {
  RngStream rng(2024, stream);
  std::vector<double> out(n);
  for (auto& x : out) x = gig_sample(p, rng);
  return out;
}

struct MeanSe {
  double mean, se;
};

MeanSe mean_se(const std::vector<double>& v, double ess_factor = 1.0) {
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1.0) / (n * ess_factor))};
}

}  // namespace

TEST(GigDensity, Examples) {
  EXPECT_DOUBLE_EQ(gig_logpdf_unnorm(GigParams(1, 1, 1), 1.0), -2.0);
  EXPECT_NEAR(gig_logpdf_unnorm(GigParams(2, 3, 0.5), 2.0), std::log(2.0) - 6.0 - 0.25, 1e-15);
  EXPECT_LT(gig_logpdf_unnorm(GigParams(0.5, 1, 1), 1e-300), -1e299);
  EXPECT_THROW(gig_logpdf_unnorm(GigParams(1, 1, 1), 0.0), DomainError);
  EXPECT_THROW(GigParams(1, 0, 1), DomainError);
  EXPECT_THROW(GigParams(1, 1, -1), DomainError);
}

struct GigCase {
  double lambda, alpha, beta;
};

class GigSampler : public ::testing::TestWithParam<GigCase> {};

TEST_P(GigSampler, KsAgainstQuadratureCdf) {
  const auto c = GetParam();
  const GigParams p(c.lambda, c.alpha, c.beta);
  const oracle::GigCdf cdf(c.lambda, c.alpha, c.beta);
  const auto draws = draw_gig(p, 50000, static_cast<std::uint64_t>(std::abs(c.lambda * 1000 + c.alpha * 10 + c.beta)));
  EXPECT_LT(oracle::ks_distance(draws, cdf), 0.015);
  const auto ms = mean_se(draws);
  EXPECT_NEAR(ms.mean, cdf.mean(), 4.0 * ms.se);
}

INSTANTIATE_TEST_SUITE_P(Settings, GigSampler,
                         ::testing::Values(GigCase{1, 1, 1}, GigCase{-0.5, 2, 2}, GigCase{-2.5, 0.5, 3},
                                           GigCase{0.3, 4, 0.01}, GigCase{5, 1, 0.5}, GigCase{-0.2, 0.05, 0.05},
                                           GigCase{1, 1, 1e-6}));

TEST(GigSampler, ReciprocalLaw) {
  // 1/X for X ~ GIG(-1/2, g, g') is GIG(1/2, g', g).
  const auto x = draw_gig(GigParams(-0.5, 1.5, 0.7), 20000, 1);
  auto y = draw_gig(GigParams(0.5, 0.7, 1.5), 20000, 2);
  std::vector<double> inv(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) inv[i] = 1.0 / x[i];
  EXPECT_GT(ks_two_sample(inv, y).p_value, 0.01);
}

TEST(GigSampler, ReproducibleStreams) {
  EXPECT_EQ(draw_gig(GigParams(0.7, 2, 0.5), 100, 5), draw_gig(GigParams(0.7, 2, 0.5), 100, 5));
  EXPECT_NE(draw_gig(GigParams(0.7, 2, 0.5), 100, 5), draw_gig(GigParams(0.7, 2, 0.5), 100, 6));
}

TEST(Gamma, DensityAndMean) {
  EXPECT_DOUBLE_EQ(gamma_logpdf_unnorm(GammaParams(1, 2), 1.0), -2.0);
  RngStream rng(7, 0);
  std::vector<double> v(100000);
  for (auto& x : v) x = gamma_sample(GammaParams(3, 2), rng);
  const auto ms = mean_se(v);
  EXPECT_NEAR(ms.mean, 1.5, 3.0 * ms.se);
}

TEST(MgigDensity, Examples) {
  const SpdMatrix a(SymMatrix::diagonal(std::vector<double>{1.0, 2.0}));
  const SpdMatrix b(SymMatrix::diagonal(std::vector<double>{0.5, 3.0}));
  EXPECT_NEAR(mgig_logpdf_unnorm(MgigParams(1.3, a, b), SpdMatrix::identity(2)), -3.0 - 3.5, 1e-15);

  const SpdMatrix x(SymMatrix::scaled_identity(2, 2.0));
  const MgigParams p(2, SpdMatrix::identity(2), SpdMatrix::identity(2));
  EXPECT_NEAR(mgig_logpdf_unnorm(p, x), 0.5 * std::log(4.0) - 4.0 - 1.0, 1e-14);
}

TEST(MgigDensity, ScalarCaseMatchesGig) {
  for (double x : {0.01, 0.3, 1.0, 7.5, 120.0}) {
    const MgigParams p(-0.7, SpdMatrix(SymMatrix::scaled_identity(1, 1.3)), SpdMatrix(SymMatrix::scaled_identity(1, 0.4)));
    const double m = mgig_logpdf_unnorm(p, SpdMatrix(SymMatrix::scaled_identity(1, x)));
    EXPECT_NEAR(m, gig_logpdf_unnorm(GigParams(-0.7, 1.3, 0.4), x), 1e-13 * std::max(1.0, std::abs(m)));
  }
}

TEST(InvertLaw, SwapsAndNegates) {
  const SpdMatrix a(SymMatrix::scaled_identity(2, 2.0));
  const MgigParams p(1.5, a, SpdMatrix::identity(2));
  const MgigParams q = invert_law(p);
  EXPECT_EQ(q.lambda, -1.5);
  EXPECT_EQ(q.a.sym(), p.b.sym());
  EXPECT_EQ(q.b.sym(), p.a.sym());
  EXPECT_TRUE(invert_law(q) == p);
}

TEST(InvertLaw, PointwiseChangeOfVariables) {
  // density of W^{-1} at y is f_W(y^{-1}) (det y)^{-(r+1)}
  for (int r : {1, 2, 3}) {
    RngStream rng(5, static_cast<std::uint64_t>(r));
    const MgigParams p(0.8, random_spd(r, rng, 1e2), random_spd(r, rng, 1e2));
    for (int i = 0; i < 20; ++i) {
      const SpdMatrix y = r == 1 ? SpdMatrix(SymMatrix::scaled_identity(1, 2.0)) : random_spd(r, rng, 1e3);
      const double lhs = mgig_logpdf_unnorm(invert_law(p), y);
      const double rhs = mgig_logpdf_unnorm(p, spd_inverse(y)) - (r + 1) * logdet(y);
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST(Wishart, LambdaSet) {
  EXPECT_TRUE(in_wishart_lambda_set(3, 0.0));
  EXPECT_TRUE(in_wishart_lambda_set(3, 0.5));
  EXPECT_TRUE(in_wishart_lambda_set(3, 1.0));
  EXPECT_FALSE(in_wishart_lambda_set(3, 0.7));
  EXPECT_TRUE(in_wishart_lambda_set(3, 1.01));
  EXPECT_THROW(WishartParams(0.7, SpdMatrix::identity(3)), InvalidLambda);
}

TEST(Wishart, ScalarCaseIsGamma) {
  RngStream rng(8, 0);
  const WishartParams p(2.5, SpdMatrix(SymMatrix::scaled_identity(1, 4.0)));
  std::vector<double> v(50000);
  for (auto& x : v) x = wishart_sample(p, rng).value(0, 0);
  const auto ms = mean_se(v);
  EXPECT_NEAR(ms.mean, 2.5 / 4.0, 3.0 * ms.se);
}

TEST(Wishart, MeanIsLambdaTimesInverseScale) {
  // E[X] = n Sigma with n = 2 lambda, Sigma = (2c)^{-1}.
  SymMatrix c(2);
  c.set(0, 0, 1.0);
  c.set(1, 0, 0.3);
  c.set(1, 1, 0.5);
  const WishartParams p(3.0, SpdMatrix(c));
  const Eigen::MatrixXd expected = 2.0 * 3.0 * (2.0 * c.dense()).inverse();
  RngStream rng(9, 0);
  const std::size_t n = 40000;
  std::array<std::vector<double>, 3> entries;
  for (std::size_t i = 0; i < n; ++i) {
    const SymMatrix x = wishart_sample(p, rng).value;
    entries[0].push_back(x(0, 0));
    entries[1].push_back(x(1, 0));
    entries[2].push_back(x(1, 1));
  }
  const std::array<double, 3> target{expected(0, 0), expected(1, 0), expected(1, 1)};
  for (int k = 0; k < 3; ++k) {
    const auto ms = mean_se(entries[k]);
    EXPECT_NEAR(ms.mean, target[k], 3.0 * ms.se) << "entry " << k;
  }
}

TEST(Wishart, SingularLawIsFlagged) {
  RngStream rng(10, 0);
  const WishartParams p(0.5, SpdMatrix::identity(2));
  EXPECT_FALSE(p.has_density());
  const WishartDraw d = wishart_sample(p, rng);
  EXPECT_TRUE(d.on_boundary);
  EXPECT_FALSE(is_spd(d.value));
  EXPECT_FALSE(wishart_sample(WishartParams(3.0, SpdMatrix::identity(2)), rng).on_boundary);
}

// --------------------------------------------------------------------------
// Metropolis-Hastings

TEST(Metropolis, ThreeStateChainHitsTarget) {
  // Symmetric proposal on a ring of three states; stationary law pi.
  const std::array<double, 3> pi{0.2, 0.3, 0.5};
  RngStream rng(12, 0);
  std::array<std::size_t, 3> counts{};
  int state = 0;
  const std::size_t steps = 1000000;
  for (std::size_t t = 0; t < steps; ++t) {
    const int proposal = (state + (rng.uniform() < 0.5 ? 1 : 2)) % 3;
    if (metropolis_accept(std::log(pi[proposal]) - std::log(pi[state]), rng)) state = proposal;
    ++counts[state];
  }
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(static_cast<double>(counts[k]) / steps, pi[k], 0.02 * pi[k]);
  }
}

TEST(Metropolis, AlwaysAcceptsUphill) {
  RngStream rng(1, 1);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(metropolis_accept(0.0, rng));
  EXPECT_FALSE(metropolis_accept(-std::numeric_limits<double>::infinity(), rng));
}

TEST(LogCholesky, RoundTrip) {
  RngStream rng(13, 0);
  const SpdMatrix x = random_spd(3, rng);
  const SpdMatrix back = from_log_cholesky(log_cholesky_coords(x), 3);
  EXPECT_LE((back.dense() - x.dense()).norm(), 1e-13 * x.sym().frobenius_norm());
  EXPECT_THROW(from_log_cholesky(Eigen::VectorXd::Zero(5), 3), DimMismatch);
}

TEST(LogCholesky, VolumeTermMatchesFiniteDifferences) {
  // log|det d vech(x) / d theta| differences between points must match the
  // closed-form volume term.
  const int r = 3;
  const std::size_t m = SymMatrix::packed_size(r);
  auto fd_logdet = [&](const Eigen::VectorXd& theta) {
    Eigen::MatrixXd jac(m, m);
    const double h = 1e-6;
    for (std::size_t k = 0; k < m; ++k) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp(k) += h;
      tm(k) -= h;
      const SpdMatrix mp = from_log_cholesky(tp, r);
      const SpdMatrix mm = from_log_cholesky(tm, r);
      const auto xp = mp.sym().packed();
      const auto xm = mm.sym().packed();
      for (std::size_t j = 0; j < m; ++j) jac(j, k) = (xp[j] - xm[j]) / (2.0 * h);
    }
    return std::log(std::abs(jac.determinant()));
  };
  RngStream rng(14, 0);
  Eigen::VectorXd t0(m);
  for (std::size_t k = 0; k < m; ++k) t0(k) = 0.5 * rng.normal();
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd t1(m);
    for (std::size_t k = 0; k < m; ++k) t1(k) = 0.5 * rng.normal();
    const double fd = fd_logdet(t1) - fd_logdet(t0);
    const double closed = log_cholesky_log_volume(t1, r) - log_cholesky_log_volume(t0, r);
    EXPECT_NEAR(fd, closed, 1e-7);
  }
}

TEST(MhSampler, ScalarChainMatchesExactGig) {
  const double lambda = -0.8, alpha = 2.0, beta = 0.5;
  const MgigParams p(lambda, SpdMatrix(SymMatrix::scaled_identity(1, alpha)),
                     SpdMatrix(SymMatrix::scaled_identity(1, beta)));
  RngStream rng(15, 0);
  const ChainResult res = mgig_mh_sample(p, ChainConfig{}, 20000, rng);
  ASSERT_EQ(res.draws.size(), 20000u);
  EXPECT_FALSE(res.non_convergence);
  std::vector<double> chain(res.draws.size());
  for (std::size_t i = 0; i < chain.size(); ++i) chain[i] = res.draws[i].sym()(0, 0);
  EXPECT_GT(ks_two_sample(chain, draw_gig(GigParams(lambda, alpha, beta), 20000, 99)).p_value, 0.01);
}

TEST(MhSampler, MatrixLogdetMatchesEigenvalueQuadrature) {
  const double lambda = 2.0;
  const MgigParams p(lambda, SpdMatrix::identity(2), SpdMatrix::identity(2));
  RngStream rng(16, 0);
  const ChainResult res = mgig_mh_sample(p, ChainConfig{}, 20000, rng);
  EXPECT_FALSE(res.non_convergence);
  std::vector<double> ld(res.draws.size());
  for (std::size_t i = 0; i < ld.size(); ++i) ld[i] = res.draws[i].logdet();
  const auto ms = mean_se(ld, effective_sample_size(ld) / static_cast<double>(ld.size()));
  EXPECT_NEAR(ms.mean, oracle::mgig2_identity_mean_logdet(lambda), 3.0 * ms.se);
}

TEST(MhSampler, TinyStepBarelyMoves) {
  const MgigParams p(2.0, SpdMatrix::identity(2), SpdMatrix::identity(2));
  ChainConfig cfg;
  cfg.step_scale = 1e-9;
  cfg.adapt = false;
  cfg.burn_in = 100;
  cfg.thin = 1;
  RngStream rng(17, 0);
  const ChainResult res = mgig_mh_sample(p, cfg, 500, rng);
  EXPECT_GT(res.acceptance_rate, 0.99);
  EXPECT_LT((res.draws.back().dense() - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-6);
}

TEST(MhSampler, Reproducible) {
  const MgigParams p(1.2, SpdMatrix::identity(2), SpdMatrix::identity(2));
  RngStream r1(18, 3), r2(18, 3);
  const auto a = mgig_mh_sample(p, ChainConfig{}, 200, r1);
  const auto b = mgig_mh_sample(p, ChainConfig{}, 200, r2);
  for (std::size_t i = 0; i < a.draws.size(); ++i) EXPECT_EQ(a.draws[i].sym(), b.draws[i].sym());
}

TEST(MhSampler, RejectsBadConfig) {
  const MgigParams p(1.2, SpdMatrix::identity(2), SpdMatrix::identity(2));
  RngStream rng(1, 0);
  ChainConfig cfg;
  cfg.thin = 0;
  EXPECT_THROW(mgig_mh_sample(p, cfg, 10, rng), ConfigError);
  EXPECT_THROW(mgig_mh_sample(p, ChainConfig{}, 0, rng), ConfigError);
}

TEST(EffectiveSampleSize, IidAndCorrelated) {
  RngStream rng(19, 0);
  std::vector<double> iid(20000), ar(20000);
  double z = 0.0;
  for (std::size_t i = 0; i < iid.size(); ++i) {
    iid[i] = rng.normal();
    z = 0.9 * z + rng.normal();
    ar[i] = z;
  }
  EXPECT_GT(effective_sample_size(iid), 0.8 * iid.size());
  // AR(1) with phi = 0.9: tau = (1 + phi) / (1 - phi) = 19
  EXPECT_NEAR(effective_sample_size(ar) / ar.size(), 1.0 / 19.0, 0.02);
}
