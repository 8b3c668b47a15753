#include "mgig/campaigns.hpp"
#include "mgig/errors.hpp"
#include "mgig/identities.hpp"
#include "mgig/independence.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

using namespace mgig;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t stream) {
  RngStream rng(31, stream);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

SpdMatrix scalar(double v) { return SpdMatrix(SymMatrix::scaled_identity(1, v)); }

std::vector<SpdPair> scalar_pairs(std::size_t n, std::uint64_t stream) {
  RngStream rng(32, stream);
  std::vector<SpdPair> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(scalar(std::exp(2 * rng.normal())), scalar(std::exp(2 * rng.normal())));
  return out;
}

}  // namespace

// --------------------------------------------------------------------------
// Distance covariance

TEST(Dcov, FastMatchesBruteForce) {
  for (std::size_t n : {2u, 3u, 17u, 200u}) {
    const auto x = normals(n, n), y0 = normals(n, n + 1000);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * x[i] + 0.3 * y0[i];
    const double brute = oracle::dcov2_brute(x, y);
    EXPECT_NEAR(dcov2_fast(x, y), brute, 1e-12 * std::max(1.0, std::abs(brute))) << "n=" << n;
  }
}

TEST(Dcov, FastHandlesTies) {
  std::vector<double> x{1, 1, 2, 2, 3, 3, 3, 0}, y{5, 4, 4, 5, 5, 1, 1, 1};
  EXPECT_NEAR(dcov2_fast(x, y), oracle::dcov2_brute(x, y), 1e-13);
}

TEST(Dcov, ExactMatchesBruteForceInOneDimension) {
  const auto x = normals(150, 1), y = normals(150, 2);
  const Eigen::MatrixXd xm = Eigen::Map<const Eigen::VectorXd>(x.data(), 150);
  const Eigen::MatrixXd ym = Eigen::Map<const Eigen::VectorXd>(y.data(), 150);
  EXPECT_NEAR(dcov2_exact(xm, ym), oracle::dcov2_brute(x, y), 1e-13);
}

TEST(Dcor, PerfectDependence) {
  const auto x = normals(300, 3);
  const SampleBatch u = SampleBatch::from_scalars(x);
  EXPECT_NEAR(dcor2(u, u), 1.0, 1e-12);
  RngStream rng(1, 0);
  const IndependenceReport rep = distance_correlation(u, u, 199, rng);
  EXPECT_DOUBLE_EQ(rep.p_value, 1.0 / 200.0);
  EXPECT_TRUE(rep.reject());
}

TEST(Dcor, IndependentNormals) {
  const SampleBatch u = SampleBatch::from_scalars(normals(5000, 4));
  const SampleBatch v = SampleBatch::from_scalars(normals(5000, 5));
  RngStream rng(2, 0);
  EXPECT_GT(distance_correlation(u, v, 999, rng).p_value, 0.001);
}

TEST(Dcor, MatrixPathDetectsDependence) {
  RngStream rng(3, 0);
  std::vector<SpdMatrix> a, b;
  for (int i = 0; i < 200; ++i) {
    a.push_back(random_spd(2, rng));
    b.push_back(spd_inverse(a.back()));
  }
  const IndependenceReport rep =
      distance_correlation(SampleBatch::from_matrices(a), SampleBatch::from_matrices(b), 199, rng);
  EXPECT_LT(rep.p_value, 0.01);
}

TEST(Dcor, Preconditions) {
  RngStream rng(4, 0);
  const SampleBatch small = SampleBatch::from_scalars(normals(50, 6));
  EXPECT_THROW(distance_correlation(small, small, 199, rng), TooFewSamples);
  const SampleBatch u = SampleBatch::from_scalars(normals(200, 7));
  EXPECT_THROW(distance_correlation(u, u, 10, rng), ConfigError);
  const SampleBatch v = SampleBatch::from_scalars(normals(201, 8));
  EXPECT_THROW(distance_correlation(u, v, 199, rng), DimMismatch);
}

TEST(Dcor, ThreadCountDoesNotChangePValue) {
  const SampleBatch u = SampleBatch::from_scalars(normals(2000, 9));
  const SampleBatch v = SampleBatch::from_scalars(normals(2000, 10));
  RngStream r1(5, 0), r2(5, 0);
  EXPECT_EQ(distance_correlation(u, v, 199, r1, 0.01, 1).p_value, distance_correlation(u, v, 199, r2, 0.01, 3).p_value);
}

// --------------------------------------------------------------------------
// Energy distance

TEST(Energy, StatisticMatchesPairwiseDefinition) {
  const auto a = normals(60, 11), b0 = normals(40, 12);
  std::vector<double> b(b0);
  for (auto& x : b) x = 0.5 + 2 * x;
  double cross = 0, wa = 0, wb = 0;
  for (double x : a)
    for (double y : b) cross += std::abs(x - y);
  for (double x : a)
    for (double y : a) wa += std::abs(x - y);
  for (double x : b)
    for (double y : b) wb += std::abs(x - y);
  const double n = 60, m = 40;
  const double expected = n * m / (n + m) * (2 * cross / (n * m) - wa / (n * n) - wb / (m * m));
  EXPECT_NEAR(energy_statistic(SampleBatch::from_scalars(a), SampleBatch::from_scalars(b)), expected, 1e-12 * expected);

  // The matrix path must agree when the coordinates are one-dimensional.
  const Eigen::MatrixXd ac = Eigen::Map<const Eigen::VectorXd>(a.data(), 60);
  const Eigen::MatrixXd bc = Eigen::Map<const Eigen::VectorXd>(b.data(), 40);
  // matrix_dim 1 with 1 coordinate routes to the univariate path, so use a
  // padded 3-coordinate copy (r = 2) with zero extra columns.
  Eigen::MatrixXd ap = Eigen::MatrixXd::Zero(60, 3), bp = Eigen::MatrixXd::Zero(40, 3);
  ap.col(0) = ac;
  bp.col(0) = bc;
  EXPECT_NEAR(energy_statistic(SampleBatch(ap, 2), SampleBatch(bp, 2)), expected, 1e-12 * expected);
}

TEST(Energy, SameLawNotRejected) {
  const auto a = normals(4000, 13), b = normals(4000, 14);
  RngStream rng(6, 0);
  EXPECT_GT(energy_distance_test(SampleBatch::from_scalars(a), SampleBatch::from_scalars(b), 499, rng).p_value, 0.001);
}

TEST(Energy, ShiftDetected) {
  auto a = normals(1000, 15), b = normals(1000, 16);
  for (auto& x : b) x += 0.3;
  RngStream rng(7, 0);
  EXPECT_LT(energy_distance_test(SampleBatch::from_scalars(a), SampleBatch::from_scalars(b), 499, rng).p_value, 0.01);
}

// --------------------------------------------------------------------------
// Kolmogorov-Smirnov

TEST(Ks, SurvivalFunctionMatchesThetaForm) {
  for (double t : {0.3, 0.5, 0.8, 1.0, 1.36, 2.0, 3.0}) {
    EXPECT_NEAR(kolmogorov_q(t), oracle::kolmogorov_q_theta(t), 1e-12) << t;
  }
  EXPECT_NEAR(kolmogorov_q(1.3581), 0.05, 1e-4);
}

TEST(Ks, OneSampleAgainstNormalCdf) {
  const auto x = normals(5000, 17);
  const KsResult r = ks_one_sample(x, [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); });
  EXPECT_GT(r.p_value, 0.01);
  EXPECT_NEAR(r.statistic, oracle::ks_distance(x, [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); }), 1e-15);
}

TEST(Ks, TwoSampleDetectsScaleChange) {
  auto a = normals(3000, 18), b = normals(3000, 19);
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
  for (auto& x : b) x *= 1.3;
  EXPECT_LT(ks_two_sample(a, b).p_value, 0.001);
}

TEST(Permutation, IsAPermutation) {
  RngStream rng(8, 0);
  auto p = random_permutation(1000, rng);
  std::set<std::size_t> s(p.begin(), p.end());
  EXPECT_EQ(s.size(), 1000u);
  EXPECT_EQ(*s.rbegin(), 999u);
}

// --------------------------------------------------------------------------
// Density transport

TEST(Transport, ScalarExample) {
  const auto pairs = scalar_pairs(100, 1);
  const TransportResult r = density_transport_check(0.7, scalar(1.2), scalar(0.8), MapParams(2, 0.5), pairs);
  EXPECT_LE(r.residual, 1e-11);
  EXPECT_EQ(r.deltas.size(), 100u);
}

TEST(Transport, SwapCaseIsExact) {
  RngStream rng(9, 0);
  std::vector<SpdPair> pairs;
  for (int i = 0; i < 50; ++i) pairs.emplace_back(random_spd(2, rng), random_spd(2, rng));
  const SpdMatrix a = random_spd(2, rng), b = random_spd(2, rng);
  EXPECT_LE(density_transport_check(1.1, a, b, MapParams(0.6, 0.6), pairs).residual, 1e-12);
}

TEST(Transport, MatrixPairs) {
  for (int r : {2, 3}) {
    const auto pairs = random_pairs(r, 200, 77, 1);
    RngStream rng(10, static_cast<std::uint64_t>(r));
    const SpdMatrix a = random_spd(r, rng, 1e2), b = random_spd(r, rng, 1e2);
    EXPECT_LE(density_transport_check(-0.4, a, b, MapParams(0.9, 2.2), pairs).residual, 1e-9);
  }
}

TEST(Transport, OffsetsDoNotChangeResidual) {
  const auto pairs = random_pairs(2, 100, 78, 2);
  const SpdMatrix a = SpdMatrix::identity(2);
  const SpdMatrix b(SymMatrix::scaled_identity(2, 2.0));
  const MapParams p(2, 0.5);
  const TransportLaws laws = theorem_laws(1.3, a, b, p);
  const double plain = density_transport_check(laws, p, pairs).residual;
  const double shifted = density_transport_check(laws, p, pairs, KernelOffsets{3.0, -7.0, 11.0, 0.5}).residual;
  EXPECT_NEAR(plain, shifted, 1e-12);
}

TEST(Transport, WrongLawIsDetected) {
  const auto pairs = scalar_pairs(100, 3);
  const MapParams p(2, 0.5);
  TransportLaws laws = theorem_laws(0.7, scalar(1.2), scalar(0.8), p);
  laws.x.lambda += 0.5;
  EXPECT_GT(density_transport_check(laws, p, pairs).residual, 1e-2);
}

TEST(Eff, ConstancyOnGrid) {
  const auto grid = log_grid(1e-2, 1e2, 50);
  EXPECT_EQ(grid.size(), 2500u);
  EXPECT_LE(univariate_eff_check(1, 1, 0, 1, 1, grid), 1e-11);
  EXPECT_LE(univariate_eff_check(0.7, 2, 0.5, 1.2, 0.8, grid), 1e-10);
  EXPECT_LE(univariate_eff_check(-1.5, 0.3, 2, 0.5, 3, grid), 1e-10);
}

TEST(Eff, PerturbedLawIsDetected) {
  const auto grid = log_grid(1e-2, 1e2, 50);
  const MapParams p(2, 0.5);
  EffLaws laws = eff_laws(0.7, 2, 0.5, 1.2, 0.8);
  laws.x.alpha *= 1.1;
  EXPECT_GT(univariate_eff_check(laws, p, grid), 1e-2);
}

TEST(Eff, RejectsNonPositiveGrid) {
  const std::vector<GridPoint> grid{{1.0, 1.0}, {0.0, 1.0}};
  EXPECT_THROW(univariate_eff_check(1, 1, 0, 1, 1, grid), DomainError);
}

TEST(LogSpaced, Endpoints) {
  const auto v = log_spaced(1e-2, 1e2, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_NEAR(v.front(), 1e-2, 1e-16);
  EXPECT_NEAR(v[2], 1.0, 1e-14);
  EXPECT_NEAR(v.back(), 1e2, 1e-12);
}

// --------------------------------------------------------------------------
// Campaigns

TEST(Campaigns, MapsSmallPasses) {
  MapsCampaignConfig cfg;
  cfg.pairs = 40;
  cfg.jacobian_pairs = 5;
  EXPECT_TRUE(maps_campaign(cfg).pass());
  cfg.grid = {MapParams(1, 0)};
  EXPECT_TRUE(maps_campaign(cfg).pass());
}

TEST(Campaigns, TransportSmallPasses) {
  TransportCampaignConfig cfg;
  cfg.pairs = 50;
  cfg.eff_grid_points = 10;
  const VerificationReport rep = transport_campaign(cfg);
  EXPECT_TRUE(rep.pass());
}

TEST(Campaigns, ReportsIndependentOfThreads) {
  MapsCampaignConfig m;
  m.pairs = 30;
  m.jacobian_pairs = 3;
  m.threads = 1;
  const auto a = without_wallclock(maps_campaign(m).to_json());
  m.threads = 4;
  EXPECT_EQ(a, without_wallclock(maps_campaign(m).to_json()));

  TransportCampaignConfig t;
  t.pairs = 30;
  t.eff_grid_points = 8;
  t.threads = 1;
  const auto b = without_wallclock(transport_campaign(t).to_json());
  t.threads = 3;
  EXPECT_EQ(b, without_wallclock(transport_campaign(t).to_json()));
}

TEST(Campaigns, DirecScalarSmall) {
  McCampaignConfig cfg;
  cfg.n = 2000;
  cfg.permutations = 199;
  cfg.control_permutations = 1999;
  const VerificationReport rep = direc_campaign(cfg);
  EXPECT_TRUE(rep.pass()) << rep.to_json().dump(2);
  cfg.threads = 3;
  EXPECT_EQ(without_wallclock(rep.to_json()), without_wallclock(direc_campaign(cfg).to_json()));
}

TEST(Campaigns, MyScalarSmall) {
  McCampaignConfig cfg;
  cfg.n = 2000;
  cfg.permutations = 199;
  cfg.control_permutations = 1999;
  const VerificationReport rep = my_property_campaign(cfg);
  EXPECT_TRUE(rep.pass()) << rep.to_json().dump(2);
}

TEST(Campaigns, ConfigValidation) {
  McCampaignConfig cfg;
  cfg.beta = 0.0;
  EXPECT_THROW(direc_campaign(cfg), ConfigError);
  McCampaignConfig my;
  my.dim = 3;
  my.lambda = 0.9;  // below (r - 1) / 2
  EXPECT_THROW(my_property_campaign(my), ConfigError);
}

TEST(Report, JsonShape) {
  VerificationReport rep;
  rep.command = "unit";
  rep.add(at_most("a", 1e-12, 1e-10));
  rep.add(greater_than("b", 0.5, 1e-2));
  rep.add(less_than("c", NAN, 1.0));
  EXPECT_FALSE(rep.pass());
  const auto j = rep.to_json();
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_EQ(j["results"].size(), 3u);
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_TRUE(j.contains("wallclock"));
  EXPECT_FALSE(without_wallclock(j).contains("wallclock"));
  EXPECT_FALSE(VerificationReport{}.pass());
}
