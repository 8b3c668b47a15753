#include "mgig/errors.hpp"
#include "mgig/rng.hpp"
#include "mgig/spd.hpp"
#include "mgig/yang_baxter.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace mgig;

namespace {

SymMatrix sym2(double a, double b, double c) {
  SymMatrix m(2);
  m.set(0, 0, a);
  m.set(1, 0, b);
  m.set(1, 1, c);
  return m;
}

SymMatrix diag(std::vector<double> v) { return SymMatrix::diagonal(v); }

void expect_near(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  EXPECT_LE((a - b).norm(), tol) << "got\n" << a << "\nexpected\n" << b;
}

}  // namespace

TEST(SymMatrix, PackedLayoutIsRowMajorLowerTriangle) {
  SymMatrix m(3);
  m.set(2, 1, 7.0);
  EXPECT_EQ(m(1, 2), 7.0);
  EXPECT_EQ(m.packed()[4], 7.0);
  EXPECT_EQ(SymMatrix::packed_size(3), 6u);
  EXPECT_THROW(SymMatrix(0), DomainError);
}

TEST(SymMatrix, FromDenseSymmetrizes) {
  Eigen::MatrixXd d(2, 2);
  d << 1, 2, 4, 3;
  const SymMatrix m = SymMatrix::from_dense(d);
  EXPECT_DOUBLE_EQ(m(0, 1), 3.0);
}

TEST(IsSpd, Examples) {
  EXPECT_TRUE(is_spd(SymMatrix::identity(3)));
  EXPECT_FALSE(is_spd(diag({1.0, -1.0})));
  EXPECT_TRUE(is_spd(sym2(2, 1, 2)));
  EXPECT_FALSE(is_spd(sym2(1, 1, 1)));
  EXPECT_THROW(SpdMatrix(diag({1.0, 0.0})), DomainError);
}

TEST(SpdInverse, Examples) {
  expect_near(spd_inverse(SpdMatrix::identity(4)).dense(), Eigen::MatrixXd::Identity(4, 4), 1e-15);
  expect_near(spd_inverse(SpdMatrix(diag({2.0, 4.0}))).dense(), diag({0.5, 0.25}).dense(), 1e-15);
  // adjugate / determinant
  Eigen::MatrixXd expected(2, 2);
  expected << 2, -1, -1, 2;
  expected /= 3.0;
  expect_near(spd_inverse(SpdMatrix(sym2(2, 1, 2))).dense(), expected, 1e-15);
}

TEST(SpdInverse, GuardRejectsIllConditioned) {
  const SpdMatrix m(diag({1.0, 1e-10}));
  EXPECT_THROW(spd_inverse(m), IllConditioned);
  ConditionGuard loose;
  loose.max_condition = 1e12;
  EXPECT_NO_THROW(spd_inverse(m, loose));
}

TEST(SpdSqrt, Examples) {
  expect_near(spd_sqrt(SpdMatrix::identity(3)).dense(), Eigen::MatrixXd::Identity(3, 3), 1e-15);
  expect_near(spd_sqrt(SpdMatrix(diag({4.0, 9.0}))).dense(), diag({2.0, 3.0}).dense(), 1e-14);
  expect_near(spd_sqrt(SpdMatrix(sym2(5, 4, 5))).dense(), sym2(2, 1, 2).dense(), 1e-14);
}

TEST(Logdet, Examples) {
  EXPECT_EQ(logdet(SpdMatrix::identity(5)), 0.0);
  EXPECT_NEAR(logdet(SpdMatrix(diag({std::numbers::e, std::numbers::e}))), 2.0, 1e-15);
  EXPECT_NEAR(logdet(SpdMatrix(sym2(2, 1, 2))), std::log(3.0), 1e-15);
}

TEST(TraceInner, Examples) {
  EXPECT_EQ(trace_inner(SymMatrix::identity(4), SymMatrix::identity(4)), 4.0);
  EXPECT_EQ(trace_inner(sym2(1, 2, 3), SymMatrix(2)), 0.0);
  // xy = [[2,1],[3,2]]
  EXPECT_DOUBLE_EQ(trace_inner(sym2(1, 2, 3), sym2(0, 1, 0)), 4.0);
  EXPECT_THROW(trace_inner(SymMatrix(2), SymMatrix(3)), DimMismatch);
}

TEST(QuadRep, Examples) {
  const SymMatrix y = sym2(1, 2, 3);
  expect_near(quad_rep(SpdMatrix::identity(2), y).dense(), y.dense(), 1e-15);
  const SpdMatrix x(sym2(2, 1, 2));
  expect_near(quad_rep(x, SymMatrix::identity(2)).dense(), x.dense() * x.dense(), 1e-14);
  expect_near(quad_rep(SpdMatrix(diag({2.0, 1.0})), sym2(1, 1, 1)).dense(), sym2(4, 2, 1).dense(), 1e-15);
}

TEST(Vectorize, Examples) {
  const Eigen::VectorXd v = vectorize(SymMatrix::identity(2));
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v(0), 1.0);
  EXPECT_EQ(v(1), 0.0);
  EXPECT_EQ(v(2), 1.0);
  EXPECT_NEAR(vectorize(sym2(1, 1, 1)).squaredNorm(), 4.0, 1e-15);
  EXPECT_THROW(devectorize(Eigen::VectorXd::Zero(4), 2), DimMismatch);
  EXPECT_THROW(dim_from_vector_length(4), DimMismatch);
  EXPECT_EQ(dim_from_vector_length(10), 4);
}

// Randomized invariants over Wishart-generated matrices.
class SpdProperties : public ::testing::TestWithParam<int> {};

TEST_P(SpdProperties, Invariants) {
  const int r = GetParam();
  RngStream rng(11, static_cast<std::uint64_t>(r));
  for (int trial = 0; trial < 200; ++trial) {
    const SpdMatrix x = random_spd(r, rng, 1e6);
    const SpdMatrix y = random_spd(r, rng, 1e6);
    EXPECT_TRUE(is_spd(x.sym()));

    const double ld = logdet(x);
    EXPECT_LE(std::abs(logdet(spd_inverse(x)) + ld), 1e-10 * std::max(1.0, std::abs(ld)));

    const SpdMatrix s = spd_sqrt(x);
    EXPECT_LE((s.dense() * s.dense() - x.dense()).norm(), 1e-10 * x.sym().frobenius_norm());

    const SymMatrix back = quad_rep(x, quad_rep(spd_inverse(x), y.sym()));
    EXPECT_LE((back.dense() - y.dense()).norm(), 1e-9 * y.sym().frobenius_norm());

    const double ip = trace_inner(x.sym(), y.sym());
    EXPECT_LE(std::abs(vectorize(x.sym()).dot(vectorize(y.sym())) - ip), 1e-12 * std::abs(ip));

    const SymMatrix round = devectorize(vectorize(x.sym()), r);
    EXPECT_LE((round.dense() - x.dense()).norm(), 1e-14 * x.sym().frobenius_norm());
    EXPECT_NEAR(vectorize(x.sym()).squaredNorm(), trace_inner(x.sym(), x.sym()), 1e-12 * trace_inner(x.sym(), x.sym()));
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, SpdProperties, ::testing::Values(1, 2, 3, 5, 10));

TEST(RandomSpd, RespectsConditionBound) {
  RngStream rng(3, 0);
  for (int i = 0; i < 50; ++i) EXPECT_LE(random_spd(4, rng, 100.0).condition_number(), 100.0);
}

TEST(RelativeDifference, ZeroWhenBothVanish) {
  EXPECT_EQ(relative_difference(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)), 0.0);
  EXPECT_NEAR(relative_difference(Eigen::MatrixXd::Identity(2, 2), 2.0 * Eigen::MatrixXd::Identity(2, 2)), 0.5, 1e-15);
}
