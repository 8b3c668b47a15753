#include "mgig/spd.hpp"

#include "mgig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mgig {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_of(const SymMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.dense());
}

}  // namespace

void ConditionGuard::validate() const {
  if (!(max_condition >= 1.0)) throw ConfigError("ConditionGuard: max_condition must be >= 1");
  if (!(tolerance_scale > 0.0)) throw ConfigError("ConditionGuard: tolerance_scale must be > 0");
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                      std::to_string(b));
  }
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(int dim) : SymMatrix(dim, std::vector<double>(packed_size(dim > 0 ? dim : 1))) {
  if (dim < 1) throw DomainError("SymMatrix: dimension must be >= 1");
}

SymMatrix::SymMatrix(int dim, std::vector<double> data) : dim_(dim), data_(std::move(data)) {}

SymMatrix SymMatrix::identity(int dim) { return scaled_identity(dim, 1.0); }

SymMatrix SymMatrix::scaled_identity(int dim, double c) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, c);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> values) {
  SymMatrix m(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    m.set(static_cast<int>(i), static_cast<int>(i), values[i]);
  }
  return m;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimMismatch("SymMatrix::from_dense: matrix is not square");
  const int r = static_cast<int>(m.rows());
  SymMatrix out(r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j <= i; ++j) out.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  }
  return out;
}

SymMatrix SymMatrix::from_packed(int dim, std::vector<double> packed) {
  if (dim < 1) throw DomainError("SymMatrix: dimension must be >= 1");
  if (packed.size() != packed_size(dim)) {
    throw DimMismatch("SymMatrix::from_packed: expected " + std::to_string(packed_size(dim)) +
                      " values, got " + std::to_string(packed.size()));
  }
  return SymMatrix(dim, std::move(packed));
}

Eigen::MatrixXd SymMatrix::dense() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = (*this)(i, j);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

double SymMatrix::frobenius_norm() const { return std::sqrt(trace_inner(*this, *this)); }

double SymMatrix::max_abs() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  require_same_dim(dim_, other.dim_, "SymMatrix +");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  require_same_dim(dim_, other.dim_, "SymMatrix -");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

// ---------------------------------------------------------------------------
// Cholesky certificate

std::optional<Eigen::MatrixXd> cholesky_certificate(const SymMatrix& m) {
  const int r = m.dim();
  const double threshold = r * kEps * m.max_abs();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(r, r);
  for (int j = 0; j < r; ++j) {
    double pivot = m(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > threshold) || !std::isfinite(pivot)) return std::nullopt;
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (int i = j + 1; i < r; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

bool is_spd(const SymMatrix& m) { return cholesky_certificate(m).has_value(); }

// ---------------------------------------------------------------------------
// SpdMatrix

SpdMatrix::SpdMatrix(SymMatrix m, Eigen::MatrixXd lower) : sym_(std::move(m)), chol_(std::move(lower)) {}

SpdMatrix::SpdMatrix(SymMatrix m) : sym_(std::move(m)) {
  auto l = cholesky_certificate(sym_);
  if (!l) throw DomainError("matrix is not positive definite");
  chol_ = std::move(*l);
}

std::optional<SpdMatrix> SpdMatrix::try_from(const SymMatrix& m) {
  auto l = cholesky_certificate(m);
  if (!l) return std::nullopt;
  return SpdMatrix(m, std::move(*l));
}

SpdMatrix SpdMatrix::from_dense(const Eigen::MatrixXd& m) { return SpdMatrix(SymMatrix::from_dense(m)); }

SpdMatrix SpdMatrix::identity(int dim) {
  return SpdMatrix(SymMatrix::identity(dim), Eigen::MatrixXd::Identity(dim, dim));
}

SpdMatrix SpdMatrix::from_factor(SymMatrix m, Eigen::MatrixXd lower) {
  return SpdMatrix(std::move(m), std::move(lower));
}

double SpdMatrix::logdet() const {
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s += std::log(chol_(i, i));
  return 2.0 * s;
}

double SpdMatrix::condition_number() const {
  if (dim() == 1) return 1.0;
  const auto es = eigen_of(sym_);
  const auto& ev = es.eigenvalues();
  return ev.maxCoeff() / ev.minCoeff();
}

double condition_number(const SpdMatrix& m) { return m.condition_number(); }

double min_eigenvalue(const SpdMatrix& m) {
  if (m.dim() == 1) return m.sym()(0, 0);
  return eigen_of(m.sym()).eigenvalues().minCoeff();
}

void check_condition(const SpdMatrix& m, const ConditionGuard& guard) {
  const double kappa = m.condition_number();
  if (!(kappa <= guard.max_condition)) {
    throw IllConditioned("condition number " + std::to_string(kappa) + " exceeds guard " +
                         std::to_string(guard.max_condition));
  }
}

double logdet(const SpdMatrix& m) { return m.logdet(); }

SpdMatrix spd_inverse(const SpdMatrix& m, const ConditionGuard& guard) {
  check_condition(m, guard);
  const int r = m.dim();
  // (L L^T)^{-1} = L^{-T} L^{-1}
  Eigen::MatrixXd linv = m.cholesky().triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(r, r));
  Eigen::MatrixXd inv = linv.transpose() * linv;
  return SpdMatrix(SymMatrix::from_dense(inv));
}

SpdMatrix spd_sqrt(const SpdMatrix& m, const ConditionGuard& guard) {
  check_condition(m, guard);
  const auto es = eigen_of(m.sym());
  const Eigen::VectorXd root = es.eigenvalues().cwiseSqrt();
  const Eigen::MatrixXd& q = es.eigenvectors();
  return SpdMatrix(SymMatrix::from_dense(q * root.asDiagonal() * q.transpose()));
}

double trace_inner(const SymMatrix& x, const SymMatrix& y) {
  require_same_dim(x.dim(), y.dim(), "trace_inner");
  const int r = x.dim();
  double diag = 0.0;
  double off = 0.0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < i; ++j) off += x(i, j) * y(i, j);
    diag += x(i, i) * y(i, i);
  }
  return diag + 2.0 * off;
}

SymMatrix quad_rep(const SpdMatrix& x, const SymMatrix& y) {
  require_same_dim(x.dim(), y.dim(), "quad_rep");
  const Eigen::MatrixXd xd = x.dense();
  return SymMatrix::from_dense(xd * y.dense() * xd);
}

SpdMatrix quad_rep(const SpdMatrix& x, const SpdMatrix& y) {
  require_same_dim(x.dim(), y.dim(), "quad_rep");
  // x y x = (x L)(x L)^T keeps the result certified without refactoring noise.
  const Eigen::MatrixXd f = x.dense() * y.cholesky();
  return SpdMatrix(SymMatrix::from_dense(f * f.transpose()));
}

Eigen::VectorXd vectorize(const SymMatrix& m) {
  static const double kRoot2 = std::sqrt(2.0);
  const int r = m.dim();
  Eigen::VectorXd v(static_cast<Eigen::Index>(SymMatrix::packed_size(r)));
  Eigen::Index k = 0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j <= i; ++j) v(k++) = (i == j) ? m(i, j) : kRoot2 * m(i, j);
  }
  return v;
}

int dim_from_vector_length(std::size_t length) {
  const int r = static_cast<int>(std::lround((std::sqrt(8.0 * static_cast<double>(length) + 1.0) - 1.0) / 2.0));
  if (r < 1 || SymMatrix::packed_size(r) != length) {
    throw DimMismatch("vector length " + std::to_string(length) + " is not r(r+1)/2 for any r");
  }
  return r;
}

SymMatrix devectorize(const Eigen::Ref<const Eigen::VectorXd>& v, int dim) {
  if (dim < 1 || static_cast<std::size_t>(v.size()) != SymMatrix::packed_size(dim)) {
    throw DimMismatch("devectorize: length " + std::to_string(v.size()) + " does not match dimension " +
                      std::to_string(dim));
  }
  static const double kInvRoot2 = 1.0 / std::sqrt(2.0);
  SymMatrix m(dim);
  Eigen::Index k = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j, ++k) m.set(i, j, (i == j) ? v(k) : kInvRoot2 * v(k));
  }
  return m;
}

double relative_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

double asymmetry(const Eigen::MatrixXd& m) {
  const double n = m.norm();
  if (n == 0.0) return 0.0;
  return (m - m.transpose()).norm() / n;
}

}  // namespace mgig
