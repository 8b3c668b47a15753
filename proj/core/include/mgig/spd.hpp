#pragma once

// Symmetric matrices, the cone of symmetric positive definite matrices and
// the primitives every other module builds on.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mgig {

/// Tolerance policy for operations that invert or take roots of SPD matrices.
struct ConditionGuard {
  double max_condition = 1e8;
  /// Multiplies kappa * eps in residual bounds such as |m n - I|_F.
  double tolerance_scale = 16.0;

  void validate() const;
};

/// Real symmetric r x r matrix. Only the lower triangle is stored
/// (row-major: (0,0), (1,0), (1,1), (2,0), ...), so symmetry is structural.
class SymMatrix {
 public:
  /// Zero matrix of the given dimension.
  explicit SymMatrix(int dim);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(std::span<const double> values);
  static SymMatrix scaled_identity(int dim, double c);
  /// Builds from a dense square matrix as (m + m^T) / 2.
  static SymMatrix from_dense(const Eigen::MatrixXd& m);
  /// Builds from packed lower-triangle storage (no scaling).
  static SymMatrix from_packed(int dim, std::vector<double> packed);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }
  void set(int i, int j, double value) { data_[index(i, j)] = value; }
  std::span<const double> packed() const { return data_; }

  Eigen::MatrixXd dense() const;
  double frobenius_norm() const;
  double max_abs() const;
  double trace() const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double c);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double c) { return a *= c; }
  friend SymMatrix operator*(double c, SymMatrix a) { return a *= c; }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

  static std::size_t packed_size(int dim) {
    return static_cast<std::size_t>(dim) * (dim + 1) / 2;
  }

 private:
  SymMatrix(int dim, std::vector<double> data);

  std::size_t index(int i, int j) const {
    if (i < j) std::swap(i, j);
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  int dim_;
  std::vector<double> data_;
};

/// Element of the open cone of symmetric positive definite matrices.
/// Carries its Cholesky factor as the membership certificate.
class SpdMatrix {
 public:
  /// Throws DomainError when `m` fails the Cholesky pivot test.
  explicit SpdMatrix(SymMatrix m);

  static std::optional<SpdMatrix> try_from(const SymMatrix& m);
  /// Symmetrizes a dense matrix and certifies it.
  static SpdMatrix from_dense(const Eigen::MatrixXd& m);
  static SpdMatrix identity(int dim);

  int dim() const { return sym_.dim(); }
  const SymMatrix& sym() const { return sym_; }
  /// Lower-triangular factor L with L L^T = sym().
  const Eigen::MatrixXd& cholesky() const { return chol_; }
  Eigen::MatrixXd dense() const { return sym_.dense(); }

  double logdet() const;
  /// Ratio of extreme eigenvalues.
  double condition_number() const;

  /// Unchecked construction from a factor already known to be valid.
  static SpdMatrix from_factor(SymMatrix m, Eigen::MatrixXd lower);

 private:
  SpdMatrix(SymMatrix m, Eigen::MatrixXd lower);

  SymMatrix sym_;
  Eigen::MatrixXd chol_;
};

/// Cholesky with the pivot threshold dim * eps * max|entry|.
/// Returns the lower factor, or nullopt if a pivot falls below the threshold.
std::optional<Eigen::MatrixXd> cholesky_certificate(const SymMatrix& m);

bool is_spd(const SymMatrix& m);

double condition_number(const SpdMatrix& m);
double min_eigenvalue(const SpdMatrix& m);
void check_condition(const SpdMatrix& m, const ConditionGuard& guard);

SpdMatrix spd_inverse(const SpdMatrix& m, const ConditionGuard& guard = {});
SpdMatrix spd_sqrt(const SpdMatrix& m, const ConditionGuard& guard = {});
double logdet(const SpdMatrix& m);

/// <x, y> = tr(xy).
double trace_inner(const SymMatrix& x, const SymMatrix& y);

/// Quadratic representation P(x)y = x y x.
SymMatrix quad_rep(const SpdMatrix& x, const SymMatrix& y);
SpdMatrix quad_rep(const SpdMatrix& x, const SpdMatrix& y);

/// Isometric coordinates for (Omega, tr(xy)): packed lower-triangle order,
/// off-diagonal entries scaled by sqrt(2).
Eigen::VectorXd vectorize(const SymMatrix& m);
SymMatrix devectorize(const Eigen::Ref<const Eigen::VectorXd>& v, int dim);

/// Dimension r with r(r+1)/2 == length, or throws DimMismatch.
int dim_from_vector_length(std::size_t length);

/// |a - b|_F / max(|a|_F, |b|_F); zero when both vanish.
double relative_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// |m - m^T|_F / |m|_F.
double asymmetry(const Eigen::MatrixXd& m);

void require_same_dim(int a, int b, const char* what);

}  // namespace mgig
