#pragma once

// GIG, Gamma, Wishart and matrix GIG laws: unnormalized log-densities and
// exact samplers. Normalizing constants are deliberately absent; every check
// in the library works with differences of unnormalized log-densities.

#include "mgig/rng.hpp"
#include "mgig/spd.hpp"

namespace mgig {

/// GIG(lambda, alpha, beta): density proportional to
/// x^(lambda-1) exp(-alpha x - beta / x) on (0, inf).
struct GigParams {
  GigParams(double lambda, double alpha, double beta);

  double lambda;
  double alpha;
  double beta;
};

/// Gamma(shape, rate): density proportional to x^(shape-1) exp(-rate x).
struct GammaParams {
  GammaParams(double shape, double rate);

  double shape;
  double rate;
};

/// Wishart W(lambda, c): density proportional to
/// det(x)^(lambda-(r+1)/2) exp(-<c, x>) when lambda > (r-1)/2.
struct WishartParams {
  WishartParams(double lambda, SpdMatrix scale);

  int dim() const { return scale.dim(); }
  bool has_density() const;

  double lambda;
  SpdMatrix scale;
};

/// MGIG(lambda, a, b): density proportional to
/// det(x)^(lambda-(r+1)/2) exp(-<a, x> - <b, x^{-1}>).
struct MgigParams {
  MgigParams(double lambda, SpdMatrix a, SpdMatrix b);

  int dim() const { return a.dim(); }
  friend bool operator==(const MgigParams& p, const MgigParams& q) {
    return p.lambda == q.lambda && p.a.sym() == q.a.sym() && p.b.sym() == q.b.sym();
  }

  double lambda;
  SpdMatrix a;
  SpdMatrix b;
};

/// The MGIG exponent with coefficients that may be merely positive
/// semidefinite (zero when a map parameter vanishes).
struct MgigKernel {
  double lambda;
  SymMatrix a;
  SymMatrix b;

  static MgigKernel of(const MgigParams& p) { return {p.lambda, p.a.sym(), p.b.sym()}; }
  double operator()(const SpdMatrix& x, const ConditionGuard& guard = {}) const;
  /// Same value with x^{-1} supplied by the caller.
  double with_inverse(const SpdMatrix& x, const SymMatrix& x_inverse) const;
};

/// (lambda-1) log x - alpha x - beta / x with alpha, beta >= 0.
double gig_log_kernel(double lambda, double alpha, double beta, double x);

double gig_logpdf_unnorm(const GigParams& p, double x);
double gig_sample(const GigParams& p, RngStream& rng);

double gamma_logpdf_unnorm(const GammaParams& p, double x);
double gamma_sample(const GammaParams& p, RngStream& rng);

double mgig_logpdf_unnorm(const MgigParams& p, const SpdMatrix& x, const ConditionGuard& guard = {});

/// Law of W^{-1} when W ~ MGIG(lambda, a, b): MGIG(-lambda, b, a).
MgigParams invert_law(const MgigParams& p);

/// Lambda set of the Wishart family: {0, 1/2, ..., (r-1)/2} U ((r-1)/2, inf).
bool in_wishart_lambda_set(int dim, double lambda);

struct WishartDraw {
  SymMatrix value;
  /// True for singular laws (lambda <= (r-1)/2), whose draws live on the
  /// boundary of the cone and are not positive definite.
  bool on_boundary;
};

/// Bartlett decomposition of the standard Wishart with n = 2 lambda degrees
/// of freedom and Sigma = (2c)^{-1}; singular laws sum 2 lambda outer products.
/// Throws InvalidLambda when lambda is outside the Wishart lambda set.
WishartDraw wishart_sample(const WishartParams& p, RngStream& rng);

}  // namespace mgig
