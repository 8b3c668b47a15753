#include "mgig/distributions.hpp"

#include "mgig/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace mgig {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be a positive finite number");
}

// Mode of the standard GIG density y^(lambda-1) exp(-omega/2 (y + 1/y)), lambda >= 0.
double standard_gig_mode(double lambda, double omega) {
  if (lambda >= 1.0) return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) / omega;
  return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

// Ratio-of-uniforms with the mode as shift (Dagpunar 1989, Lehner 1989).
// The bounding rectangle uses the two real roots of a cubic found by
// the trigonometric form of Cardano's rule.
double rou_mode_shift(double lambda, double omega, RngStream& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = standard_gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = (2.0 * a * a * a) / 27.0 - (a * b) / 3.0 + c;
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;

  const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

  for (;;) {
    const double u = uminus + rng.uniform() * (uplus - uminus);
    const double v = rng.uniform();
    const double x = u / v + xm;
    if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// Ratio-of-uniforms without shift.
double rou_no_shift(double lambda, double omega, RngStream& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = standard_gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double ym = ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) / omega;
  const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);

  for (;;) {
    const double u = um * rng.uniform();
    const double v = rng.uniform();
    const double x = u / v;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// Rejection from a three-piece hat, constant on the log-concave part
// (Hoermann & Leydold 2014); 0 <= lambda < 1, 0 < omega <= 1.
double constant_hat_rejection(double lambda, double omega, RngStream& rng) {
  const double xm = standard_gig_mode(lambda, omega);
  const double x0 = omega / (1.0 - lambda);

  const double k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
  double area[3];
  area[0] = k0 * x0;

  double k1 = 0.0;
  double k2 = 0.0;
  if (x0 >= 2.0 / omega) {
    area[1] = 0.0;
    k2 = std::pow(x0, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    area[1] = (lambda == 0.0) ? k1 * std::log(2.0 / (omega * omega))
                              : k1 / lambda * (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(2.0 / omega, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = area[0] + area[1] + area[2];

  for (;;) {
    double v = total * rng.uniform();
    double x = 0.0;
    double hx = 0.0;
    if (v <= area[0]) {
      x = x0 * v / area[0];
      hx = k0;
    } else if ((v -= area[0]) <= area[1]) {
      if (lambda == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hx = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lambda) + (lambda / k1 * v), 1.0 / lambda);
        hx = k1 * std::pow(x, lambda - 1.0);
      }
    } else {
      v -= area[1];
      const double lo = (x0 > 2.0 / omega) ? x0 : 2.0 / omega;
      x = -2.0 / omega * std::log(std::exp(-omega / 2.0 * lo) - omega / (2.0 * k2) * v);
      hx = k2 * std::exp(-omega / 2.0 * x);
    }
    const double u = rng.uniform() * hx;
    if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) return x;
  }
}

double standard_gig_sample(double lambda, double omega, RngStream& rng) {
  if (lambda > 2.0 || omega > 3.0) return rou_mode_shift(lambda, omega, rng);
  if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2) return rou_no_shift(lambda, omega, rng);
  return constant_hat_rejection(lambda, omega, rng);
}

}  // namespace

GigParams::GigParams(double lambda_, double alpha_, double beta_) : lambda(lambda_), alpha(alpha_), beta(beta_) {
  if (!std::isfinite(lambda)) throw DomainError("GIG lambda must be finite");
  require_positive(alpha, "GIG alpha");
  require_positive(beta, "GIG beta");
}

GammaParams::GammaParams(double shape_, double rate_) : shape(shape_), rate(rate_) {
  require_positive(shape, "Gamma shape");
  require_positive(rate, "Gamma rate");
}

WishartParams::WishartParams(double lambda_, SpdMatrix scale_) : lambda(lambda_), scale(std::move(scale_)) {
  if (!in_wishart_lambda_set(scale.dim(), lambda)) {
    throw InvalidLambda("Wishart lambda " + std::to_string(lambda) + " is outside the admissible set for r=" +
                        std::to_string(scale.dim()));
  }
}

bool WishartParams::has_density() const { return lambda > 0.5 * (dim() - 1); }

MgigParams::MgigParams(double lambda_, SpdMatrix a_, SpdMatrix b_)
    : lambda(lambda_), a(std::move(a_)), b(std::move(b_)) {
  if (!std::isfinite(lambda)) throw DomainError("MGIG lambda must be finite");
  require_same_dim(a.dim(), b.dim(), "MgigParams");
}

double MgigKernel::operator()(const SpdMatrix& x, const ConditionGuard& guard) const {
  require_same_dim(a.dim(), x.dim(), "MGIG kernel");
  require_same_dim(b.dim(), x.dim(), "MGIG kernel");
  const int r = x.dim();
  const double power = lambda - 0.5 * (r + 1);
  double value = power * x.logdet() - trace_inner(a, x.sym());
  if (b.max_abs() != 0.0) value -= trace_inner(b, spd_inverse(x, guard).sym());
  return value;
}

double MgigKernel::with_inverse(const SpdMatrix& x, const SymMatrix& x_inverse) const {
  require_same_dim(a.dim(), x.dim(), "MGIG kernel");
  require_same_dim(b.dim(), x.dim(), "MGIG kernel");
  require_same_dim(x_inverse.dim(), x.dim(), "MGIG kernel");
  const double power = lambda - 0.5 * (x.dim() + 1);
  return power * x.logdet() - trace_inner(a, x.sym()) - trace_inner(b, x_inverse);
}

double gig_log_kernel(double lambda, double alpha, double beta, double x) {
  if (!(x > 0.0)) throw DomainError("GIG density evaluated at a non-positive point");
  return (lambda - 1.0) * std::log(x) - alpha * x - beta / x;
}

double gig_logpdf_unnorm(const GigParams& p, double x) { return gig_log_kernel(p.lambda, p.alpha, p.beta, x); }

double gig_sample(const GigParams& p, RngStream& rng) {
  const double omega = 2.0 * std::sqrt(p.alpha * p.beta);
  const double scale = std::sqrt(p.beta / p.alpha);
  const double y = standard_gig_sample(std::abs(p.lambda), omega, rng);
  return p.lambda < 0.0 ? scale / y : scale * y;
}

double gamma_logpdf_unnorm(const GammaParams& p, double x) {
  if (!(x > 0.0)) throw DomainError("Gamma density evaluated at a non-positive point");
  return (p.shape - 1.0) * std::log(x) - p.rate * x;
}

double gamma_sample(const GammaParams& p, RngStream& rng) {
  std::gamma_distribution<double> dist(p.shape, 1.0 / p.rate);
  double x = 0.0;
  do {
    x = dist(rng);
  } while (!(x > 0.0));
  return x;
}

double mgig_logpdf_unnorm(const MgigParams& p, const SpdMatrix& x, const ConditionGuard& guard) {
  return MgigKernel::of(p)(x, guard);
}

MgigParams invert_law(const MgigParams& p) { return MgigParams(-p.lambda, p.b, p.a); }

bool in_wishart_lambda_set(int dim, double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) return false;
  const double edge = 0.5 * (dim - 1);
  if (lambda > edge) return true;
  const double twice = 2.0 * lambda;
  return twice == std::floor(twice);
}

WishartDraw wishart_sample(const WishartParams& p, RngStream& rng) {
  const int r = p.dim();
  const double n = 2.0 * p.lambda;
  // Sigma = (2c)^{-1} = S S^T with S = L_c^{-T} / sqrt(2).
  const Eigen::MatrixXd lc = p.scale.cholesky();
  const Eigen::MatrixXd s =
      lc.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(r, r)) / std::sqrt(2.0);

  if (!p.has_density()) {
    const int k = static_cast<int>(std::lround(n));
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(r, r);
    Eigen::VectorXd g(r);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < r; ++i) g(i) = rng.normal();
      const Eigen::VectorXd z = s * g;
      acc += z * z.transpose();
    }
    return {SymMatrix::from_dense(acc), true};
  }

  Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < r; ++i) {
    // chi-square with n - i degrees of freedom is 2 * Gamma((n - i) / 2, 1)
    const double chi2 = 2.0 * gamma_sample(GammaParams(0.5 * (n - i), 1.0), rng);
    bartlett(i, i) = std::sqrt(chi2);
    for (int j = 0; j < i; ++j) bartlett(i, j) = rng.normal();
  }
  const Eigen::MatrixXd f = s * bartlett;
  return {SymMatrix::from_dense(f * f.transpose()), false};
}

}  // namespace mgig
