#pragma once
// Reference values computed independently of the library: quadrature of
// unnormalized densities, brute-force statistics and classical series.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

/// CDF of GIG(lambda, alpha, beta), density ~ x^(lambda-1) exp(-alpha x - beta/x),
/// tabulated by adaptive Gauss-Kronrod quadrature in t = log x and
/// interpolated linearly between nodes.
class GigCdf {
 public:
  GigCdf(double lambda, double alpha, double beta, std::size_t nodes = 4000)
      : lambda_(lambda), alpha_(alpha), beta_(beta) {
    // Mode of the log-scale density lambda t - alpha e^t - beta e^-t.
    const double w = (lambda + std::sqrt(lambda * lambda + 4.0 * alpha * beta)) / (2.0 * alpha);
    const double t0 = std::log(w);
    shift_ = logg(t0);
    lo_ = t0;
    hi_ = t0;
    while (logg(lo_) - shift_ > -60.0) lo_ -= 0.05;
    while (logg(hi_) - shift_ > -60.0) hi_ += 0.05;

    t_.resize(nodes);
    cum_.resize(nodes);
    auto g = [&](double t) { return std::exp(logg(t) - shift_); };
    const double h = (hi_ - lo_) / static_cast<double>(nodes - 1);
    t_[0] = lo_;
    cum_[0] = 0.0;
    for (std::size_t i = 1; i < nodes; ++i) {
      t_[i] = lo_ + h * static_cast<double>(i);
      cum_[i] = cum_[i - 1] + boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, t_[i - 1], t_[i], 8, 1e-13);
    }
    for (double& c : cum_) c /= cum_.back();
  }

  double operator()(double x) const {
    if (!(x > 0.0)) return 0.0;
    const double t = std::log(x);
    if (t <= lo_) return 0.0;
    if (t >= hi_) return 1.0;
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - t_.begin());
    const double f = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
    return cum_[i - 1] + f * (cum_[i] - cum_[i - 1]);
  }

  /// E[X] by the same quadrature.
  double mean() const {
    auto g = [&](double t) { return std::exp(logg(t) - shift_); };
    auto xg = [&](double t) { return std::exp(t + logg(t) - shift_); };
    using Q = boost::math::quadrature::gauss_kronrod<double, 61>;
    return Q::integrate(xg, lo_ - 5.0, hi_ + 5.0, 15, 1e-12) / Q::integrate(g, lo_, hi_, 15, 1e-12);
  }

 private:
  double logg(double t) const { return lambda_ * t - alpha_ * std::exp(t) - beta_ * std::exp(-t); }

  double lambda_, alpha_, beta_;
  double shift_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> t_, cum_;
};

/// E[log det X] for the 2x2 MGIG(lambda, I, I) law, from the eigenvalue
/// density |l1 - l2| prod l_i^(lambda - 3/2) exp(-l_i - 1/l_i), integrated
/// in log coordinates.
inline double mgig2_identity_mean_logdet(double lambda) {
  using Q = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double lo = -12.0, hi = 8.0;
  auto weight = [&](double s, double t) {
    const double l1 = std::exp(s), l2 = std::exp(t);
    // l^(lambda - 3/2) dl = l^(lambda - 1/2) ds
    return std::abs(l1 - l2) * std::exp((lambda - 0.5) * (s + t) - l1 - 1.0 / l1 - l2 - 1.0 / l2);
  };
  auto inner = [&](double s, bool weighted) {
    return Q::integrate([&](double t) { return weight(s, t) * (weighted ? s + t : 1.0); }, lo, hi, 12, 1e-11);
  };
  const double num = Q::integrate([&](double s) { return inner(s, true); }, lo, hi, 12, 1e-10);
  const double den = Q::integrate([&](double s) { return inner(s, false); }, lo, hi, 12, 1e-10);
  return num / den;
}

/// Squared distance covariance V-statistic by explicit double centering.
inline double dcov2_brute(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  Eigen::MatrixXd a(n, n), b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = std::abs(x[i] - x[j]);
      b(i, j) = std::abs(y[i] - y[j]);
    }
  }
  auto centre = [](Eigen::MatrixXd& m) {
    const Eigen::VectorXd row = m.rowwise().mean();
    const Eigen::RowVectorXd col = m.colwise().mean();
    const double all = m.mean();
    m.colwise() -= row;
    m.rowwise() -= col;
    m.array() += all;
  };
  centre(a);
  centre(b);
  return (a.array() * b.array()).mean();
}

/// Kolmogorov survival function from the theta-function form
/// 1 - sqrt(2 pi)/t sum exp(-(2k-1)^2 pi^2 / (8 t^2)), accurate for small t.
inline double kolmogorov_q_theta(double t) {
  constexpr double pi = std::numbers::pi;
  double s = 0.0;
  for (int k = 1; k < 50; ++k) {
    const double m = 2.0 * k - 1.0;
    s += std::exp(-m * m * pi * pi / (8.0 * t * t));
  }
  return 1.0 - std::sqrt(2.0 * pi) / t * s;
}

/// Sup distance between an empirical CDF and a reference CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, const Cdf& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace oracle
