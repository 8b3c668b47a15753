#include "mgig/independence.hpp"

#include "mgig/errors.hpp"
#include "mgig/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mgig {

namespace {

void require_permutations(std::size_t b) {
  if (b < kMinPermutations) {
    throw ConfigError("permutation count must be at least " + std::to_string(kMinPermutations));
  }
}

void require_samples(std::size_t n, const char* what) {
  if (n < kMinSamples) {
    throw TooFewSamples(std::string(what) + ": need at least " + std::to_string(kMinSamples) + " draws, got " +
                        std::to_string(n));
  }
}

double p_value_of(double observed, const std::vector<double>& null) {
  std::size_t ge = 0;
  for (double t : null)
    if (t >= observed) ++ge;
  return static_cast<double>(1 + ge) / static_cast<double>(null.size() + 1);
}

std::vector<double> centered(std::span<const double> v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x -= mean;
  return out;
}

/// sum_j |s_k - s_j| for ascending s.
std::vector<double> sorted_row_sums(const std::vector<double>& s) {
  const std::size_t n = s.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + s[k];
  std::vector<double> rows(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double below = s[k] * static_cast<double>(k) - prefix[k];
    const double above = (prefix[n] - prefix[k + 1]) - s[k] * static_cast<double>(n - k - 1);
    rows[k] = below + above;
  }
  return rows;
}

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : n_(n), tree_(4 * (n + 1), 0.0) {}

  void add(std::size_t rank, double x, double y) {
    for (std::size_t i = rank + 1; i <= n_; i += i & (~i + 1)) {
      double* t = &tree_[4 * i];
      t[0] += 1.0;
      t[1] += y;
      t[2] += x;
      t[3] += x * y;
    }
  }

  /// Sums of (1, y, x, xy) over ranks < rank.
  void prefix(std::size_t rank, double out[4]) const {
    out[0] = out[1] = out[2] = out[3] = 0.0;
    for (std::size_t i = rank; i > 0; i -= i & (~i + 1)) {
      const double* t = &tree_[4 * i];
      out[0] += t[0];
      out[1] += t[1];
      out[2] += t[2];
      out[3] += t[3];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> tree_;
};

/// Fast univariate dCov^2 with x fixed and y re-paired by permutations.
class UnivariateDcov {
 public:
  UnivariateDcov(std::span<const double> x_in, std::span<const double> y_in) : n_(x_in.size()) {
    const std::vector<double> x = centered(x_in);
    y_ = centered(y_in);
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    xs_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) xs_[k] = x[order_[k]];
    a_rows_ = sorted_row_sums(xs_);
    a_total_ = std::accumulate(a_rows_.begin(), a_rows_.end(), 0.0);

    std::vector<std::size_t> yorder(n_);
    std::iota(yorder.begin(), yorder.end(), std::size_t{0});
    std::stable_sort(yorder.begin(), yorder.end(), [&](std::size_t i, std::size_t j) { return y_[i] < y_[j]; });
    std::vector<double> ys(n_);
    for (std::size_t k = 0; k < n_; ++k) ys[k] = y_[yorder[k]];
    const std::vector<double> b_sorted = sorted_row_sums(ys);
    b_rows_.resize(n_);
    y_rank_.resize(n_);
    std::size_t rank = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (k > 0 && ys[k] != ys[k - 1]) ++rank;
      y_rank_[yorder[k]] = rank;
      b_rows_[yorder[k]] = b_sorted[k];
    }
    n_ranks_ = rank + 1;
    b_total_ = std::accumulate(b_rows_.begin(), b_rows_.end(), 0.0);
  }

  /// dCov^2 of (x_i, y_perm(i)); identity when perm is empty.
  double operator()(std::span<const std::size_t> perm) const {
    Fenwick tree(n_ranks_);
    double cross = 0.0;
    double rows = 0.0;
    double sum_y = 0.0, sum_x = 0.0, sum_xy = 0.0;
    double below[4], upto[4];
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i = order_[k];
      const std::size_t j = perm.empty() ? i : perm[i];
      const double xi = xs_[k];
      const double yi = y_[j];
      const std::size_t rank = y_rank_[j];
      tree.prefix(rank, below);
      tree.prefix(rank + 1, upto);
      // Signed sums over earlier points: +1 where y_j < y_i, -1 where y_j > y_i.
      const double s1 = below[0] - (static_cast<double>(k) - upto[0]);
      const double sy = below[1] - (sum_y - upto[1]);
      const double sx = below[2] - (sum_x - upto[2]);
      const double sxy = below[3] - (sum_xy - upto[3]);
      cross += xi * yi * s1 - xi * sy - yi * sx + sxy;
      tree.add(rank, xi, yi);
      sum_y += yi;
      sum_x += xi;
      sum_xy += xi * yi;
      rows += a_rows_[k] * b_rows_[j];
    }
    const double n = static_cast<double>(n_);
    return 2.0 * cross / (n * n) - 2.0 * rows / (n * n * n) + a_total_ * b_total_ / (n * n * n * n);
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> y_;
  std::vector<std::size_t> order_;
  std::vector<double> xs_;
  std::vector<double> a_rows_;
  double a_total_ = 0.0;
  std::vector<double> b_rows_;
  std::vector<std::size_t> y_rank_;
  std::size_t n_ranks_ = 0;
  double b_total_ = 0.0;
};

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (x.row(i) - x.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

Eigen::MatrixXd double_centered(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d = pairwise_distances(x);
  const Eigen::VectorXd row_mean = d.rowwise().mean();
  const double grand = row_mean.mean();
  d.colwise() -= row_mean;
  d.rowwise() -= row_mean.transpose();
  d.array() += grand;
  return d;
}

double permuted_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::span<const std::size_t> perm) {
  const Eigen::Index n = a.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto pi = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]);
    const double* acol = a.col(i).data();
    const double* bcol = b.col(pi).data();
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) s += acol[j] * bcol[perm[static_cast<std::size_t>(j)]];
    total += s;
  }
  return total / static_cast<double>(n * n);
}

std::vector<double> column(const SampleBatch& b) {
  const Eigen::VectorXd c = b.coords().col(0);
  return {c.data(), c.data() + c.size()};
}

bool univariate(const SampleBatch& u, const SampleBatch& v) { return u.coord_dim() == 1 && v.coord_dim() == 1; }

std::vector<double> permutation_null(std::size_t permutations, std::size_t n, RngStream& rng, unsigned threads,
                                     const std::function<double(std::span<const std::size_t>)>& statistic) {
  const std::uint64_t base = rng();
  std::vector<double> null(permutations);
  parallel_for(permutations, threads, [&](std::size_t b) {
    RngStream stream(base, b);
    const std::vector<std::size_t> perm = random_permutation(n, stream);
    null[b] = statistic(perm);
  });
  return null;
}

/// Within-group unordered pair sums for a pooled sample sorted ascending.
void sorted_within_sums(const std::vector<double>& z, std::span<const unsigned char> label, double& w0, double& w1) {
  double cnt[2] = {0.0, 0.0}, sum[2] = {0.0, 0.0}, w[2] = {0.0, 0.0};
  for (std::size_t k = 0; k < z.size(); ++k) {
    const int g = label[k];
    w[g] += z[k] * cnt[g] - sum[g];
    cnt[g] += 1.0;
    sum[g] += z[k];
  }
  w0 = w[0];
  w1 = w[1];
}

double energy_from_sums(double w0, double w1, double total, double n, double m) {
  const double cross = total - w0 - w1;
  const double e = 2.0 * cross / (n * m) - 2.0 * w0 / (n * n) - 2.0 * w1 / (m * m);
  return n * m / (n + m) * e;
}

class EnergyUnivariate {
 public:
  EnergyUnivariate(const SampleBatch& a, const SampleBatch& b) : n_(a.size()), m_(b.size()) {
    std::vector<std::pair<double, unsigned char>> pooled;
    pooled.reserve(n_ + m_);
    for (std::size_t i = 0; i < n_; ++i) pooled.emplace_back(a.coords()(static_cast<Eigen::Index>(i), 0), 0);
    for (std::size_t i = 0; i < m_; ++i) pooled.emplace_back(b.coords()(static_cast<Eigen::Index>(i), 0), 1);
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const auto& p, const auto& q) { return p.first < q.first; });
    z_.reserve(pooled.size());
    label_.reserve(pooled.size());
    for (const auto& [v, l] : pooled) {
      z_.push_back(v);
      label_.push_back(l);
    }
    const std::vector<unsigned char> all(z_.size(), 0);
    double dummy = 0.0;
    sorted_within_sums(z_, all, total_, dummy);
  }

  double operator()(std::span<const std::size_t> perm) const {
    std::vector<unsigned char> relabel(label_.size());
    for (std::size_t k = 0; k < label_.size(); ++k) relabel[k] = perm.empty() ? label_[k] : label_[perm[k]];
    double w0 = 0.0, w1 = 0.0;
    sorted_within_sums(z_, relabel, w0, w1);
    return energy_from_sums(w0, w1, total_, static_cast<double>(n_), static_cast<double>(m_));
  }

  std::size_t pooled_size() const { return z_.size(); }

 private:
  std::size_t n_, m_;
  std::vector<double> z_;
  std::vector<unsigned char> label_;
  double total_ = 0.0;
};

class EnergyExact {
 public:
  EnergyExact(const SampleBatch& a, const SampleBatch& b) : n_(a.size()), m_(b.size()) {
    Eigen::MatrixXd pooled(static_cast<Eigen::Index>(n_ + m_), a.coord_dim());
    pooled << a.coords(), b.coords();
    d_ = pairwise_distances(pooled);
    total_ = 0.5 * d_.sum();
  }

  double operator()(std::span<const std::size_t> perm) const {
    const std::size_t big_n = n_ + m_;
    std::vector<unsigned char> label(big_n);
    for (std::size_t k = 0; k < big_n; ++k) {
      const std::size_t src = perm.empty() ? k : perm[k];
      label[k] = src < n_ ? 0 : 1;
    }
    double w[2] = {0.0, 0.0};
    for (std::size_t j = 0; j < big_n; ++j) {
      const double* col = d_.col(static_cast<Eigen::Index>(j)).data();
      const unsigned char g = label[j];
      double s = 0.0;
      for (std::size_t i = j + 1; i < big_n; ++i)
        if (label[i] == g) s += col[i];
      w[g] += s;
    }
    return energy_from_sums(w[0], w[1], total_, static_cast<double>(n_), static_cast<double>(m_));
  }

  std::size_t pooled_size() const { return n_ + m_; }

 private:
  std::size_t n_, m_;
  Eigen::MatrixXd d_;
  double total_ = 0.0;
};

}  // namespace

SampleBatch::SampleBatch(Eigen::MatrixXd coords, int matrix_dim, nlohmann::json manifest)
    : coords_(std::move(coords)), matrix_dim_(matrix_dim), manifest_(std::move(manifest)) {
  if (matrix_dim_ < 1) throw DimMismatch("SampleBatch: matrix dimension must be positive");
  if (coords_.cols() != static_cast<Eigen::Index>(SymMatrix::packed_size(matrix_dim_))) {
    throw DimMismatch("SampleBatch: coordinate width does not match matrix dimension");
  }
  if (!manifest_.is_object()) throw ConfigError("SampleBatch: manifest must be a JSON object");
}

SampleBatch SampleBatch::from_matrices(std::span<const SpdMatrix> draws, nlohmann::json manifest) {
  std::vector<SymMatrix> sym;
  sym.reserve(draws.size());
  for (const auto& d : draws) sym.push_back(d.sym());
  return from_sym(sym, std::move(manifest));
}

SampleBatch SampleBatch::from_sym(std::span<const SymMatrix> draws, nlohmann::json manifest) {
  if (draws.empty()) throw TooFewSamples("SampleBatch: empty batch");
  const int r = draws.front().dim();
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(draws.size()), static_cast<Eigen::Index>(SymMatrix::packed_size(r)));
  for (std::size_t i = 0; i < draws.size(); ++i) {
    require_same_dim(r, draws[i].dim(), "SampleBatch");
    coords.row(static_cast<Eigen::Index>(i)) = vectorize(draws[i]).transpose();
  }
  return {std::move(coords), r, std::move(manifest)};
}

SampleBatch SampleBatch::from_scalars(std::span<const double> draws, nlohmann::json manifest) {
  if (draws.empty()) throw TooFewSamples("SampleBatch: empty batch");
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(draws.size()), 1);
  for (std::size_t i = 0; i < draws.size(); ++i) coords(static_cast<Eigen::Index>(i), 0) = draws[i];
  return {std::move(coords), 1, std::move(manifest)};
}

bool SampleBatch::manifest_complete() const {
  return manifest_.contains("sampler") && manifest_.contains("seed") && manifest_.contains("params");
}

SymMatrix SampleBatch::matrix(std::size_t i) const {
  const Eigen::VectorXd row = coords_.row(static_cast<Eigen::Index>(i)).transpose();
  return devectorize(row, matrix_dim_);
}

nlohmann::json IndependenceReport::to_json() const {
  return {{"statistic", statistic}, {"value", value},  {"permutations", permutations},
          {"p_value", p_value},     {"level", level},  {"reject", reject()}};
}

double dcov2_fast(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimMismatch("dcov2_fast: samples differ in length");
  if (x.empty()) throw TooFewSamples("dcov2_fast: empty sample");
  return UnivariateDcov(x, y)({});
}

double dcov2_exact(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows()) throw DimMismatch("dcov2_exact: samples differ in length");
  if (x.rows() == 0) throw TooFewSamples("dcov2_exact: empty sample");
  const Eigen::MatrixXd a = double_centered(x);
  const Eigen::MatrixXd b = double_centered(y);
  return (a.array() * b.array()).sum() / static_cast<double>(x.rows() * x.rows());
}

namespace {

double dcor2_from(double xy, double xx, double yy) {
  const double denom = std::sqrt(xx * yy);
  return denom > 0.0 ? std::max(0.0, xy) / denom : 0.0;
}

}  // namespace

double dcor2(const SampleBatch& u, const SampleBatch& v) {
  if (u.size() != v.size()) throw DimMismatch("dcor2: batches differ in length");
  if (univariate(u, v)) {
    const auto x = column(u), y = column(v);
    return dcor2_from(dcov2_fast(x, y), dcov2_fast(x, x), dcov2_fast(y, y));
  }
  const Eigen::MatrixXd a = double_centered(u.coords());
  const Eigen::MatrixXd b = double_centered(v.coords());
  return dcor2_from((a.array() * b.array()).sum(), a.squaredNorm(), b.squaredNorm());
}

IndependenceReport distance_correlation(const SampleBatch& u, const SampleBatch& v, std::size_t permutations,
                                        RngStream& rng, double level, unsigned threads) {
  if (u.size() != v.size()) throw DimMismatch("distance_correlation: batches differ in length");
  require_samples(u.size(), "distance_correlation");
  require_permutations(permutations);
  const std::size_t n = u.size();

  IndependenceReport rep{"distance_correlation", 0.0, permutations, 1.0, level};
  if (univariate(u, v)) {
    const auto x = column(u), y = column(v);
    const UnivariateDcov stat(x, y);
    const double observed = stat({});
    rep.value = std::sqrt(dcor2_from(observed, dcov2_fast(x, x), dcov2_fast(y, y)));
    rep.p_value = p_value_of(observed, permutation_null(permutations, n, rng, threads, std::cref(stat)));
  } else {
    const Eigen::MatrixXd a = double_centered(u.coords());
    const Eigen::MatrixXd b = double_centered(v.coords());
    const double observed = (a.array() * b.array()).sum() / static_cast<double>(n * n);
    rep.value = std::sqrt(dcor2_from(observed, a.squaredNorm() / static_cast<double>(n * n),
                                     b.squaredNorm() / static_cast<double>(n * n)));
    auto stat = [&](std::span<const std::size_t> perm) { return permuted_inner(a, b, perm); };
    rep.p_value = p_value_of(observed, permutation_null(permutations, n, rng, threads, stat));
  }
  return rep;
}

double energy_statistic(const SampleBatch& a, const SampleBatch& b) {
  if (a.coord_dim() != b.coord_dim()) throw DimMismatch("energy_statistic: batches differ in dimension");
  if (univariate(a, b)) return EnergyUnivariate(a, b)({});
  return EnergyExact(a, b)({});
}

IndependenceReport energy_distance_test(const SampleBatch& a, const SampleBatch& b, std::size_t permutations,
                                        RngStream& rng, double level, unsigned threads) {
  if (a.coord_dim() != b.coord_dim()) throw DimMismatch("energy_distance_test: batches differ in dimension");
  require_samples(a.size(), "energy_distance_test");
  require_samples(b.size(), "energy_distance_test");
  require_permutations(permutations);

  IndependenceReport rep{"energy_distance", 0.0, permutations, 1.0, level};
  auto run = [&](const auto& stat) {
    rep.value = stat({});
    auto fn = [&](std::span<const std::size_t> perm) { return stat(perm); };
    rep.p_value = p_value_of(rep.value, permutation_null(permutations, stat.pooled_size(), rng, threads, fn));
  };
  if (univariate(a, b)) {
    run(EnergyUnivariate(a, b));
  } else {
    run(EnergyExact(a, b));
  }
  return rep;
}

double kolmogorov_q(double t) {
  if (!(t > 0.0)) return 1.0;
  if (t < 0.18) return 1.0;  // series converges slowly; Q(0.18) = 1 - 1e-15
  const double a2 = -2.0 * t * t;
  double fac = 2.0, sum = 0.0, previous = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = fac * std::exp(a2 * j * j);
    sum += term;
    if (std::abs(term) <= 1e-10 * previous || std::abs(term) <= 1e-16 * sum) break;
    fac = -fac;
    previous = std::abs(term);
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw TooFewSamples("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double en = std::sqrt(n * m / (n + m));
  return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw TooFewSamples("ks_one_sample: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double en = std::sqrt(n);
  return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

std::vector<std::size_t> random_permutation(std::size_t n, RngStream& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace mgig
