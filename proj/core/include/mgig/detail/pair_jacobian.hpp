#pragma once

#include "mgig/maps.hpp"

namespace mgig {

template <class Map>
double pair_map_jacobian_fd(Map&& map, const SpdPair& xy, double h_step) {
  const int r = xy.dim();
  const Eigen::Index m = static_cast<Eigen::Index>(SymMatrix::packed_size(r));
  Eigen::VectorXd base(2 * m);
  base << vectorize(xy.first.sym()), vectorize(xy.second.sym());

  auto evaluate = [&](const Eigen::VectorXd& coords) {
    const SpdPair in(SpdMatrix(devectorize(coords.head(m), r)), SpdMatrix(devectorize(coords.tail(m), r)));
    const auto out = map(in);
    Eigen::VectorXd v(2 * m);
    v << vectorize(SymMatrix::from_dense(out.first)), vectorize(SymMatrix::from_dense(out.second));
    return v;
  };

  Eigen::MatrixXd jac(2 * m, 2 * m);
  for (Eigen::Index k = 0; k < 2 * m; ++k) {
    Eigen::VectorXd plus = base;
    Eigen::VectorXd minus = base;
    plus(k) += h_step;
    minus(k) -= h_step;
    jac.col(k) = (evaluate(plus) - evaluate(minus)) / (2.0 * h_step);
  }
  return std::abs(jac.partialPivLu().determinant());
}

}  // namespace mgig
