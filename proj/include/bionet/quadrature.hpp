#pragma once

#include <Eigen/Core>

namespace bionet {

/// Quadrature rule on the reference triangle in barycentric coordinates.
/// Weights are normalized to sum to 1, so the integral over a physical
/// triangle K is area(K) * sum_q w_q f(x_q).
struct QuadratureRule {
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;  // barycentric rows
  Eigen::VectorXd weights;
  int degree = 0;  // highest polynomial degree integrated exactly

  int size() const { return static_cast<int>(weights.size()); }

  /// 3-point rule at the edge midpoints, exact for polynomials of degree 2.
  /// This is the rule used by all assembly and energy integrals.
  static const QuadratureRule& edge_midpoint();
};

}  // namespace bionet
