#include "bionet/quadrature.hpp"

namespace bionet {

const QuadratureRule& QuadratureRule::edge_midpoint() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.points.resize(3, 3);
    r.points << 0.5, 0.5, 0.0,
                0.0, 0.5, 0.5,
                0.5, 0.0, 0.5;
    r.weights = Eigen::Vector3d::Constant(1.0 / 3.0);
    r.degree = 2;
    return r;
  }();
  return rule;
}

}  // namespace bionet
