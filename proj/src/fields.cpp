#include "bionet/fields.hpp"

namespace bionet {

ScalarField frobenius_norm_field(const TensorField& C) {
  // Grouped so the value is invariant when c11 and c22 swap roles under the
  // mesh reflection.
  return ((C.c11.array().square() + C.c22.array().square()) +
          2.0 * C.c12.array().square())
      .sqrt();
}

ScalarField eigenvalue_gap_field(const TensorField& C) {
  // Eigenvalues of [[c11,c12],[c12,c22]] are m +- sqrt(d^2 + c12^2) with
  // m = (c11+c22)/2 and d = (c11-c22)/2.
  return 2.0 *
         ((0.5 * (C.c11 - C.c22)).array().square() + C.c12.array().square())
             .sqrt();
}

double min_nodal_eigenvalue(const TensorField& C) {
  const Eigen::ArrayXd mean = 0.5 * (C.c11 + C.c22).array();
  const Eigen::ArrayXd radius =
      ((0.5 * (C.c11 - C.c22)).array().square() + C.c12.array().square())
          .sqrt();
  return (mean - radius).minCoeff();
}

}  // namespace bionet
