#pragma once

#include <Eigen/Core>

namespace bionet {

/// Nodal coefficients of a continuous piecewise-linear scalar field.
using ScalarField = Eigen::VectorXd;

/// Nodal coefficients of a symmetric 2x2 tensor field. Only the three
/// independent components are stored; c21 == c12 by construction.
struct TensorField {
  Eigen::VectorXd c11, c12, c22;

  Eigen::Index size() const { return c11.size(); }

  static TensorField Zero(Eigen::Index n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
            Eigen::VectorXd::Zero(n)};
  }
  static TensorField Identity(Eigen::Index n) {
    return {Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n),
            Eigen::VectorXd::Ones(n)};
  }
};

inline TensorField operator-(const TensorField& a, const TensorField& b) {
  return {a.c11 - b.c11, a.c12 - b.c12, a.c22 - b.c22};
}

/// Nodal Frobenius norm sqrt(c11^2 + 2*c12^2 + c22^2); the off-diagonal
/// component counts twice because the full tensor has c21 == c12.
ScalarField frobenius_norm_field(const TensorField& C);

/// Nodal eigenvalue spread lambda_max - lambda_min of the symmetric tensor;
/// zero exactly where the tensor is isotropic.
ScalarField eigenvalue_gap_field(const TensorField& C);

/// Smallest nodal eigenvalue over the whole field. Negative values flag a
/// loss of positive semidefiniteness; reported as a diagnostic, never
/// clamped.
double min_nodal_eigenvalue(const TensorField& C);

}  // namespace bionet
