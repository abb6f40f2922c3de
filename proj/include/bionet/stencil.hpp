#pragma once

#include <Eigen/Core>

#include "bionet/assembly.hpp"
#include "bionet/fields.hpp"
#include "bionet/mesh.hpp"

namespace bionet {

/// P1 Galerkin operators on the structured mesh stored as a 7-point nodal
/// stencil (neighbors SW, S, W, center, E, N, NE in lexicographic node
/// order). The assembly kernels and the matrix-vector product group every
/// floating-point sum so that the swap (x,y) -> (y,x) of the operands
/// produces bitwise-identical results. With symmetric data the discrete
/// reflection symmetry of the coupled problem is then exact in floating
/// point, which is what keeps long pattern-forming runs from amplifying
/// rounding-level asymmetries.
struct StencilMatrix {
  enum Direction { SW = 0, S = 1, W = 2, C = 3, E = 4, N = 5, NE = 6 };

  int n_div = 0;
  // One row per node, one column per direction; absent neighbors hold 0.
  Eigen::Matrix<double, Eigen::Dynamic, 7> coef;

  Eigen::Index rows() const { return coef.rows(); }
  Eigen::VectorXd diagonal() const { return coef.col(C); }

  /// y = A x with reflection-paired summation.
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;

  /// Row-compressed view with the mesh adjacency pattern.
  SparseSymMatrix to_sparse() const;
};

StencilMatrix stencil_mass(const TriMesh& mesh);
StencilMatrix stencil_stiffness(const TriMesh& mesh);
StencilMatrix stencil_weighted_stiffness(const TriMesh& mesh,
                                         const TensorField& C, double r);
StencilMatrix stencil_weighted_mass(const TriMesh& mesh, const QuadWeightFn& w);

/// a + alpha*b + beta*c, entrywise per stencil slot.
StencilMatrix stencil_combine(const StencilMatrix& a, double alpha,
                              const StencilMatrix& b, double beta,
                              const StencilMatrix& c);

/// Load vectors with reflection-paired accumulation; these back the
/// assemble_load family.
Eigen::VectorXd stencil_load(const TriMesh& mesh, const PointFn& f);
Eigen::VectorXd stencil_load(const TriMesh& mesh, const ScalarField& f);
Eigen::VectorXd stencil_gradient_product_load(
    const TriMesh& mesh, const Eigen::Matrix<double, Eigen::Dynamic, 2>& g,
    int a, int b);

/// Dot product summed over reflection orbits, so that permuting both
/// arguments by the reflection gives the bitwise-identical value. Used by
/// the conductivity solves to keep the c11 and c22 iterations exact mirror
/// images of each other.
double reflection_invariant_dot(int n_div, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& v);

}  // namespace bionet
