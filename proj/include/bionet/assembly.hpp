#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>

#include "bionet/fields.hpp"
#include "bionet/mesh.hpp"
#include "bionet/quadrature.hpp"

namespace bionet {

/// Assembled Galerkin matrices in compressed-row storage. All assembly
/// routines produce bitwise-symmetric values.
using SparseSymMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Scalar weight sampled at a quadrature point: element index, barycentric
/// coordinates, physical position.
using QuadWeightFn =
    std::function<double(int, const Eigen::Vector3d&, const Eigen::Vector2d&)>;

/// Scalar function of the physical position.
using PointFn = std::function<double(const Eigen::Vector2d&)>;

/// Consistent P1 mass matrix; entries sum to |Omega| = 1.
SparseSymMatrix assemble_mass(const TriMesh& mesh);

/// Unit-coefficient stiffness matrix; annihilates constants, SPD on their
/// complement.
SparseSymMatrix assemble_stiffness(const TriMesh& mesh);

/// Stiffness matrix of the bilinear form with tensor coefficient r*I + C,
/// C interpolated from nodal values at the quadrature points.
SparseSymMatrix assemble_weighted_stiffness(const TriMesh& mesh,
                                            const TensorField& C, double r);

/// Mass matrix with scalar weight w sampled at quadrature points. Throws
/// std::domain_error when w evaluates to a non-finite value.
SparseSymMatrix assemble_weighted_mass(const TriMesh& mesh,
                                       const QuadWeightFn& w);

/// Load vector of int f * phi_k by quadrature.
Eigen::VectorXd assemble_load(const TriMesh& mesh, const PointFn& f);

/// Load vector of the P1 interpolant of nodal values.
Eigen::VectorXd assemble_load(const TriMesh& mesh, const ScalarField& f);

/// Load vector of the product g_a * g_b against P1 test functions, where g
/// is an element-wise constant 2-vector field (rows of `g`), a,b in {0,1}.
Eigen::VectorXd assemble_gradient_product_load(
    const TriMesh& mesh, const Eigen::Matrix<double, Eigen::Dynamic, 2>& g,
    int a, int b);

/// Exact gradient of the P1 interpolant on each element (one row per
/// element).
Eigen::Matrix<double, Eigen::Dynamic, 2> element_gradients(
    const TriMesh& mesh, const ScalarField& u);

/// Quadrature value of int f over Omega.
double integrate(const TriMesh& mesh, const PointFn& f);
double integrate(const TriMesh& mesh, const ScalarField& f);

/// L2 norm sqrt(u' M u) with M the consistent mass matrix (the quadrature
/// rule integrates P1 products exactly).
double l2_norm(const TriMesh& mesh, const ScalarField& u);

/// ||u - v|| / ||v||; throws std::domain_error when ||v|| == 0.
double relative_l2_error(const TriMesh& mesh, const ScalarField& u,
                         const ScalarField& v);

/// Tensor L2 norm with the Frobenius convention (c12 counted twice).
double tensor_l2_norm(const TriMesh& mesh, const TensorField& C);

}  // namespace bionet
