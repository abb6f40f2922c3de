#include "bionet/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "bionet/stencil.hpp"
#include "element_kernels.hpp"

namespace bionet {

using detail::ElementGeometry;

SparseSymMatrix assemble_mass(const TriMesh& mesh) {
  return stencil_mass(mesh).to_sparse();
}

SparseSymMatrix assemble_stiffness(const TriMesh& mesh) {
  return stencil_stiffness(mesh).to_sparse();
}

SparseSymMatrix assemble_weighted_stiffness(const TriMesh& mesh,
                                            const TensorField& C, double r) {
  return stencil_weighted_stiffness(mesh, C, r).to_sparse();
}

SparseSymMatrix assemble_weighted_mass(const TriMesh& mesh,
                                       const QuadWeightFn& w) {
  return stencil_weighted_mass(mesh, w).to_sparse();
}

Eigen::VectorXd assemble_load(const TriMesh& mesh, const PointFn& f) {
  return stencil_load(mesh, f);
}

Eigen::VectorXd assemble_load(const TriMesh& mesh, const ScalarField& f) {
  return stencil_load(mesh, f);
}

Eigen::VectorXd assemble_gradient_product_load(
    const TriMesh& mesh, const Eigen::Matrix<double, Eigen::Dynamic, 2>& g,
    int a, int b) {
  return stencil_gradient_product_load(mesh, g, a, b);
}

Eigen::Matrix<double, Eigen::Dynamic, 2> element_gradients(
    const TriMesh& mesh, const ScalarField& u) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> grads(mesh.element_count(), 2);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementGeometry g = detail::element_geometry(mesh, e);
    const int v[3] = {mesh.elements(e, 0), mesh.elements(e, 1),
                      mesh.elements(e, 2)};
    // Grouped t0 + (t1 + t2): reflected elements accumulate the swapped pair
    // in the inner sum, keeping the gradients bitwise swap-equivariant.
    for (int axis = 0; axis < 2; ++axis) {
      grads(e, axis) = u[v[0]] * g.grad(0, axis) +
                       (u[v[1]] * g.grad(1, axis) + u[v[2]] * g.grad(2, axis));
    }
  }
  return grads;
}

double integrate(const TriMesh& mesh, const PointFn& f) {
  double sum = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementGeometry g = detail::element_geometry(mesh, e);
    sum += detail::quad_sum([&](int, const Eigen::Vector3d& bary, double w) {
      return w * g.area * f(detail::quad_point(g, bary));
    });
  }
  return sum;
}

double integrate(const TriMesh& mesh, const ScalarField& f) {
  double sum = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementGeometry g = detail::element_geometry(mesh, e);
    const int v[3] = {mesh.elements(e, 0), mesh.elements(e, 1),
                      mesh.elements(e, 2)};
    sum += detail::quad_sum([&](int, const Eigen::Vector3d& bary, double w) {
      return w * g.area * detail::interp3(bary, f[v[0]], f[v[1]], f[v[2]]);
    });
  }
  return sum;
}

double l2_norm(const TriMesh& mesh, const ScalarField& u) {
  double sum = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementGeometry g = detail::element_geometry(mesh, e);
    const int v[3] = {mesh.elements(e, 0), mesh.elements(e, 1),
                      mesh.elements(e, 2)};
    sum += detail::quad_sum([&](int, const Eigen::Vector3d& bary, double w) {
      const double uq = detail::interp3(bary, u[v[0]], u[v[1]], u[v[2]]);
      return w * g.area * uq * uq;
    });
  }
  return std::sqrt(sum);
}

double relative_l2_error(const TriMesh& mesh, const ScalarField& u,
                         const ScalarField& v) {
  const double denom = l2_norm(mesh, v);
  if (denom == 0.0) {
    throw std::domain_error("relative_l2_error: reference field has zero norm");
  }
  return l2_norm(mesh, u - v) / denom;
}

double tensor_l2_norm(const TriMesh& mesh, const TensorField& C) {
  const double n11 = l2_norm(mesh, C.c11);
  const double n12 = l2_norm(mesh, C.c12);
  const double n22 = l2_norm(mesh, C.c22);
  return std::sqrt((n11 * n11 + n22 * n22) + 2.0 * (n12 * n12));
}

}  // namespace bionet
