// Internal element-level kernels shared by the stencil and CSR assembly
// paths. Every sum is grouped so that reflecting the mesh across y = x
// produces bitwise-identical values: the edge-midpoint quadrature points
// pair as q0 <-> q2 with q1 fixed, and the local vertices of paired
// triangles as v0 <-> v0, v1 <-> v2. Sums are therefore grouped
// (q0 + q2) + q1 and t0 + (t1 + t2), and two-term pairs rely on the
// commutativity of floating-point addition.

#pragma once

#include <Eigen/Core>

#include "bionet/mesh.hpp"
#include "bionet/quadrature.hpp"

namespace bionet::detail {

struct ElementGeometry {
  Eigen::Vector2d p[3];
  double area;
  Eigen::Matrix<double, 3, 2> grad;  // row i: gradient of barycentric basis i
};

inline ElementGeometry element_geometry(const TriMesh& mesh, int e) {
  ElementGeometry g;
  for (int v = 0; v < 3; ++v) {
    g.p[v] = mesh.nodes.row(mesh.elements(e, v));
  }
  Eigen::Matrix2d jac;
  jac.col(0) = g.p[1] - g.p[0];
  jac.col(1) = g.p[2] - g.p[0];
  const double det = jac(0, 0) * jac(1, 1) - jac(0, 1) * jac(1, 0);
  g.area = 0.5 * det;
  const double inv_det = 1.0 / det;
  g.grad(1, 0) = jac(1, 1) * inv_det;
  g.grad(1, 1) = -jac(0, 1) * inv_det;
  g.grad(2, 0) = -jac(1, 0) * inv_det;
  g.grad(2, 1) = jac(0, 0) * inv_det;
  g.grad.row(0) = -g.grad.row(1) - g.grad.row(2);
  return g;
}

inline double interp3(const Eigen::Vector3d& bary, double c0, double c1,
                      double c2) {
  return bary[0] * c0 + (bary[1] * c1 + bary[2] * c2);
}

inline Eigen::Vector2d quad_point(const ElementGeometry& g,
                                  const Eigen::Vector3d& bary) {
  return {interp3(bary, g.p[0][0], g.p[1][0], g.p[2][0]),
          interp3(bary, g.p[0][1], g.p[1][1], g.p[2][1])};
}

// x' P y with P = [[p11,p12],[p12,p22]]; invariant under both x <-> y and
// the simultaneous swap (p11 <-> p22, components of x and y).
inline double sym_quadratic(double p11, double p12, double p22,
                            const Eigen::Vector2d& x,
                            const Eigen::Vector2d& y) {
  return (p11 * (x[0] * y[0]) + p22 * (x[1] * y[1])) +
         p12 * (x[0] * y[1] + x[1] * y[0]);
}

// (f(q0) + f(q2)) + f(q1) over the edge-midpoint rule, for any summand
// type with entrywise +. The sum is materialized into the summand type so
// no Eigen expression outlives the per-point temporaries.
template <class F>
auto quad_sum(F&& per_point) {
  const QuadratureRule& rule = QuadratureRule::edge_midpoint();
  auto t0 = per_point(0, Eigen::Vector3d(rule.points.row(0)), rule.weights[0]);
  auto t1 = per_point(1, Eigen::Vector3d(rule.points.row(1)), rule.weights[1]);
  auto t2 = per_point(2, Eigen::Vector3d(rule.points.row(2)), rule.weights[2]);
  decltype(t0) sum = (t0 + t2) + t1;
  return sum;
}

inline Eigen::Matrix3d local_mass(const ElementGeometry& g) {
  return quad_sum([&](int, const Eigen::Vector3d& bary,
                      double w) -> Eigen::Matrix3d {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        m(i, j) = (w * g.area) * (bary[i] * bary[j]);
      }
    }
    return m;
  });
}

inline Eigen::Matrix3d local_stiffness(const ElementGeometry& g) {
  Eigen::Matrix3d k;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      k(i, j) = g.area *
                (g.grad(i, 0) * g.grad(j, 0) + g.grad(i, 1) * g.grad(j, 1));
    }
  }
  return k;
}

// Coefficients (p11, p12, p22) supplied per quadrature point.
template <class CoefFn>
Eigen::Matrix3d local_weighted_stiffness(const ElementGeometry& g,
                                         CoefFn&& coef) {
  return quad_sum([&](int q, const Eigen::Vector3d& bary,
                      double w) -> Eigen::Matrix3d {
    const auto [p11, p12, p22] = coef(q, bary);
    Eigen::Matrix3d k;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        k(i, j) = (w * g.area) * sym_quadratic(p11, p12, p22, g.grad.row(i),
                                               g.grad.row(j));
      }
    }
    return k;
  });
}

template <class WeightFn>
Eigen::Matrix3d local_weighted_mass(const ElementGeometry& g,
                                    WeightFn&& weight) {
  return quad_sum([&](int q, const Eigen::Vector3d& bary,
                      double w) -> Eigen::Matrix3d {
    const double wval = weight(q, bary);
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        m(i, j) = (w * g.area * wval) * (bary[i] * bary[j]);
      }
    }
    return m;
  });
}

// Load contributions per local vertex, values supplied per quadrature point.
template <class ValueFn>
Eigen::Vector3d local_load(const ElementGeometry& g, ValueFn&& value) {
  return quad_sum([&](int q, const Eigen::Vector3d& bary,
                      double w) -> Eigen::Vector3d {
    const double v = value(q, bary);
    return Eigen::Vector3d((w * g.area * v) * bary[0],
                           (w * g.area * v) * bary[1],
                           (w * g.area * v) * bary[2]);
  });
}

}  // namespace bionet::detail
