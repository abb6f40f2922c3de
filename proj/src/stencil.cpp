#include "bionet/stencil.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "element_kernels.hpp"

namespace bionet {

namespace {

using detail::ElementGeometry;

// Diagonal and load contributions are gathered per (triangle type, local
// vertex) role, each written by at most one element, and reduced with the
// reflection pairing (T1,v0)<->(T2,v0), (T1,v1)<->(T2,v2), (T1,v2)<->(T2,v1).
struct RoleSlots {
  Eigen::Matrix<double, Eigen::Dynamic, 6> values;

  explicit RoleSlots(Eigen::Index n) : values(Eigen::MatrixXd::Zero(n, 6)) {}

  void add(int node, int element, int local_vertex, double value) {
    values(node, (element & 1) * 3 + local_vertex) += value;
  }

  Eigen::VectorXd reduce() const {
    Eigen::VectorXd out(values.rows());
    for (Eigen::Index k = 0; k < values.rows(); ++k) {
      out[k] = ((values(k, 0) + values(k, 3)) +
                (values(k, 1) + values(k, 5))) +
               (values(k, 2) + values(k, 4));
    }
    return out;
  }
};

// Direction slot of the off-diagonal entry (row, col) from the node-index
// offset; row and col are always mesh neighbors here.
int direction_slot(int n_div, int row, int col) {
  const int stride = n_div + 1;
  const int diff = col - row;
  if (diff == -stride - 1) return StencilMatrix::SW;
  if (diff == -stride) return StencilMatrix::S;
  if (diff == -1) return StencilMatrix::W;
  if (diff == 1) return StencilMatrix::E;
  if (diff == stride) return StencilMatrix::N;
  if (diff == stride + 1) return StencilMatrix::NE;
  throw std::logic_error("direction_slot: nodes are not mesh neighbors");
}

template <class LocalFn>
StencilMatrix assemble_stencil(const TriMesh& mesh, LocalFn&& local_matrix) {
  StencilMatrix A;
  A.n_div = mesh.n_div;
  A.coef = Eigen::MatrixXd::Zero(mesh.node_count(), 7);
  RoleSlots diag(mesh.node_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Eigen::Matrix3d local = local_matrix(e);
    const int v[3] = {mesh.elements(e, 0), mesh.elements(e, 1),
                      mesh.elements(e, 2)};
    for (int i = 0; i < 3; ++i) {
      diag.add(v[i], e, i, local(i, i));
      for (int j = 0; j < 3; ++j) {
        if (i != j) {
          A.coef(v[i], direction_slot(mesh.n_div, v[i], v[j])) += local(i, j);
        }
      }
    }
  }
  A.coef.col(StencilMatrix::C) = diag.reduce();
  return A;
}

template <class ValueFn>
Eigen::VectorXd assemble_stencil_load(const TriMesh& mesh, ValueFn&& value) {
  RoleSlots slots(mesh.node_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementGeometry g = detail::element_geometry(mesh, e);
    const Eigen::Vector3d local =
        detail::local_load(g, [&](int q, const Eigen::Vector3d& bary) {
          return value(e, g, q, bary);
        });
    for (int i = 0; i < 3; ++i) {
      slots.add(mesh.elements(e, i), e, i, local[i]);
    }
  }
  return slots.reduce();
}

}  // namespace

void StencilMatrix::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const int n = n_div;
  const int stride = n + 1;
  y.resize(coef.rows());
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const int k = j * stride + i;
      const double t_sw =
          (i > 0 && j > 0) ? coef(k, SW) * x[k - stride - 1] : 0.0;
      const double t_s = j > 0 ? coef(k, S) * x[k - stride] : 0.0;
      const double t_w = i > 0 ? coef(k, W) * x[k - 1] : 0.0;
      const double t_c = coef(k, C) * x[k];
      const double t_e = i < n ? coef(k, E) * x[k + 1] : 0.0;
      const double t_n = j < n ? coef(k, N) * x[k + stride] : 0.0;
      const double t_ne =
          (i < n && j < n) ? coef(k, NE) * x[k + stride + 1] : 0.0;
      y[k] = ((t_sw + (t_s + t_w)) + t_c) + ((t_e + t_n) + t_ne);
    }
  }
}

Eigen::VectorXd StencilMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  apply(x, y);
  return y;
}

SparseSymMatrix StencilMatrix::to_sparse() const {
  const int n = n_div;
  const int stride = n + 1;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(7 * coef.rows());
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const int k = j * stride + i;
      if (i > 0 && j > 0) triplets.emplace_back(k, k - stride - 1, coef(k, SW));
      if (j > 0) triplets.emplace_back(k, k - stride, coef(k, S));
      if (i > 0) triplets.emplace_back(k, k - 1, coef(k, W));
      triplets.emplace_back(k, k, coef(k, C));
      if (i < n) triplets.emplace_back(k, k + 1, coef(k, E));
      if (j < n) triplets.emplace_back(k, k + stride, coef(k, N));
      if (i < n && j < n) triplets.emplace_back(k, k + stride + 1, coef(k, NE));
    }
  }
  SparseSymMatrix A(coef.rows(), coef.rows());
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

StencilMatrix stencil_mass(const TriMesh& mesh) {
  return assemble_stencil(mesh, [&](int e) {
    return detail::local_mass(detail::element_geometry(mesh, e));
  });
}

StencilMatrix stencil_stiffness(const TriMesh& mesh) {
  return assemble_stencil(mesh, [&](int e) {
    return detail::local_stiffness(detail::element_geometry(mesh, e));
  });
}

StencilMatrix stencil_weighted_stiffness(const TriMesh& mesh,
                                         const TensorField& C, double r) {
  return assemble_stencil(mesh, [&](int e) {
    const ElementGeometry g = detail::element_geometry(mesh, e);
    const int v[3] = {mesh.elements(e, 0), mesh.elements(e, 1),
                      mesh.elements(e, 2)};
    return detail::local_weighted_stiffness(
        g, [&](int, const Eigen::Vector3d& bary) {
          const double p11 =
              r + detail::interp3(bary, C.c11[v[0]], C.c11[v[1]], C.c11[v[2]]);
          const double p12 =
              detail::interp3(bary, C.c12[v[0]], C.c12[v[1]], C.c12[v[2]]);
          const double p22 =
              r + detail::interp3(bary, C.c22[v[0]], C.c22[v[1]], C.c22[v[2]]);
          return std::tuple{p11, p12, p22};
        });
  });
}

StencilMatrix stencil_weighted_mass(const TriMesh& mesh,
                                    const QuadWeightFn& w) {
  return assemble_stencil(mesh, [&](int e) {
    const ElementGeometry g = detail::element_geometry(mesh, e);
    return detail::local_weighted_mass(
        g, [&](int, const Eigen::Vector3d& bary) {
          const double wval = w(e, bary, detail::quad_point(g, bary));
          if (!std::isfinite(wval)) {
            throw std::domain_error(
                "assemble_weighted_mass: non-finite weight at a quadrature "
                "point");
          }
          return wval;
        });
  });
}

StencilMatrix stencil_combine(const StencilMatrix& a, double alpha,
                              const StencilMatrix& b, double beta,
                              const StencilMatrix& c) {
  StencilMatrix out;
  out.n_div = a.n_div;
  out.coef = a.coef + alpha * b.coef + beta * c.coef;
  return out;
}

Eigen::VectorXd stencil_load(const TriMesh& mesh, const PointFn& f) {
  return assemble_stencil_load(mesh, [&](int, const ElementGeometry& g, int,
                                         const Eigen::Vector3d& bary) {
    return f(detail::quad_point(g, bary));
  });
}

Eigen::VectorXd stencil_load(const TriMesh& mesh, const ScalarField& f) {
  return assemble_stencil_load(
      mesh, [&](int e, const ElementGeometry&, int, const Eigen::Vector3d& bary) {
        return detail::interp3(bary, f[mesh.elements(e, 0)],
                               f[mesh.elements(e, 1)], f[mesh.elements(e, 2)]);
      });
}

Eigen::VectorXd stencil_gradient_product_load(
    const TriMesh& mesh, const Eigen::Matrix<double, Eigen::Dynamic, 2>& g,
    int a, int b) {
  return assemble_stencil_load(
      mesh, [&](int e, const ElementGeometry&, int, const Eigen::Vector3d&) {
        return g(e, a) * g(e, b);
      });
}

double reflection_invariant_dot(int n_div, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& v) {
  const int stride = n_div + 1;
  double sum = 0.0;
  for (int j = 0; j <= n_div; ++j) {
    const int diag = j * stride + j;
    sum += u[diag] * v[diag];
    for (int i = 0; i < j; ++i) {
      const int a = j * stride + i;
      const int b = i * stride + j;
      sum += u[a] * v[a] + u[b] * v[b];
    }
  }
  return sum;
}

}  // namespace bionet
