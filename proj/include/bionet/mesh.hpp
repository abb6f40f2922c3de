#pragma once

#include <Eigen/Core>

#include <vector>

namespace bionet {

/// Uniform triangulation of the unit square [0,1]^2 with n_div subdivisions
/// per side (mesh size h = 1/n_div). Every grid cell is split along its
/// SW-NE diagonal, which makes the triangulation exactly invariant under the
/// reflection (x,y) -> (y,x). Nodes are numbered lexicographically by (i,j),
/// node (i,j) at index j*(n_div+1)+i. Immutable after construction.
struct TriMesh {
  int n_div = 0;
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodes;  // (n_div+1)^2 rows
  Eigen::Matrix<int, Eigen::Dynamic, 3> elements;  // 2*n_div^2 rows, CCW
  std::vector<int> boundary_nodes;

  double h() const { return 1.0 / n_div; }
  int node_count() const { return static_cast<int>(nodes.rows()); }
  int element_count() const { return static_cast<int>(elements.rows()); }
  int node_index(int i, int j) const { return j * (n_div + 1) + i; }
};

/// Builds the structured mesh; throws std::invalid_argument for n_div < 1.
TriMesh build_unit_square_mesh(int n_div);

/// Node permutation pi with coords(pi(k)) = swap(coords(k)). An involution;
/// nodes on the diagonal y = x are fixed points.
std::vector<int> reflection_permutation(const TriMesh& mesh);

/// Maps each coarse node to the fine node with bitwise-identical coordinates.
/// Requires fine.n_div == 2 * coarse.n_div; throws otherwise.
std::vector<int> coarse_to_fine_injection(const TriMesh& coarse,
                                          const TriMesh& fine);

}  // namespace bionet
