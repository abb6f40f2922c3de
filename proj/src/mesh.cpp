#include "bionet/mesh.hpp"

#include <stdexcept>

namespace bionet {

TriMesh build_unit_square_mesh(int n_div) {
  if (n_div < 1) {
    throw std::invalid_argument("build_unit_square_mesh: n_div must be >= 1");
  }
  TriMesh mesh;
  mesh.n_div = n_div;
  const int n = n_div;
  const double h = 1.0 / n;

  mesh.nodes.resize((n + 1) * (n + 1), 2);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const int k = mesh.node_index(i, j);
      mesh.nodes(k, 0) = i * h;
      mesh.nodes(k, 1) = j * h;
      if (i == 0 || i == n || j == 0 || j == n) {
        mesh.boundary_nodes.push_back(k);
      }
    }
  }

  mesh.elements.resize(2 * n * n, 3);
  int e = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int sw = mesh.node_index(i, j);
      const int se = mesh.node_index(i + 1, j);
      const int ne = mesh.node_index(i + 1, j + 1);
      const int nw = mesh.node_index(i, j + 1);
      mesh.elements.row(e++) << sw, se, ne;
      mesh.elements.row(e++) << sw, ne, nw;
    }
  }
  return mesh;
}

std::vector<int> reflection_permutation(const TriMesh& mesh) {
  const int n = mesh.n_div;
  std::vector<int> perm(mesh.node_count());
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      perm[mesh.node_index(i, j)] = mesh.node_index(j, i);
    }
  }
  return perm;
}

std::vector<int> coarse_to_fine_injection(const TriMesh& coarse,
                                          const TriMesh& fine) {
  if (fine.n_div != 2 * coarse.n_div) {
    throw std::invalid_argument(
        "coarse_to_fine_injection: meshes are not nested "
        "(fine.n_div must equal 2 * coarse.n_div)");
  }
  const int nc = coarse.n_div;
  std::vector<int> map(coarse.node_count());
  for (int j = 0; j <= nc; ++j) {
    for (int i = 0; i <= nc; ++i) {
      map[coarse.node_index(i, j)] = fine.node_index(2 * i, 2 * j);
    }
  }
  return map;
}

}  // namespace bionet
