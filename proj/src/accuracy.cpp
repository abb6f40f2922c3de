#include "bionet/accuracy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bionet {

namespace {

struct LevelRun {
  TriMesh mesh;
  ScalarField c_norm;  // Frobenius norm of C at final time
};

LevelRun run_level(const ModelParams& base, int n_div,
                   const SolverConfig& cfg) {
  ModelParams params = base;
  params.n_div = n_div;
  params.dt = 1.0 / n_div;  // the study couples dt = h
  RunOptions opts;
  opts.solver = cfg;
  opts.steady_tol = 0.0;  // always integrate to t_final
  SimResult result = run_simulation(params, opts);
  return {std::move(result.mesh),
          frobenius_norm_field(result.final_state.conductivity)};
}

}  // namespace

std::vector<ConvergenceRow> richardson_study(
    const ModelParams& base, const std::vector<int>& n_divs,
    const SolverConfig& cfg,
    const std::function<void(const ConvergenceRow&)>& on_row) {
  if (n_divs.size() < 2) {
    throw std::invalid_argument(
        "richardson_study: need at least two mesh levels");
  }
  for (std::size_t i = 1; i < n_divs.size(); ++i) {
    if (n_divs[i] != 2 * n_divs[i - 1]) {
      throw std::invalid_argument(
          "richardson_study: mesh sizes must be nested by factors of 2");
    }
  }

  std::vector<ConvergenceRow> rows;
  LevelRun coarse = run_level(base, n_divs[0], cfg);
  for (std::size_t i = 1; i < n_divs.size(); ++i) {
    LevelRun fine = run_level(base, n_divs[i], cfg);

    const std::vector<int> inject = coarse_to_fine_injection(coarse.mesh,
                                                             fine.mesh);
    ScalarField reference(coarse.mesh.node_count());
    for (int k = 0; k < coarse.mesh.node_count(); ++k) {
      reference[k] = fine.c_norm[inject[k]];
    }

    ConvergenceRow row;
    row.h = coarse.mesh.h();
    row.error = relative_l2_error(coarse.mesh, coarse.c_norm, reference);
    row.order = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                             : std::log2(rows.back().error / row.error);
    rows.push_back(row);
    if (on_row) {
      on_row(row);
    }
    coarse = std::move(fine);
  }
  return rows;
}

}  // namespace bionet
