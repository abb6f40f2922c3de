#pragma once

#include <functional>
#include <vector>

#include "bionet/model.hpp"

namespace bionet {

/// One level of the Richardson study: the run at mesh size h compared
/// against the next-finer run on T_{h/2}. `order` is log2 of the ratio of
/// consecutive errors and is NaN on the first row.
struct ConvergenceRow {
  double h = 0.0;
  double error = 0.0;
  double order = 0.0;
};

/// Runs the simulation on each mesh in n_divs (each entry twice the
/// previous, dt = h = 1/n_div), restricts the final-time Frobenius norm of C
/// from each fine mesh to the coarser one by nodal injection, and reports
/// the relative L2 errors with observed orders. `on_row` is invoked as rows
/// complete.
std::vector<ConvergenceRow> richardson_study(
    const ModelParams& base, const std::vector<int>& n_divs,
    const SolverConfig& cfg = {},
    const std::function<void(const ConvergenceRow&)>& on_row = {});

}  // namespace bionet
