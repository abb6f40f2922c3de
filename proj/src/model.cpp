#include "bionet/model.hpp"

#include <cmath>
#include <stdexcept>

#include "bionet/stencil.hpp"

namespace bionet {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string("ModelParams: ") + name +
                                " must be positive");
  }
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0)) {
    throw std::invalid_argument(std::string("ModelParams: ") + name +
                                " must be nonnegative");
  }
}

LinearOperator reflection_aware_operator(const StencilMatrix& A) {
  LinearOperator op;
  op.size = A.rows();
  op.apply = [&A](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    A.apply(x, y);
  };
  op.diagonal = A.diagonal();
  op.dot = [n = A.n_div](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return reflection_invariant_dot(n, u, v);
  };
  return op;
}

// Shared by the public step_conductivity and the cached loop in
// run_simulation. The three component solves share the matrix and the
// Jacobi diagonal.
TensorField step_with_operators(const TriMesh& mesh, const StencilMatrix& M,
                                const StencilMatrix& K, const TensorField& C_n,
                                const ScalarField& p_n,
                                const ModelParams& params,
                                const SolverConfig& cfg) {
  const StencilMatrix Mw = stencil_weighted_mass(
      mesh, metabolic_weight(mesh, C_n, params.eps, params.gamma));
  const StencilMatrix A = stencil_combine(M, params.dt * params.d2, K,
                                          params.dt * params.alpha, Mw);
  const LinearOperator op = reflection_aware_operator(A);

  const Eigen::Matrix<double, Eigen::Dynamic, 2> grads =
      element_gradients(mesh, p_n);

  auto solve_component = [&](const Eigen::VectorXd& c, int a,
                             int b) -> Eigen::VectorXd {
    Eigen::VectorXd rhs = M * c;
    if (params.c2 != 0.0) {
      rhs += (params.dt * params.c2) *
             stencil_gradient_product_load(mesh, grads, a, b);
    }
    return cg_solve(op, rhs, cfg, nullptr, &c);
  };

  TensorField next;
  next.c11 = solve_component(C_n.c11, 0, 0);
  next.c12 = solve_component(C_n.c12, 0, 1);
  next.c22 = solve_component(C_n.c22, 1, 1);
  return next;
}

ScalarField pressure_with_load(const TriMesh& mesh, const TensorField& C,
                               double r, const Eigen::VectorXd& load,
                               const Eigen::VectorXd& lumped_mass,
                               const SolverConfig& cfg,
                               const ScalarField* warm_start) {
  const StencilMatrix Kw = stencil_weighted_stiffness(mesh, C, r);
  return solve_neumann_singular(reflection_aware_operator(Kw), load,
                                lumped_mass, cfg, nullptr, warm_start);
}

}  // namespace

void ModelParams::validate() const {
  require_nonnegative(alpha, "alpha");
  require_nonnegative(c2, "c2");
  require_nonnegative(d2, "d2");
  require_positive(eps, "eps");
  require_positive(gamma, "gamma");
  require_positive(r, "r");
  require_positive(t_final, "t_final");
  require_positive(sigma, "sigma");
  require_positive(dt, "dt");
  if (n_div < 1) {
    throw std::invalid_argument("ModelParams: n_div must be >= 1");
  }
  if (x0[0] < 0.0 || x0[0] > 1.0 || x0[1] < 0.0 || x0[1] > 1.0) {
    throw std::invalid_argument("ModelParams: x0 must lie in the unit square");
  }
}

ScalarField build_source(const TriMesh& mesh, double sigma,
                         const Eigen::Vector2d& x0) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("build_source: sigma must be positive");
  }
  if (x0[0] < 0.0 || x0[0] > 1.0 || x0[1] < 0.0 || x0[1] > 1.0) {
    throw std::invalid_argument("build_source: x0 must lie in the unit square");
  }
  ScalarField E(mesh.node_count());
  for (int k = 0; k < mesh.node_count(); ++k) {
    const double dx = mesh.nodes(k, 0) - x0[0];
    const double dy = mesh.nodes(k, 1) - x0[1];
    E[k] = std::exp(-sigma * (dx * dx + dy * dy));
  }
  // Average with the same quadrature used for loads; this is what makes the
  // assembled load of S sum to zero.
  const double measure = integrate(mesh, ScalarField::Ones(mesh.node_count()));
  const double mean = integrate(mesh, E) / measure;
  return E.array() - mean;
}

TensorField initial_conductivity(const TriMesh& mesh) {
  return TensorField::Identity(mesh.node_count());
}

QuadWeightFn metabolic_weight(const TriMesh& mesh, const TensorField& C,
                              double eps, double gamma) {
  return [&mesh, &C, eps, gamma](int e, const Eigen::Vector3d& bary,
                                 const Eigen::Vector2d&) {
    const int v[3] = {mesh.elements(e, 0), mesh.elements(e, 1),
                      mesh.elements(e, 2)};
    // Sums grouped to stay bitwise invariant under the mesh reflection
    // (the c11 and c22 roles swap there).
    const double c11 =
        bary[0] * C.c11[v[0]] + (bary[1] * C.c11[v[1]] + bary[2] * C.c11[v[2]]);
    const double c12 =
        bary[0] * C.c12[v[0]] + (bary[1] * C.c12[v[1]] + bary[2] * C.c12[v[2]]);
    const double c22 =
        bary[0] * C.c22[v[0]] + (bary[1] * C.c22[v[1]] + bary[2] * C.c22[v[2]]);
    const double norm = std::sqrt((c11 * c11 + c22 * c22) + 2.0 * (c12 * c12));
    return std::pow(norm + eps, gamma - 2.0);
  };
}

ScalarField solve_pressure(const TriMesh& mesh, const TensorField& C, double r,
                           const ScalarField& S, const SolverConfig& cfg,
                           const ScalarField* warm_start) {
  const StencilMatrix M = stencil_mass(mesh);
  return pressure_with_load(mesh, C, r, assemble_load(mesh, S),
                            M * Eigen::VectorXd::Ones(M.rows()), cfg,
                            warm_start);
}

ScalarField solve_pressure(const TriMesh& mesh, const TensorField& C, double r,
                           const PointFn& S, const SolverConfig& cfg,
                           const ScalarField* warm_start) {
  const StencilMatrix M = stencil_mass(mesh);
  return pressure_with_load(mesh, C, r, assemble_load(mesh, S),
                            M * Eigen::VectorXd::Ones(M.rows()), cfg,
                            warm_start);
}

TensorField step_conductivity(const TriMesh& mesh, const TensorField& C_n,
                              const ScalarField& p_n, const ModelParams& params,
                              const SolverConfig& cfg) {
  params.validate();
  const StencilMatrix M = stencil_mass(mesh);
  const StencilMatrix K = stencil_stiffness(mesh);
  return step_with_operators(mesh, M, K, C_n, p_n, params, cfg);
}

double compute_energy(const TriMesh& mesh, const TensorField& C,
                      const ScalarField& p, const ModelParams& params) {
  const QuadratureRule& rule = QuadratureRule::edge_midpoint();
  const auto g11 = element_gradients(mesh, C.c11);
  const auto g12 = element_gradients(mesh, C.c12);
  const auto g22 = element_gradients(mesh, C.c22);
  const auto gp = element_gradients(mesh, p);

  const double metabolic_factor = params.alpha / params.gamma;
  double energy = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const int v[3] = {mesh.elements(e, 0), mesh.elements(e, 1),
                      mesh.elements(e, 2)};
    const Eigen::Vector2d p0 = mesh.nodes.row(v[0]);
    const Eigen::Vector2d p1 = mesh.nodes.row(v[1]);
    const Eigen::Vector2d p2 = mesh.nodes.row(v[2]);
    const double area =
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) -
               (p2[0] - p0[0]) * (p1[1] - p0[1]));

    // Gradients are element-wise constant, so the diffusion term is exact.
    const double grad_sq = (g11.row(e).squaredNorm() +
                            g22.row(e).squaredNorm()) +
                           2.0 * g12.row(e).squaredNorm();
    energy += area * 0.5 * params.d2 * grad_sq;

    const double px = gp(e, 0);
    const double py = gp(e, 1);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector3d bary = rule.points.row(q);
      double c11 = 0.0, c12 = 0.0, c22 = 0.0;
      for (int i = 0; i < 3; ++i) {
        c11 += bary[i] * C.c11[v[i]];
        c12 += bary[i] * C.c12[v[i]];
        c22 += bary[i] * C.c22[v[i]];
      }
      const double wq = rule.weights[q] * area;
      const double activation =
          ((params.r + c11) * px * px + (params.r + c22) * py * py) +
          2.0 * c12 * px * py;
      energy += wq * params.c2 * activation;
      const double fro = std::sqrt((c11 * c11 + c22 * c22) + 2.0 * (c12 * c12));
      energy += wq * metabolic_factor * std::pow(fro, params.gamma);
    }
  }
  return energy;
}

SimResult run_simulation(const ModelParams& params, const RunOptions& opts) {
  params.validate();

  SimResult result;
  result.mesh = build_unit_square_mesh(params.n_div);
  const TriMesh& mesh = result.mesh;

  const StencilMatrix M = stencil_mass(mesh);
  const StencilMatrix K = stencil_stiffness(mesh);
  const Eigen::VectorXd lumped = M * Eigen::VectorXd::Ones(M.rows());
  const ScalarField S = opts.source_override
                            ? *opts.source_override
                            : build_source(mesh, params.sigma, params.x0);
  if (S.size() != mesh.node_count()) {
    throw std::invalid_argument(
        "run_simulation: source override does not match the mesh");
  }
  const Eigen::VectorXd load = assemble_load(mesh, S);

  TensorField C = initial_conductivity(mesh);
  ScalarField p;
  try {
    p = pressure_with_load(mesh, C, params.r, load, lumped, opts.solver,
                           nullptr);
  } catch (const std::exception& e) {
    throw SimulationError(
        std::string("run_simulation: initial pressure solve failed: ") +
            e.what(),
        0);
  }

  SimState state{0.0, 0, p, C};
  SimRecord record{0.0, compute_energy(mesh, C, p, params), 0.0, {}};
  if (opts.on_record) {
    opts.on_record(mesh, state, record);
  }
  result.records.push_back(record);

  const long long n_steps = std::llround(params.t_final / params.dt);
  int below_tolerance = 0;
  for (long long n = 0; n < n_steps; ++n) {
    TensorField C_next;
    ScalarField p_next;
    try {
      C_next = step_with_operators(mesh, M, K, C, p, params, opts.solver);
    } catch (const std::exception& e) {
      throw SimulationError("run_simulation: conductivity step " +
                                std::to_string(n) + " failed: " + e.what(),
                            static_cast<int>(n));
    }
    try {
      p_next = pressure_with_load(mesh, C_next, params.r, load, lumped,
                                  opts.solver, &p);
    } catch (const std::exception& e) {
      throw SimulationError("run_simulation: pressure solve at step " +
                                std::to_string(n) + " failed: " + e.what(),
                            static_cast<int>(n));
    }

    const double increment = tensor_l2_norm(mesh, C_next - C) / params.dt;
    C = std::move(C_next);
    p = std::move(p_next);

    state.time = static_cast<double>(n + 1) * params.dt;
    state.step_index = static_cast<int>(n + 1);
    state.pressure = p;
    state.conductivity = C;

    record = {state.time, compute_energy(mesh, C, p, params), increment, {}};
    if (opts.on_record) {
      opts.on_record(mesh, state, record);
    }
    result.records.push_back(record);

    const double scale = tensor_l2_norm(mesh, C);
    const double relative = increment / (scale > 0.0 ? scale : 1.0);
    below_tolerance = relative < opts.steady_tol ? below_tolerance + 1 : 0;
    if (below_tolerance >= opts.steady_window) {
      result.reached_steady_state = true;
      break;
    }
  }

  result.final_state = std::move(state);
  return result;
}

}  // namespace bionet
