#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bionet/assembly.hpp"
#include "bionet/fields.hpp"
#include "bionet/mesh.hpp"
#include "bionet/solver.hpp"

namespace bionet {

/// Model constants, source parameters, and numerical controls.
struct ModelParams {
  double alpha = 0.75;  // metabolic coefficient
  double c2 = 1.0;      // squared activation parameter
  double d2 = 1e-1;     // squared diffusivity
  double eps = 1e-1;    // regularization of the metabolic weight
  double gamma = 1.25;  // metabolic exponent
  double r = 1e-1;      // isotropic background permeability
  double t_final = 1.0;
  double sigma = 500.0;              // source width
  Eigen::Vector2d x0{0.25, 0.25};    // source center
  double dt = 0.01;
  int n_div = 600;

  /// Throws std::invalid_argument on out-of-range values. The degenerate
  /// limits alpha = 0, c2 = 0, d2 = 0 are admitted; eps, gamma, r, dt,
  /// t_final, sigma must be strictly positive.
  void validate() const;
};

struct SimState {
  double time = 0.0;
  int step_index = 0;
  ScalarField pressure;
  TensorField conductivity;
};

struct SimRecord {
  double time = 0.0;
  double energy = 0.0;
  double increment_norm = 0.0;  // ||C^{n+1} - C^n||_{L2} / dt
  std::string snapshot;         // reference to an on-disk snapshot, if any
};

/// Zero-mean source S = E - Ebar with E(x) = exp(-sigma*|x - x0|^2); Ebar is
/// the quadrature average of the P1 interpolant of E, so the assembled load
/// of S sums to zero up to rounding.
ScalarField build_source(const TriMesh& mesh, double sigma,
                         const Eigen::Vector2d& x0);

/// Identity tensor at every node.
TensorField initial_conductivity(const TriMesh& mesh);

/// Weight (||C|| + eps)^(gamma-2) sampled at quadrature points; the tensor
/// components are interpolated first, then the Frobenius norm is taken
/// pointwise. The callable references mesh and C, which must stay alive
/// while it is in use.
QuadWeightFn metabolic_weight(const TriMesh& mesh, const TensorField& C,
                              double eps, double gamma);

/// Zero-mean pressure solving ((r I + C) grad p, grad q) = (S, q). The
/// source is either a nodal field or a function sampled at quadrature
/// points.
ScalarField solve_pressure(const TriMesh& mesh, const TensorField& C, double r,
                           const ScalarField& S, const SolverConfig& cfg = {},
                           const ScalarField* warm_start = nullptr);
ScalarField solve_pressure(const TriMesh& mesh, const TensorField& C, double r,
                           const PointFn& S, const SolverConfig& cfg = {},
                           const ScalarField* warm_start = nullptr);

/// One semi-implicit step: A = M + dt*D^2*K + dt*alpha*M_w with the
/// metabolic weight frozen at C_n, and for each tensor component
/// A c^{n+1} = M c^n + dt*c^2*load(g_a g_b) with g the element gradients of
/// p_n. The three component solves share the matrix A.
TensorField step_conductivity(const TriMesh& mesh, const TensorField& C_n,
                              const ScalarField& p_n, const ModelParams& params,
                              const SolverConfig& cfg = {});

/// Energy functional: int D^2/2 |grad C|^2 + c^2 grad p . (r I + C) grad p
///                      + alpha/gamma |C|^gamma.
/// The regularization eps is a device of the scheme and does not enter.
double compute_energy(const TriMesh& mesh, const TensorField& C,
                      const ScalarField& p, const ModelParams& params);

struct RunOptions {
  SolverConfig solver{};
  double steady_tol = 1e-8;  // on the relative increment norm
  int steady_window = 10;    // consecutive steps below steady_tol
  /// Invoked for the initial state and after every step; may attach a
  /// snapshot reference to the record.
  std::function<void(const TriMesh&, const SimState&, SimRecord&)> on_record;
  /// Replaces the built-in Gaussian source (testing hook).
  std::optional<ScalarField> source_override;
};

struct SimResult {
  TriMesh mesh;
  std::vector<SimRecord> records;  // records[0] is the initial state
  SimState final_state;
  bool reached_steady_state = false;
};

/// Partitioned time loop: p^0 from C^0, then C^{n+1} from (C^n, p^n) and
/// p^{n+1} from C^{n+1}. Stops at t_final or once the relative increment
/// norm stays below steady_tol for steady_window consecutive steps.
SimResult run_simulation(const ModelParams& params, const RunOptions& opts = {});

/// Step errors are rethrown with the failing stage and step index attached.
struct SimulationError : std::runtime_error {
  SimulationError(const std::string& what, int step)
      : std::runtime_error(what), step_index(step) {}
  int step_index;
};

}  // namespace bionet
