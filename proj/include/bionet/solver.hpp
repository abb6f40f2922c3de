#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "bionet/assembly.hpp"

namespace bionet {

enum class Preconditioner { None, Jacobi };

struct SolverConfig {
  double rel_tolerance = 1e-10;
  int max_iterations = 0;  // 0 selects 10 * unknowns
  Preconditioner preconditioner = Preconditioner::Jacobi;
};

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The iteration limit was reached before the residual target.
struct NonConvergence : SolverError {
  using SolverError::SolverError;
};

/// A search direction with p'Ap <= 0 was encountered; for the pressure
/// system this signals that r*I + C lost positive definiteness.
struct IndefinitenessDetected : SolverError {
  using SolverError::SolverError;
};

/// The right-hand side has a nonzero mean beyond the compatibility
/// threshold, so the pure-Neumann problem is unsolvable.
struct IncompatibleRhs : SolverError {
  using SolverError::SolverError;
};

/// Abstract SPD operator for the CG kernel. `dot`, when set, replaces the
/// Euclidean inner product (the simulation passes a reflection-invariant
/// one so that mirrored solves stay bitwise mirrored).
struct LinearOperator {
  Eigen::Index size = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> apply;
  Eigen::VectorXd diagonal;  // used by the Jacobi preconditioner
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> dot;
};

LinearOperator as_operator(const SparseSymMatrix& A);

/// Preconditioned conjugate gradients for SPD systems. Stops when
/// ||Ax - b|| <= rel_tolerance * ||b||; a zero right-hand side returns the
/// zero vector in zero iterations.
Eigen::VectorXd cg_solve(const LinearOperator& A, const Eigen::VectorXd& b,
                         const SolverConfig& cfg = {},
                         CgReport* report = nullptr,
                         const Eigen::VectorXd* initial_guess = nullptr);
Eigen::VectorXd cg_solve(const SparseSymMatrix& A, const Eigen::VectorXd& b,
                         const SolverConfig& cfg = {},
                         CgReport* report = nullptr,
                         const Eigen::VectorXd* initial_guess = nullptr);

/// Solves the singular pure-Neumann system K x = b (null space = constants)
/// by projecting the constant mode out of the initial guess and every
/// residual, then subtracting the weighted mean so that the discrete
/// integral of x vanishes (`lumped_mass` = M * 1). Requires
/// |1'b| <= 1e-10 * ||b||; throws IncompatibleRhs otherwise.
Eigen::VectorXd solve_neumann_singular(
    const LinearOperator& K, const Eigen::VectorXd& b,
    const Eigen::VectorXd& lumped_mass, const SolverConfig& cfg = {},
    CgReport* report = nullptr, const Eigen::VectorXd* initial_guess = nullptr);
Eigen::VectorXd solve_neumann_singular(
    const SparseSymMatrix& K, const Eigen::VectorXd& b,
    const SparseSymMatrix& M, const SolverConfig& cfg = {},
    CgReport* report = nullptr, const Eigen::VectorXd* initial_guess = nullptr);

}  // namespace bionet
