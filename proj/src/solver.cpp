#include "bionet/solver.hpp"

#include <cmath>

namespace bionet {

namespace {

void remove_mean(Eigen::VectorXd& v) {
  v.array() -= v.mean();
}

Eigen::VectorXd inverse_diagonal(const Eigen::VectorXd& diag) {
  Eigen::VectorXd inv(diag.size());
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    inv[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 1.0;
  }
  return inv;
}

// One PCG kernel serves both entry points; project_constants keeps the
// iteration inside the subspace orthogonal to the constant vector.
Eigen::VectorXd pcg(const LinearOperator& A, const Eigen::VectorXd& b,
                    const SolverConfig& cfg, CgReport* report,
                    const Eigen::VectorXd* initial_guess,
                    bool project_constants) {
  const Eigen::Index n = A.size;
  const int max_iterations =
      cfg.max_iterations > 0 ? cfg.max_iterations : 10 * static_cast<int>(n);
  const auto dot = A.dot ? A.dot
                         : [](const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v) { return u.dot(v); };
  const auto norm = [&](const Eigen::VectorXd& v) {
    return std::sqrt(dot(v, v));
  };

  Eigen::VectorXd x = initial_guess ? *initial_guess : Eigen::VectorXd::Zero(n);
  if (project_constants) {
    remove_mean(x);
  }

  Eigen::VectorXd rhs = b;
  if (project_constants) {
    remove_mean(rhs);
  }
  const double b_norm = norm(rhs);
  if (b_norm == 0.0) {
    if (report) {
      *report = {0, 0.0};
    }
    return Eigen::VectorXd::Zero(n);
  }

  Eigen::VectorXd r(n);
  A.apply(x, r);
  r = rhs - r;
  if (project_constants) {
    remove_mean(r);
  }
  double r_norm = norm(r);
  const double target = cfg.rel_tolerance * b_norm;
  if (r_norm <= target) {
    if (report) {
      *report = {0, r_norm / b_norm};
    }
    return x;
  }

  const bool jacobi = cfg.preconditioner == Preconditioner::Jacobi;
  Eigen::VectorXd inv_diag;
  if (jacobi) {
    inv_diag = inverse_diagonal(A.diagonal);
  }
  auto apply_preconditioner = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd z = jacobi ? (inv_diag.array() * v.array()).matrix() : v;
    if (project_constants) {
      remove_mean(z);
    }
    return z;
  };

  Eigen::VectorXd z = apply_preconditioner(r);
  Eigen::VectorXd p = z;
  double rz = dot(r, z);
  Eigen::VectorXd Ap(n);

  for (int it = 1; it <= max_iterations; ++it) {
    A.apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0) {
      throw IndefinitenessDetected(
          "cg: encountered p'Ap <= 0 at iteration " + std::to_string(it) +
          "; matrix is not positive definite");
    }
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    if (project_constants) {
      remove_mean(r);
    }
    r_norm = norm(r);
    if (r_norm <= target) {
      if (report) {
        *report = {it, r_norm / b_norm};
      }
      return x;
    }
    z = apply_preconditioner(r);
    const double rz_next = dot(r, z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw NonConvergence("cg: no convergence after " +
                       std::to_string(max_iterations) +
                       " iterations (relative residual " +
                       std::to_string(r_norm / b_norm) + ")");
}

}  // namespace

LinearOperator as_operator(const SparseSymMatrix& A) {
  LinearOperator op;
  op.size = A.rows();
  op.apply = [&A](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.noalias() = A * x;
  };
  op.diagonal = A.diagonal();
  return op;
}

Eigen::VectorXd cg_solve(const LinearOperator& A, const Eigen::VectorXd& b,
                         const SolverConfig& cfg, CgReport* report,
                         const Eigen::VectorXd* initial_guess) {
  return pcg(A, b, cfg, report, initial_guess, /*project_constants=*/false);
}

Eigen::VectorXd cg_solve(const SparseSymMatrix& A, const Eigen::VectorXd& b,
                         const SolverConfig& cfg, CgReport* report,
                         const Eigen::VectorXd* initial_guess) {
  return pcg(as_operator(A), b, cfg, report, initial_guess,
             /*project_constants=*/false);
}

Eigen::VectorXd solve_neumann_singular(const LinearOperator& K,
                                       const Eigen::VectorXd& b,
                                       const Eigen::VectorXd& lumped_mass,
                                       const SolverConfig& cfg,
                                       CgReport* report,
                                       const Eigen::VectorXd* initial_guess) {
  const double sum = b.sum();
  const double b_norm = b.norm();
  if (std::abs(sum) > 1e-10 * b_norm) {
    throw IncompatibleRhs(
        "solve_neumann_singular: right-hand side mean " + std::to_string(sum) +
        " exceeds the compatibility threshold 1e-10 * ||b||; the source must "
        "have zero integral");
  }

  Eigen::VectorXd x =
      pcg(K, b, cfg, report, initial_guess, /*project_constants=*/true);

  // Enforce the null-mean condition int x = 0 in the M-weighted sense.
  x.array() -= lumped_mass.dot(x) / lumped_mass.sum();
  return x;
}

Eigen::VectorXd solve_neumann_singular(const SparseSymMatrix& K,
                                       const Eigen::VectorXd& b,
                                       const SparseSymMatrix& M,
                                       const SolverConfig& cfg,
                                       CgReport* report,
                                       const Eigen::VectorXd* initial_guess) {
  const Eigen::VectorXd lumped = M * Eigen::VectorXd::Ones(M.rows());
  return solve_neumann_singular(as_operator(K), b, lumped, cfg, report,
                                initial_guess);
}

}  // namespace bionet
