#pragma once

#include <Eigen/SparseCore>

#include "masl/wide_stencil.hpp"

namespace masl {

struct NewtonConfig {
  double step_tol = 5e-8;  // sup-norm of the Newton step
  int max_iter = 50;
};

struct NewtonReport {
  int iterations = 0;  // number of linear solves performed
  bool converged = false;
  std::vector<double> residual_norms;  // sup-norm of F before each step
  std::vector<double> step_norms;      // sup-norm of each step
};

// Sparse solve: preconditioned BiCGSTAB with a direct LU fallback. Throws if
// the relative residual stays above 1e-12 after one refinement pass.
Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A,
                             const Eigen::VectorXd& b);

// Solves the control-frozen linear problem at direction 0 with weight 1/2;
// cheap, and exact for affine data with zero source. Returns a full node
// vector with the boundary entries of boundary_values.
std::vector<double> initial_guess(const StencilTable& table,
                                  std::span<const double> f_nodes,
                                  std::span<const double> boundary_values);

// Semi-smooth Newton (policy iteration on the frozen linearizations) with
// full steps. u is the start iterate and is updated in place; its boundary
// entries are overwritten with boundary_values. Non-convergence within
// max_iter is reported, not thrown.
NewtonReport newton_solve(const StencilTable& table,
                          std::span<const double> f_nodes,
                          std::span<const double> boundary_values,
                          std::vector<double>& u, const NewtonConfig& config);

}  // namespace masl
