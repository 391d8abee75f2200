#include "masl/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <stdexcept>

namespace masl {

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A,
                             const Eigen::VectorXd& b) {
  double bn = b.lpNorm<Eigen::Infinity>();
  Eigen::VectorXd x;
  auto relres = [&]() {
    return (A * x - b).lpNorm<Eigen::Infinity>() / std::max(bn, 1e-300);
  };
  // The long-range stencil couplings defeat fill-reducing orderings, making
  // direct factorization very slow on fine meshes, while the same systems are
  // diagonally dominant M-matrices with an O(1/k^2) condition number, ideal
  // for a preconditioned Krylov solve. Try that first, keep LU as fallback.
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> krylov;
  krylov.setTolerance(1e-14);
  krylov.setMaxIterations(1000);
  krylov.compute(A);
  x = krylov.solve(b);
  if (krylov.info() == Eigen::Success || krylov.info() == Eigen::NoConvergence) {
    if (relres() <= 1e-12) return x;
    x += krylov.solve(b - A * x);
    if (relres() <= 1e-12) return x;
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_sparse: factorization failed");
  x = lu.solve(b);
  if (relres() > 1e-12) {
    x += lu.solve(b - A * x);  // one step of iterative refinement
    if (relres() > 1e-12)
      throw std::runtime_error("solve_sparse: residual too large");
  }
  return x;
}

std::vector<double> initial_guess(const StencilTable& table,
                                  std::span<const double> f_nodes,
                                  std::span<const double> boundary_values) {
  const int rows = static_cast<int>(table.interior.size());
  std::vector<int> dir0(rows, 0);
  std::vector<double> half(rows, 0.5);
  FrozenSystem sys =
      assemble_frozen(table, f_nodes, dir0, half, boundary_values);
  Eigen::VectorXd u_int = solve_sparse(sys.matrix, -sys.constant);
  std::vector<double> u(boundary_values.begin(), boundary_values.end());
  for (int row = 0; row < rows; ++row) u[table.interior[row]] = u_int[row];
  return u;
}

NewtonReport newton_solve(const StencilTable& table,
                          std::span<const double> f_nodes,
                          std::span<const double> boundary_values,
                          std::vector<double>& u, const NewtonConfig& config) {
  const TriMesh& mesh = *table.mesh;
  if (u.size() != mesh.nodes.size())
    throw std::invalid_argument("newton_solve: iterate size mismatch");
  if (config.max_iter < 1 || !(config.step_tol > 0.0))
    throw std::invalid_argument("newton_solve: bad configuration");
  for (int i = 0; i < mesh.node_count(); ++i)
    if (mesh.boundary_node[i]) u[i] = boundary_values[i];

  const int rows = static_cast<int>(table.interior.size());
  NewtonReport report;
  for (int it = 1; it <= config.max_iter; ++it) {
    ResidualResult res = residual(table, u, f_nodes);
    double rnorm = 0.0;
    for (double v : res.values) rnorm = std::max(rnorm, std::abs(v));
    FrozenSystem sys = assemble_frozen(table, f_nodes, res.active_dir,
                                       res.active_weight, boundary_values);
    Eigen::VectorXd rhs(rows);
    for (int row = 0; row < rows; ++row) rhs[row] = -res.values[row];
    Eigen::VectorXd delta = solve_sparse(sys.matrix, rhs);
    double snorm = delta.lpNorm<Eigen::Infinity>();
    for (int row = 0; row < rows; ++row) u[table.interior[row]] += delta[row];
    report.iterations = it;
    report.residual_norms.push_back(rnorm);
    report.step_norms.push_back(snorm);
    if (snorm < config.step_tol) {
      report.converged = true;
      break;
    }
  }
  return report;
}

}  // namespace masl
