#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <span>

#include "masl/bellman.hpp"
#include "masl/mesh.hpp"

namespace masl {

// Arm clipping policy at the boundary: Asymmetric keeps each of the two arms
// of a direction at its own clipped length; Symmetric shortens both to the
// smaller one.
enum class ClipMode { Asymmetric, Symmetric };

// One arm of a second-difference stencil. Endpoint values always come from
// P1 interpolation on the mesh; a clipped arm ends on the boundary, where the
// interpolation reduces to the two boundary nodes of the edge it landed on,
// so Dirichlet data enters through nodal values only.
struct StencilArm {
  double length = 0.0;
  bool on_boundary = false;
  BaryStencil interp;
  Vec2 point;
};

// The four arms serving one (node, direction) pair: a second difference along
// the direction (fwd/bwd) and one along its perpendicular (pfwd/pbwd).
struct NodeStencil {
  StencilArm fwd, bwd, pfwd, pbwd;
};

struct StencilTable {
  const TriMesh* mesh = nullptr;
  int n_theta = 0;
  double multiplier = 0.0;
  double mesh_h = 0.0;
  double radius = 0.0;  // multiplier * mesh_h
  ClipMode clip = ClipMode::Asymmetric;
  std::vector<int> interior;        // node id per row
  std::vector<int> interior_index;  // node id -> row, -1 for boundary nodes
  std::vector<NodeStencil> arms;    // rows * n_theta, direction-major per row

  const NodeStencil& at(int row, int j) const {
    return arms[static_cast<size_t>(row) * n_theta + j];
  }
};

// Builds arms for every interior node and direction. multiplier >= 1.
StencilTable build_stencils(const TriMesh& mesh, const Polygon& poly,
                            const DirectionSet& dirs, double multiplier,
                            ClipMode clip);

// Unequal-arm second difference around a node value. Exact on affine data.
double second_difference(double node_value, const StencilArm& fwd,
                         const StencilArm& bwd, std::span<const double> u);

// Discrete Bellman residual: per interior row the maximum over directions of
// split_max applied to the two second differences, with the maximizing
// direction index (smallest on ties) and weight recorded.
struct ResidualResult {
  std::vector<double> values;
  std::vector<int> active_dir;
  std::vector<double> active_weight;
};

ResidualResult residual(const StencilTable& table, std::span<const double> u,
                        std::span<const double> f_nodes);

// The linearization with controls frozen at the given active set:
// F(v) = matrix * v_interior + constant for any v that keeps the boundary
// entries of boundary_values. Off-diagonal entries are <= 0, diagonals > 0.
struct FrozenSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd constant;
};

FrozenSystem assemble_frozen(const StencilTable& table,
                             std::span<const double> f_nodes,
                             std::span<const int> active_dir,
                             std::span<const double> active_weight,
                             std::span<const double> boundary_values);

}  // namespace masl
