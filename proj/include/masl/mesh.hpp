#pragma once

#include <array>
#include <span>
#include <vector>

#include "masl/geometry.hpp"

namespace masl {

// Barycentric interpolation point: triangle id, its three node ids and
// convex weights (clamped nonnegative, summing to one).
struct BaryStencil {
  int triangle = -1;
  std::array<int, 3> nodes{};
  std::array<double, 3> weights{};
};

// Conforming triangulation of a polygonal domain. Triangles are CCW.
// boundary_edges lists the closed boundary chain; its endpoints are exactly
// the nodes flagged in boundary_node. Instances are immutable once built, so
// concurrent read-only use is safe.
struct TriMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::uint8_t> boundary_node;
  std::vector<std::array<int, 2>> boundary_edges;
  int level = 0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int interior_count() const;
  double total_area() const;

  // Builds the triangle locator grid. Must be called after the arrays are
  // filled; generate_mesh / refine_uniform / read_mesh do this for you.
  void finalize();

  // Locator grid (built by finalize).
  Vec2 grid_lo{}, grid_hi{};
  int grid_nx = 0, grid_ny = 0;
  double grid_cell = 1.0;
  std::vector<std::vector<int>> grid_bins;
};

// Mesh quality summary used by generate_mesh validation and by tests.
struct MeshQuality {
  bool conforming = false;      // interior edges shared by exactly 2 triangles
  bool boundary_consistent = false;  // chain edges appear in exactly 1 triangle
  bool all_ccw = false;
  double min_angle_deg = 0.0;
  double total_area = 0.0;
  double min_edge = 0.0, max_edge = 0.0, mean_edge = 0.0;
};

MeshQuality mesh_quality(const TriMesh& mesh);

// Unstructured Delaunay mesh of the polygon with boundary spacing ~target_h
// and an interior hexagonal point lattice of pitch target_h. All polygon
// vertices become mesh nodes. Throws on meshing failure or if validation
// (conformity, orientation, min angle, area agreement) fails.
TriMesh generate_mesh(const Polygon& poly, double target_h);

// One level of red refinement: each triangle is split into four via edge
// midpoints. Midpoints of boundary chain edges become boundary nodes.
TriMesh refine_uniform(const TriMesh& mesh);

// Arithmetic mean over the unique edges of the mesh.
double average_edge_length(const TriMesh& mesh);

// Containing triangle and barycentric weights for p. Throws if p cannot be
// attributed to any triangle (weight tolerance 1e-12, with a relaxed 1e-9
// retry pass).
BaryStencil locate_point(const TriMesh& mesh, Vec2 p);

double interpolate(const TriMesh& mesh, std::span<const double> u, Vec2 p);

}  // namespace masl
