#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace masl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

enum class Region { Interior, Boundary, Exterior };

// Absolute tolerance (in domain units) for classifying a point as on-boundary.
inline constexpr double kBoundaryTol = 1e-12;

// Named domain family plus its shape parameter (the bend parameter c for the
// bent squares; unused elsewhere).
struct DomainSpec {
  std::string family;
  double c = 0.0;
};

// Spatial index over polygon edges: uniform grid keyed by edge bounding box.
struct EdgeGrid {
  Vec2 lo, hi;
  int nx = 0, ny = 0;
  double cell = 1.0;
  std::vector<std::vector<int>> bins;

  void build(const std::vector<Vec2>& verts);
  int cell_of(double v, double lo_v, int n) const;
  // Edge ids whose boxes overlap cells near p (3x3 ring).
  void gather_near(Vec2 p, std::vector<int>& out) const;
  // Edge ids whose boxes overlap cells crossed by segment a->b.
  void gather_segment(Vec2 a, Vec2 b, std::vector<int>& out) const;
};

// Closed simple polygon, CCW, possibly sampled from curved boundary pieces.
class Polygon {
 public:
  Polygon() = default;
  // Validates: >= 3 vertices, positive signed area, simple. Throws otherwise.
  static Polygon from_vertices(std::vector<Vec2> verts, std::string family_tag,
                               double sampling_h);

  const std::vector<Vec2>& vertices() const { return verts_; }
  const std::string& family() const { return family_; }
  double sampling_h() const { return sampling_h_; }
  double signed_area() const { return area_; }
  double perimeter() const;
  Vec2 bbox_lo() const { return grid_.lo; }
  Vec2 bbox_hi() const { return grid_.hi; }

  // Interior / Boundary (within kBoundaryTol) / Exterior.
  Region classify(Vec2 p) const;
  // Distance from p to the polygon boundary.
  double boundary_distance(Vec2 p) const;
  // Longest t in (0, max_len] such that the open segment p + (0,t)*dir stays
  // inside the closed domain. dir must be unit length, p strictly interior.
  double clip_ray(Vec2 p, Vec2 dir, double max_len) const;

 private:
  std::vector<Vec2> verts_;
  std::string family_;
  double sampling_h_ = 0.0;
  double area_ = 0.0;
  EdgeGrid grid_;
};

inline Region point_in_polygon(const Polygon& poly, Vec2 p) {
  return poly.classify(p);
}
inline double clip_ray(const Polygon& poly, Vec2 p, Vec2 dir, double max_len) {
  return poly.clip_ray(p, dir, max_len);
}

// Families: l_shape, square, unit_square_test, disc_union_square, heart,
// bent_square_convex (c > 1), bent_square_concave (c > 1).
// sampling_h controls the arc sampling step; every curved arc must receive at
// least 8 segments or the call throws.
Polygon build_domain(const DomainSpec& spec, double sampling_h);

std::vector<std::string> domain_families();

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b);

}  // namespace masl
