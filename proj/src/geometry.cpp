#include "masl/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace masl {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pm_pi(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Proper or touching intersection of segment p0-p1 with segment q0-q1,
// reported as parameters t along p0-p1 (in length units along unit dir).
// Used only by the simplicity check.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
  double o1 = orient(a, b, c), o2 = orient(a, b, d);
  double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 &&
      o3 != 0 && o4 != 0)
    return true;
  return false;
}

}  // namespace

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + t * ab);
}

void EdgeGrid::build(const std::vector<Vec2>& verts) {
  const int n = static_cast<int>(verts.size());
  lo = hi = verts[0];
  for (const Vec2& v : verts) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  double ext = std::max(hi.x - lo.x, hi.y - lo.y);
  if (ext <= 0.0) throw std::invalid_argument("degenerate polygon bbox");
  // Aim for O(1) edges per cell: cell comparable to twice the mean edge length.
  double per = 0.0;
  for (int i = 0; i < n; ++i) per += dist(verts[i], verts[(i + 1) % n]);
  cell = std::clamp(2.0 * per / n, ext / 256.0, ext);
  nx = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / cell)) + 1);
  ny = std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) / cell)) + 1);
  bins.assign(static_cast<size_t>(nx) * ny, {});
  for (int e = 0; e < n; ++e) {
    Vec2 a = verts[e], b = verts[(e + 1) % n];
    int x0 = cell_of(std::min(a.x, b.x), lo.x, nx);
    int x1 = cell_of(std::max(a.x, b.x), lo.x, nx);
    int y0 = cell_of(std::min(a.y, b.y), lo.y, ny);
    int y1 = cell_of(std::max(a.y, b.y), lo.y, ny);
    for (int iy = y0; iy <= y1; ++iy)
      for (int ix = x0; ix <= x1; ++ix)
        bins[static_cast<size_t>(iy) * nx + ix].push_back(e);
  }
}

int EdgeGrid::cell_of(double v, double lo_v, int n) const {
  int i = static_cast<int>(std::floor((v - lo_v) / cell));
  return std::clamp(i, 0, n - 1);
}

void EdgeGrid::gather_near(Vec2 p, std::vector<int>& out) const {
  out.clear();
  int cx = cell_of(p.x, lo.x, nx), cy = cell_of(p.y, lo.y, ny);
  for (int iy = std::max(0, cy - 1); iy <= std::min(ny - 1, cy + 1); ++iy)
    for (int ix = std::max(0, cx - 1); ix <= std::min(nx - 1, cx + 1); ++ix)
      for (int e : bins[static_cast<size_t>(iy) * nx + ix]) out.push_back(e);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

void EdgeGrid::gather_segment(Vec2 a, Vec2 b, std::vector<int>& out) const {
  out.clear();
  // Walk the cells crossed by the segment (conservative 3x3 dilation per
  // visited cell so that near-misses at cell borders are still collected).
  double len = dist(a, b);
  int steps = std::max(1, static_cast<int>(std::ceil(len / cell)) * 2);
  int px = -2, py = -2;
  for (int s = 0; s <= steps; ++s) {
    double t = static_cast<double>(s) / steps;
    Vec2 p = a + t * (b - a);
    int cx = cell_of(p.x, lo.x, nx), cy = cell_of(p.y, lo.y, ny);
    if (cx == px && cy == py) continue;
    px = cx;
    py = cy;
    for (int iy = std::max(0, cy - 1); iy <= std::min(ny - 1, cy + 1); ++iy)
      for (int ix = std::max(0, cx - 1); ix <= std::min(nx - 1, cx + 1); ++ix)
        for (int e : bins[static_cast<size_t>(iy) * nx + ix]) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

Polygon Polygon::from_vertices(std::vector<Vec2> verts, std::string family_tag,
                               double sampling_h) {
  if (verts.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
  Polygon poly;
  poly.verts_ = std::move(verts);
  poly.family_ = std::move(family_tag);
  poly.sampling_h_ = sampling_h;
  const auto& v = poly.verts_;
  const int n = static_cast<int>(v.size());
  double area2 = 0.0;
  for (int i = 0; i < n; ++i) area2 += cross(v[i], v[(i + 1) % n]);
  poly.area_ = 0.5 * area2;
  if (poly.area_ <= 0.0)
    throw std::invalid_argument("polygon must be CCW with positive area");
  for (int i = 0; i < n; ++i) {
    if (dist(v[i], v[(i + 1) % n]) < 1e-14)
      throw std::invalid_argument("polygon has a zero-length edge");
  }
  // Simplicity: no proper crossing between non-adjacent edges.
  for (int i = 0; i < n; ++i) {
    Vec2 a = v[i], b = v[(i + 1) % n];
    for (int j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(a, b, v[j], v[(j + 1) % n]))
        throw std::invalid_argument("polygon is self-intersecting");
    }
  }
  poly.grid_.build(poly.verts_);
  return poly;
}

double Polygon::perimeter() const {
  double per = 0.0;
  const int n = static_cast<int>(verts_.size());
  for (int i = 0; i < n; ++i) per += dist(verts_[i], verts_[(i + 1) % n]);
  return per;
}

double Polygon::boundary_distance(Vec2 p) const {
  // Exact when p is within one grid ring of the boundary; otherwise a full
  // scan is used. Callers that only need the near-boundary answer are fast.
  thread_local std::vector<int> cand;
  grid_.gather_near(p, cand);
  const int n = static_cast<int>(verts_.size());
  double best = std::numeric_limits<double>::infinity();
  for (int e : cand)
    best = std::min(best, dist_point_segment(p, verts_[e], verts_[(e + 1) % n]));
  if (best > grid_.cell * 0.9) {
    for (int e = 0; e < n; ++e)
      best = std::min(best, dist_point_segment(p, verts_[e], verts_[(e + 1) % n]));
  }
  return best;
}

Region Polygon::classify(Vec2 p) const {
  thread_local std::vector<int> cand;
  grid_.gather_near(p, cand);
  const int n = static_cast<int>(verts_.size());
  for (int e : cand) {
    if (dist_point_segment(p, verts_[e], verts_[(e + 1) % n]) <= kBoundaryTol)
      return Region::Boundary;
  }
  // Crossing parity with a +x ray; half-open rule handles vertices on the ray.
  bool inside = false;
  for (int e = 0; e < n; ++e) {
    Vec2 a = verts_[e], b = verts_[(e + 1) % n];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (xint > p.x) inside = !inside;
    }
  }
  return inside ? Region::Interior : Region::Exterior;
}

double Polygon::clip_ray(Vec2 p, Vec2 dir, double max_len) const {
  if (!(max_len > 0.0)) throw std::invalid_argument("clip_ray: max_len <= 0");
  if (std::abs(norm(dir) - 1.0) > 1e-9)
    throw std::invalid_argument("clip_ray: dir must be unit length");
  if (classify(p) != Region::Interior)
    throw std::invalid_argument("clip_ray: origin must be strictly interior");

  thread_local std::vector<int> cand;
  Vec2 q = p + max_len * dir;
  grid_.gather_segment(p, q, cand);

  // Collect every parameter where the ray meets the boundary, then walk the
  // intervals between consecutive hits and stop at the first exterior one.
  // This keeps rays that graze along a boundary edge inside the domain.
  thread_local std::vector<double> ts;
  ts.clear();
  const int n = static_cast<int>(verts_.size());
  for (int e : cand) {
    Vec2 a = verts_[e], b = verts_[(e + 1) % n];
    Vec2 r = b - a;
    double denom = cross(dir, r);
    double elen = norm(r);
    if (std::abs(denom) < 1e-13 * elen) {
      // Parallel. If collinear with the ray, transitions can only happen at
      // the edge endpoints; record their parameters.
      if (std::abs(cross(dir, a - p)) < 1e-11) {
        for (Vec2 v : {a, b}) {
          double t = dot(v - p, dir);
          if (t > kBoundaryTol && t < max_len - kBoundaryTol) ts.push_back(t);
        }
      }
      continue;
    }
    double t = cross(a - p, r) / denom;
    double s = cross(a - p, dir) / denom;
    if (s < -1e-12 || s > 1.0 + 1e-12) continue;
    if (t > kBoundaryTol && t < max_len - kBoundaryTol) ts.push_back(t);
  }
  if (ts.empty()) return max_len;  // no boundary events: segment stays inside

  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [](double a, double b) { return b - a < 1e-12; }),
           ts.end());
  double prev = 0.0;
  for (size_t i = 0; i <= ts.size(); ++i) {
    double next = (i < ts.size()) ? ts[i] : max_len;
    Vec2 mid = p + (0.5 * (prev + next)) * dir;
    if (classify(mid) == Region::Exterior) return prev;
    prev = next;
  }
  return max_len;
}

namespace {

// Appends the open interior of a circular arc from angle phi0 by signed sweep
// dphi around center q with radius r, sampled at arc step <= h. Endpoints are
// the caller's responsibility. Throws if the arc would get < 8 segments.
void append_arc_interior(std::vector<Vec2>& out, Vec2 q, double r, double phi0,
                         double dphi, double h) {
  double len = std::abs(dphi) * r;
  int nseg = static_cast<int>(std::ceil(len / h));
  if (nseg < 8)
    throw std::invalid_argument(
        "build_domain: sampling too coarse, a curved arc would get fewer than "
        "8 segments");
  for (int i = 1; i < nseg; ++i) {
    double phi = phi0 + dphi * static_cast<double>(i) / nseg;
    out.push_back({q.x + r * std::cos(phi), q.y + r * std::sin(phi)});
  }
}

// Arc between two known endpoints on a circle centered at q, swept the short
// way around. Checks both endpoints actually lie on the circle.
void append_corner_arc(std::vector<Vec2>& out, Vec2 q, double r, Vec2 from,
                       Vec2 to, double h) {
  if (std::abs(dist(from, q) - r) > 1e-9 || std::abs(dist(to, q) - r) > 1e-9)
    throw std::logic_error("arc endpoints off the circle");
  double phi0 = std::atan2(from.y - q.y, from.x - q.x);
  double phi1 = std::atan2(to.y - q.y, to.x - q.x);
  append_arc_interior(out, q, r, phi0, wrap_pm_pi(phi1 - phi0), h);
}

Polygon make_l_shape(double h) {
  return Polygon::from_vertices(
      {{1, -1}, {1, 1}, {-1, 1}, {-1, 0}, {0, 0}, {0, -1}}, "l_shape", h);
}

Polygon make_square(double h) {
  return Polygon::from_vertices({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, "square",
                                h);
}

Polygon make_unit_square_test(double h) {
  return Polygon::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                "unit_square_test", h);
}

Polygon make_disc_union_square(double h) {
  // Unit disc plus the unit square (0,1)^2: square corner path from (1,0) up
  // to (0,1), then the disc arc from (0,1) counterclockwise back to (1,0).
  std::vector<Vec2> v = {{1, 0}, {1, 1}, {0, 1}};
  append_arc_interior(v, {0, 0}, 1.0, kPi / 2, 1.5 * kPi, h);
  return Polygon::from_vertices(std::move(v), "disc_union_square", h);
}

Polygon make_heart(double h) {
  // Two half-discs of radius 1/2 stacked on the left unit half-disc, with a
  // reflex cusp at the origin. Perimeter 2*pi.
  std::vector<Vec2> v = {{0, 0}};
  append_arc_interior(v, {0, 0.5}, 0.5, -kPi / 2, kPi, h);
  v.push_back({0, 1});
  append_arc_interior(v, {0, 0}, 1.0, kPi / 2, kPi, h);
  v.push_back({0, -1});
  append_arc_interior(v, {0, -0.5}, 0.5, -kPi / 2, kPi, h);
  return Polygon::from_vertices(std::move(v), "heart", h);
}

Polygon make_bent_square(double c, bool convex, double h) {
  if (!(c > 1.0))
    throw std::invalid_argument("bent square requires bend parameter c > 1");
  // Convex: intersection of four discs centered at distance c, each passing
  // through the two far corners of [-1,1]^2, so the sides bulge outward.
  // Concave: the square minus four discs through the near corners, so every
  // side is carved inward; only the four corners survive from the square.
  double r = convex ? std::sqrt((c + 1.0) * (c + 1.0) + 1.0)
                    : std::sqrt((c - 1.0) * (c - 1.0) + 1.0);
  const Vec2 corner[4] = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  // Center of the circle forming the face that starts at corner[i].
  const Vec2 center_convex[4] = {{-c, 0}, {0, -c}, {c, 0}, {0, c}};
  const Vec2 center_concave[4] = {{c, 0}, {0, c}, {-c, 0}, {0, -c}};
  std::vector<Vec2> v;
  for (int i = 0; i < 4; ++i) {
    v.push_back(corner[i]);
    Vec2 q = convex ? center_convex[i] : center_concave[i];
    append_corner_arc(v, q, r, corner[i], corner[(i + 1) % 4], h);
  }
  return Polygon::from_vertices(std::move(v),
                                convex ? "bent_square_convex"
                                       : "bent_square_concave",
                                h);
}

}  // namespace

Polygon build_domain(const DomainSpec& spec, double sampling_h) {
  if (!(sampling_h > 0.0))
    throw std::invalid_argument("build_domain: sampling_h must be positive");
  if (spec.family == "l_shape") return make_l_shape(sampling_h);
  if (spec.family == "square") return make_square(sampling_h);
  if (spec.family == "unit_square_test") return make_unit_square_test(sampling_h);
  if (spec.family == "disc_union_square") return make_disc_union_square(sampling_h);
  if (spec.family == "heart") return make_heart(sampling_h);
  if (spec.family == "bent_square_convex")
    return make_bent_square(spec.c, true, sampling_h);
  if (spec.family == "bent_square_concave")
    return make_bent_square(spec.c, false, sampling_h);
  throw std::invalid_argument("build_domain: unknown family '" + spec.family +
                              "'");
}

std::vector<std::string> domain_families() {
  return {"l_shape",          "square",
          "unit_square_test", "disc_union_square",
          "heart",            "bent_square_convex",
          "bent_square_concave"};
}

}  // namespace masl
