#include "masl/mesh.hpp"
#include <cstdlib>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace masl {

namespace {

// splitmix64, used for deterministic mesh jitter.
std::uint64_t hash_u64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_rand(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = hash_u64(seed ^ hash_u64(a ^ hash_u64(b)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

template <class T>
int sgn(T v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// Sign of the orientation determinant with a floating-point filter and a
// long double fallback. Returns +1 (CCW), -1 (CW) or 0 (degenerate or
// indeterminate).
int orient_sign(Vec2 a, Vec2 b, Vec2 c) {
  double l = (b.x - a.x) * (c.y - a.y);
  double r = (b.y - a.y) * (c.x - a.x);
  double det = l - r;
  double sum = std::abs(l) + std::abs(r);
  if (std::abs(det) > 3.3307e-16 * sum) return sgn(det);
  if (sum == 0.0) return 0;
  long double ll = (static_cast<long double>(b.x) - a.x) *
                   (static_cast<long double>(c.y) - a.y);
  long double lr = (static_cast<long double>(b.y) - a.y) *
                   (static_cast<long double>(c.x) - a.x);
  long double ldet = ll - lr;
  if (std::abs(static_cast<double>(ldet)) > 1.6264e-19 * sum) return sgn(ldet);
  return 0;
}

// Positive iff d lies strictly inside the circumcircle of CCW triangle abc.
int incircle_sign(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double adx = a.x - d.x, ady = a.y - d.y;
  double bdx = b.x - d.x, bdy = b.y - d.y;
  double cdx = c.x - d.x, cdy = c.y - d.y;
  double al = adx * adx + ady * ady;
  double bl = bdx * bdx + bdy * bdy;
  double cl = cdx * cdx + cdy * cdy;
  double det = adx * (bdy * cl - bl * cdy) - ady * (bdx * cl - bl * cdx) +
               al * (bdx * cdy - bdy * cdx);
  double perm = (std::abs(bdx * cdy) + std::abs(bdy * cdx)) * al +
                (std::abs(cdx * ady) + std::abs(cdy * adx)) * bl +
                (std::abs(adx * bdy) + std::abs(ady * bdx)) * cl;
  if (std::abs(det) > 1.1103e-15 * perm) return sgn(det);
  if (perm == 0.0) return 0;
  long double ax = a.x, ay = a.y, bx = b.x, by = b.y, cx = c.x, cy = c.y,
              dx = d.x, dy = d.y;
  long double ladx = ax - dx, lady = ay - dy;
  long double lbdx = bx - dx, lbdy = by - dy;
  long double lcdx = cx - dx, lcdy = cy - dy;
  long double lal = ladx * ladx + lady * lady;
  long double lbl = lbdx * lbdx + lbdy * lbdy;
  long double lcl = lcdx * lcdx + lcdy * lcdy;
  long double ldet = ladx * (lbdy * lcl - lbl * lcdy) -
                     lady * (lbdx * lcl - lbl * lcdx) +
                     lal * (lbdx * lcdy - lbdy * lcdx);
  if (std::abs(static_cast<double>(ldet)) > 5.43e-19 * perm) return sgn(ldet);
  return 0;
}

struct DTri {
  std::array<int, 3> v;
  std::array<int, 3> n;  // neighbor across the edge opposite v[k]
};

// Incremental Delaunay triangulation with a super box, plus flip-based
// recovery of prescribed boundary edges.
struct Delaunay {
  std::vector<Vec2> pts;  // real points first, then 4 box corners
  int nreal = 0;
  std::vector<DTri> tris;
  std::vector<char> alive;
  std::vector<int> vert2tri;
  int last = 0;

  explicit Delaunay(const std::vector<Vec2>& input) {
    pts = input;
    nreal = static_cast<int>(pts.size());
    Vec2 lo = pts[0], hi = pts[0];
    for (const Vec2& p : pts) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
    double m = 10.0 * std::max({hi.x - lo.x, hi.y - lo.y, 1.0});
    pts.push_back({lo.x - m, lo.y - m});
    pts.push_back({hi.x + m, lo.y - m});
    pts.push_back({hi.x + m, hi.y + m});
    pts.push_back({lo.x - m, hi.y + m});
    int b0 = nreal, b1 = nreal + 1, b2 = nreal + 2, b3 = nreal + 3;
    tris.push_back({{b0, b1, b2}, {-1, 1, -1}});
    tris.push_back({{b0, b2, b3}, {-1, -1, 0}});
    alive = {1, 1};
    vert2tri.assign(pts.size(), 0);
    vert2tri[b3] = 1;
  }

  int orient(int a, int b, int c) const {
    return orient_sign(pts[a], pts[b], pts[c]);
  }

  int walk(Vec2 p, int hint) const {
    int t = hint;
    int guard = 4 * static_cast<int>(tris.size()) + 16;
    for (int it = 0; it < guard && t != -1 && alive[t]; ++it) {
      bool moved = false;
      for (int kk = 0; kk < 3; ++kk) {
        int k = (kk + it) % 3;
        Vec2 a = pts[tris[t].v[(k + 1) % 3]];
        Vec2 b = pts[tris[t].v[(k + 2) % 3]];
        if (orient_sign(a, b, p) < 0) {
          t = tris[t].n[k];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    // Robustness fallback: exhaustive scan.
    for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
      if (!alive[i]) continue;
      bool in = true;
      for (int k = 0; k < 3 && in; ++k)
        in = orient_sign(pts[tris[i].v[(k + 1) % 3]],
                         pts[tris[i].v[(k + 2) % 3]], p) >= 0;
      if (in) return i;
    }
    throw std::runtime_error("mesh: point location failed during insertion");
  }

  void insert(int ip) {
    Vec2 p = pts[ip];
    int t0 = walk(p, last);
    if (t0 == -1) throw std::runtime_error("mesh: insertion outside hull");

    std::vector<int> cav = {t0};
    std::vector<char> in_cav(tris.size(), 0);
    in_cav[t0] = 1;
    for (size_t qi = 0; qi < cav.size(); ++qi) {
      int t = cav[qi];
      for (int k = 0; k < 3; ++k) {
        int nb = tris[t].n[k];
        if (nb == -1 || in_cav[nb]) continue;
        if (incircle_sign(pts[tris[nb].v[0]], pts[tris[nb].v[1]],
                          pts[tris[nb].v[2]], p) > 0) {
          in_cav[nb] = 1;
          cav.push_back(nb);
        }
      }
    }

    // Cavity boundary as directed edges (a, b) with outer neighbor, repaired
    // until the cavity is star shaped around p.
    struct BEdge {
      int a, b, outer;
    };
    std::vector<BEdge> bnd;
    for (int repair = 0;; ++repair) {
      if (repair > 64) throw std::runtime_error("mesh: cavity repair failed");
      bnd.clear();
      for (int t : cav) {
        if (!in_cav[t]) continue;
        for (int k = 0; k < 3; ++k) {
          int nb = tris[t].n[k];
          if (nb != -1 && in_cav[nb]) continue;
          bnd.push_back({tris[t].v[(k + 1) % 3], tris[t].v[(k + 2) % 3], nb});
        }
      }
      int bad_tri = -1;
      for (const BEdge& e : bnd) {
        if (orient_sign(p, pts[e.a], pts[e.b]) <= 0) {
          // Shrink: drop the cavity triangle owning this edge.
          for (int t : cav) {
            if (!in_cav[t]) continue;
            for (int k = 0; k < 3; ++k)
              if (tris[t].v[(k + 1) % 3] == e.a &&
                  tris[t].v[(k + 2) % 3] == e.b)
                bad_tri = t;
          }
          break;
        }
      }
      if (bad_tri == -1) break;
      if (bad_tri == t0 || cav.size() <= 1)
        throw std::runtime_error("mesh: degenerate insertion cavity");
      in_cav[bad_tri] = 0;
    }

    for (int t : cav)
      if (in_cav[t]) alive[t] = 0;

    std::unordered_map<int, int> by_first;  // a -> new tri with edge (p,a)
    std::unordered_map<int, int> by_second;
    std::vector<int> created;
    for (const BEdge& e : bnd) {
      int id = static_cast<int>(tris.size());
      tris.push_back({{ip, e.a, e.b}, {e.outer, -1, -1}});
      alive.push_back(1);
      in_cav.push_back(0);
      created.push_back(id);
      if (e.outer != -1) {
        for (int k = 0; k < 3; ++k)
          if (tris[e.outer].v[(k + 1) % 3] == e.b &&
              tris[e.outer].v[(k + 2) % 3] == e.a)
            tris[e.outer].n[k] = id;
      }
      by_first[e.a] = id;
      by_second[e.b] = id;
    }
    for (int id : created) {
      int a = tris[id].v[1], b = tris[id].v[2];
      tris[id].n[1] = by_first.at(b);   // neighbor across edge (b, p)
      tris[id].n[2] = by_second.at(a);  // neighbor across edge (p, a)
      vert2tri[tris[id].v[0]] = id;
      vert2tri[a] = id;
      vert2tri[b] = id;
    }
    last = created.empty() ? last : created.back();
  }

  // Adjacency consistency check used while debugging mesh failures.
  void check(const char* where) const {
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!alive[t]) continue;
      for (int k = 0; k < 3; ++k) {
        int nb = tris[t].n[k];
        if (nb == -1) continue;
        if (!alive[nb])
          throw std::runtime_error(std::string(where) + ": dead neighbor");
        int a = tris[t].v[(k + 1) % 3], b = tris[t].v[(k + 2) % 3];
        bool found = false;
        for (int kk = 0; kk < 3; ++kk)
          if (tris[nb].n[kk] == t && tris[nb].v[(kk + 1) % 3] == b &&
              tris[nb].v[(kk + 2) % 3] == a)
            found = true;
        if (!found)
          throw std::runtime_error(std::string(where) + ": one-way adjacency");
      }
      if (orient(tris[t].v[0], tris[t].v[1], tris[t].v[2]) <= 0)
        throw std::runtime_error(std::string(where) + ": non-CCW triangle");
    }
  }

  // All alive triangles incident to vertex a.
  void star(int a, std::vector<int>& out) const {
    out.clear();
    int t0 = vert2tri[a];
    if (t0 < 0 || !alive[t0]) {
      for (int i = 0; i < static_cast<int>(tris.size()); ++i)
        if (alive[i] &&
            (tris[i].v[0] == a || tris[i].v[1] == a || tris[i].v[2] == a))
          out.push_back(i);
      return;
    }
    std::vector<int> stack = {t0};
    out.push_back(t0);
    auto seen = [&](int t) {
      return std::find(out.begin(), out.end(), t) != out.end();
    };
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      int i = -1;
      for (int k = 0; k < 3; ++k)
        if (tris[t].v[k] == a) i = k;
      if (i == -1) continue;
      for (int k : {(i + 1) % 3, (i + 2) % 3}) {
        int nb = tris[t].n[k];
        if (nb != -1 && alive[nb] && !seen(nb)) {
          out.push_back(nb);
          stack.push_back(nb);
        }
      }
    }
  }

  bool edge_exists(int a, int b) const {
    std::vector<int> st;
    star(a, st);
    for (int t : st)
      for (int k = 0; k < 3; ++k)
        if (tris[t].v[k] == b) return true;
    return false;
  }

  bool flip(int t, int k) {
    int o = tris[t].n[k];
    if (o == -1) return false;
    int ko = -1;
    for (int kk = 0; kk < 3; ++kk)
      if (tris[o].n[kk] == t) ko = kk;
    if (ko == -1) throw std::runtime_error("mesh: adjacency corrupted");
    int p = tris[t].v[k], a = tris[t].v[(k + 1) % 3], b = tris[t].v[(k + 2) % 3];
    int q = tris[o].v[ko];
    if (orient(p, a, q) <= 0 || orient(p, q, b) <= 0) return false;
    int tn1 = tris[t].n[(k + 1) % 3], tn2 = tris[t].n[(k + 2) % 3];
    int on1 = tris[o].n[(ko + 1) % 3], on2 = tris[o].n[(ko + 2) % 3];
    tris[t] = {{p, a, q}, {on1, o, tn2}};
    tris[o] = {{p, q, b}, {on2, tn1, t}};
    auto relink = [&](int tri, int from, int to) {
      if (tri == -1) return;
      for (int kk = 0; kk < 3; ++kk)
        if (tris[tri].n[kk] == from) tris[tri].n[kk] = to;
    };
    relink(on1, o, t);
    relink(tn1, t, o);
    vert2tri[p] = t;
    vert2tri[a] = t;
    vert2tri[q] = t;
    vert2tri[b] = o;
    return true;
  }

  // Forces segment (a, b) to appear as an edge by flipping the edges that
  // cross it. The prescribed chains never cross each other, so earlier
  // recovered edges are never destroyed.
  void recover_edge(int a, int b) {
    if (edge_exists(a, b)) return;
    auto crosses = [&](int u, int v) {
      if (u == a || u == b || v == a || v == b) return false;
      int s1 = orient(a, b, u), s2 = orient(a, b, v);
      if (s1 * s2 >= 0) return false;
      int s3 = orient(u, v, a), s4 = orient(u, v, b);
      return s3 * s4 < 0;
    };
    int guard = 4 * static_cast<int>(tris.size()) + 64;
    for (int it = 0; it < guard; ++it) {
      if (edge_exists(a, b)) return;
      bool flipped = false;
      for (int t = 0; t < static_cast<int>(tris.size()) && !flipped; ++t) {
        if (!alive[t]) continue;
        for (int k = 0; k < 3 && !flipped; ++k) {
          int u = tris[t].v[(k + 1) % 3], v = tris[t].v[(k + 2) % 3];
          if (u > v) continue;
          if (crosses(u, v) && flip(t, k)) flipped = true;
        }
      }
      if (!flipped) break;
    }
    if (!edge_exists(a, b))
      throw std::runtime_error("mesh: failed to recover a boundary edge");
  }
};

double tri_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

}  // namespace

int TriMesh::interior_count() const {
  int n = 0;
  for (std::uint8_t b : boundary_node) n += (b == 0);
  return n;
}

double TriMesh::total_area() const {
  double s = 0.0;
  for (const auto& t : triangles)
    s += tri_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
  return s;
}

void TriMesh::finalize() {
  if (nodes.empty() || triangles.empty())
    throw std::runtime_error("mesh: finalize on empty mesh");
  grid_lo = grid_hi = nodes[0];
  for (const Vec2& p : nodes) {
    grid_lo.x = std::min(grid_lo.x, p.x);
    grid_lo.y = std::min(grid_lo.y, p.y);
    grid_hi.x = std::max(grid_hi.x, p.x);
    grid_hi.y = std::max(grid_hi.y, p.y);
  }
  grid_cell = 2.0 * average_edge_length(*this);
  grid_nx = std::max(1, static_cast<int>(std::ceil((grid_hi.x - grid_lo.x) /
                                                   grid_cell)) + 1);
  grid_ny = std::max(1, static_cast<int>(std::ceil((grid_hi.y - grid_lo.y) /
                                                   grid_cell)) + 1);
  grid_bins.assign(static_cast<size_t>(grid_nx) * grid_ny, {});
  auto cell_of = [&](double v, double lo, int n) {
    return std::clamp(static_cast<int>(std::floor((v - lo) / grid_cell)), 0,
                      n - 1);
  };
  for (int t = 0; t < triangle_count(); ++t) {
    Vec2 a = nodes[triangles[t][0]], b = nodes[triangles[t][1]],
         c = nodes[triangles[t][2]];
    int x0 = cell_of(std::min({a.x, b.x, c.x}), grid_lo.x, grid_nx);
    int x1 = cell_of(std::max({a.x, b.x, c.x}), grid_lo.x, grid_nx);
    int y0 = cell_of(std::min({a.y, b.y, c.y}), grid_lo.y, grid_ny);
    int y1 = cell_of(std::max({a.y, b.y, c.y}), grid_lo.y, grid_ny);
    for (int iy = y0; iy <= y1; ++iy)
      for (int ix = x0; ix <= x1; ++ix)
        grid_bins[static_cast<size_t>(iy) * grid_nx + ix].push_back(t);
  }
}

double average_edge_length(const TriMesh& mesh) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(mesh.triangles.size() * 3);
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      int u = t[k], v = t[(k + 1) % 3];
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  double s = 0.0;
  for (auto [u, v] : edges) s += dist(mesh.nodes[u], mesh.nodes[v]);
  return s / static_cast<double>(edges.size());
}

MeshQuality mesh_quality(const TriMesh& mesh) {
  MeshQuality q;
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      int u = t[k], v = t[(k + 1) % 3];
      edge_count[{std::min(u, v), std::max(u, v)}]++;
    }
  std::map<std::pair<int, int>, int> chain;
  for (const auto& e : mesh.boundary_edges)
    chain[{std::min(e[0], e[1]), std::max(e[0], e[1])}]++;

  q.conforming = true;
  q.boundary_consistent = true;
  for (const auto& [e, c] : edge_count) {
    if (c > 2) q.conforming = false;
    bool on_chain = chain.count(e) > 0;
    if (c == 1 && !on_chain) q.boundary_consistent = false;
    if (c == 2 && on_chain) q.boundary_consistent = false;
  }
  for (const auto& [e, c] : chain) {
    if (c != 1) q.boundary_consistent = false;
    auto it = edge_count.find(e);
    if (it == edge_count.end() || it->second != 1) q.boundary_consistent = false;
  }

  q.all_ccw = true;
  q.min_angle_deg = 180.0;
  q.total_area = 0.0;
  double emin = std::numeric_limits<double>::infinity(), emax = 0.0, esum = 0.0;
  for (const auto& t : mesh.triangles) {
    Vec2 a = mesh.nodes[t[0]], b = mesh.nodes[t[1]], c = mesh.nodes[t[2]];
    double ar = tri_area(a, b, c);
    if (ar <= 0.0) q.all_ccw = false;
    q.total_area += ar;
    Vec2 p[3] = {a, b, c};
    for (int k = 0; k < 3; ++k) {
      Vec2 u = p[(k + 1) % 3] - p[k], v = p[(k + 2) % 3] - p[k];
      double ang = std::atan2(std::abs(cross(u, v)), dot(u, v));
      q.min_angle_deg = std::min(q.min_angle_deg, ang * 180.0 / 3.14159265358979323846);
    }
  }
  for (const auto& [e, c] : edge_count) {
    double len = dist(mesh.nodes[e.first], mesh.nodes[e.second]);
    emin = std::min(emin, len);
    emax = std::max(emax, len);
    esum += len;
  }
  q.min_edge = emin;
  q.max_edge = emax;
  q.mean_edge = esum / static_cast<double>(edge_count.size());
  return q;
}

namespace {

TriMesh build_attempt(const Polygon& poly, double target_h, std::uint64_t seed) {
  const auto& pv = poly.vertices();
  const int npoly = static_cast<int>(pv.size());

  // Boundary chain: subdivide each polygon edge at roughly target_h. Interior
  // subdivision points get a tiny deterministic slide along the edge so that
  // exactly cocircular boundary quadruples (axis-aligned squares, regular
  // samplings) do not destabilize the triangulation.
  std::vector<Vec2> points;
  for (int e = 0; e < npoly; ++e) {
    Vec2 a = pv[e], b = pv[(e + 1) % npoly];
    int nseg = std::max(1, static_cast<int>(std::llround(dist(a, b) / target_h)));
    for (int i = 0; i < nseg; ++i) {
      double t = static_cast<double>(i) / nseg;
      if (i > 0)
        t += 1e-6 * (unit_rand(seed, 1000 + e, i) - 0.5) / nseg;
      points.push_back(a + t * (b - a));
    }
  }
  const int nchain = static_cast<int>(points.size());

  // Interior nodes: hexagonal lattice of pitch target_h, jittered, with a
  // keep-out ring near the boundary so clipped triangles stay well shaped.
  Vec2 lo = poly.bbox_lo(), hi = poly.bbox_hi();
  double row_step = target_h * 0.8660254037844386;
  int row = 0;
  for (double y = lo.y + 0.5 * row_step; y < hi.y; y += row_step, ++row) {
    double x0 = lo.x + ((row % 2) ? 0.75 : 0.25) * target_h;
    int col = 0;
    for (double x = x0; x < hi.x; x += target_h, ++col) {
      Vec2 p{x + 1e-6 * target_h * (unit_rand(seed, row, 2 * col) - 0.5),
             y + 1e-6 * target_h * (unit_rand(seed, row, 2 * col + 1) - 0.5)};
      if (poly.classify(p) != Region::Interior) continue;
      if (poly.boundary_distance(p) < 0.45 * target_h) continue;
      points.push_back(p);
    }
  }

  Delaunay dt(points);
  const bool debug = std::getenv("MASL_MESH_DEBUG") != nullptr;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    try {
      dt.insert(i);
      if (debug) dt.check("insert");
    } catch (const std::exception& ex) {
      throw std::runtime_error("insert #" + std::to_string(i) + " at (" +
                               std::to_string(points[i].x) + ", " +
                               std::to_string(points[i].y) + "): " + ex.what());
    }
  }
  for (int i = 0; i < nchain; ++i) dt.recover_edge(i, (i + 1) % nchain);

  // Keep triangles whose centroid is inside the domain; with the chain edges
  // recovered this classifies every triangle correctly.
  TriMesh mesh;
  std::vector<int> remap(points.size(), -1);
  for (int t = 0; t < static_cast<int>(dt.tris.size()); ++t) {
    if (!dt.alive[t]) continue;
    const auto& v = dt.tris[t].v;
    if (v[0] >= dt.nreal || v[1] >= dt.nreal || v[2] >= dt.nreal) continue;
    Vec2 cen = (1.0 / 3.0) * (dt.pts[v[0]] + dt.pts[v[1]] + dt.pts[v[2]]);
    Region reg = poly.classify(cen);
    if (reg == Region::Boundary) {
      // Centroid within tolerance of the boundary: decide by sampling points
      // between the centroid and the vertices.
      int inner = 0;
      for (int k = 0; k < 3; ++k)
        if (poly.classify(0.5 * (cen + dt.pts[v[k]])) == Region::Interior)
          ++inner;
      reg = inner >= 2 ? Region::Interior : Region::Exterior;
    }
    if (reg != Region::Interior) continue;
    std::array<int, 3> tv{};
    for (int k = 0; k < 3; ++k) {
      if (remap[v[k]] == -1) {
        remap[v[k]] = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back(dt.pts[v[k]]);
      }
      tv[k] = remap[v[k]];
    }
    mesh.triangles.push_back(tv);
  }

  for (int i = 0; i < static_cast<int>(points.size()); ++i)
    if (remap[i] == -1)
      throw std::runtime_error("mesh: a sample point was dropped");

  mesh.boundary_node.assign(mesh.nodes.size(), 0);
  for (int i = 0; i < nchain; ++i) {
    mesh.boundary_node[remap[i]] = 1;
    mesh.boundary_edges.push_back({remap[i], remap[(i + 1) % nchain]});
  }
  mesh.level = 0;
  mesh.finalize();
  return mesh;
}

}  // namespace

TriMesh generate_mesh(const Polygon& poly, double target_h) {
  if (!(target_h > 0.0))
    throw std::invalid_argument("generate_mesh: target_h must be positive");
  std::string last_err;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TriMesh mesh;
    try {
      mesh = build_attempt(poly, target_h, seed);
    } catch (const std::exception& ex) {
      last_err = ex.what();
      continue;
    }
    MeshQuality q = mesh_quality(mesh);
    if (!q.conforming || !q.boundary_consistent || !q.all_ccw) {
      last_err = "mesh validation: connectivity";
      continue;
    }
    if (q.min_angle_deg < 15.0 - 1e-9) {
      last_err = "mesh validation: min angle " + std::to_string(q.min_angle_deg);
      continue;
    }
    if (std::abs(q.total_area - poly.signed_area()) >
        1e-10 * poly.signed_area()) {
      last_err = "mesh validation: area mismatch";
      continue;
    }
    if (q.mean_edge < 0.5 * target_h || q.mean_edge > 2.0 * target_h) {
      last_err = "mesh validation: edge length scale";
      continue;
    }
    return mesh;
  }
  throw std::runtime_error("generate_mesh failed for family '" + poly.family() +
                           "': " + last_err);
}

TriMesh refine_uniform(const TriMesh& mesh) {
  TriMesh out;
  out.nodes = mesh.nodes;
  out.boundary_node = mesh.boundary_node;
  out.level = mesh.level + 1;

  std::map<std::pair<int, int>, int> mid;
  std::map<std::pair<int, int>, char> chain;
  for (const auto& e : mesh.boundary_edges)
    chain[{std::min(e[0], e[1]), std::max(e[0], e[1])}] = 1;

  auto midpoint = [&](int u, int v) {
    auto key = std::make_pair(std::min(u, v), std::max(u, v));
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(0.5 * (mesh.nodes[u] + mesh.nodes[v]));
    out.boundary_node.push_back(chain.count(key) ? 1 : 0);
    mid[key] = id;
    return id;
  };

  for (const auto& t : mesh.triangles) {
    int a = t[0], b = t[1], c = t[2];
    int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }

  for (const auto& e : mesh.boundary_edges) {
    int m = midpoint(e[0], e[1]);
    out.boundary_edges.push_back({e[0], m});
    out.boundary_edges.push_back({m, e[1]});
  }

  out.finalize();
  return out;
}

BaryStencil locate_point(const TriMesh& mesh, Vec2 p) {
  auto cell_of = [&](double v, double lo, int n) {
    return std::clamp(static_cast<int>(std::floor((v - lo) / mesh.grid_cell)),
                      0, n - 1);
  };
  auto try_tri = [&](int t, double tol, BaryStencil& out) {
    const auto& tv = mesh.triangles[t];
    Vec2 a = mesh.nodes[tv[0]], b = mesh.nodes[tv[1]], c = mesh.nodes[tv[2]];
    double denom = cross(b - a, c - a);
    if (denom <= 0.0) return false;
    double w0 = cross(b - p, c - p) / denom;
    double w1 = cross(c - p, a - p) / denom;
    double w2 = cross(a - p, b - p) / denom;
    if (w0 < -tol || w1 < -tol || w2 < -tol) return false;
    double s0 = std::max(w0, 0.0), s1 = std::max(w1, 0.0), s2 = std::max(w2, 0.0);
    double s = s0 + s1 + s2;
    out.triangle = t;
    out.nodes = tv;
    out.weights = {s0 / s, s1 / s, s2 / s};
    return true;
  };

  int cx = cell_of(p.x, mesh.grid_lo.x, mesh.grid_nx);
  int cy = cell_of(p.y, mesh.grid_lo.y, mesh.grid_ny);
  BaryStencil out;
  for (double tol : {1e-12, 1e-9}) {
    for (int iy = std::max(0, cy - 1); iy <= std::min(mesh.grid_ny - 1, cy + 1);
         ++iy)
      for (int ix = std::max(0, cx - 1);
           ix <= std::min(mesh.grid_nx - 1, cx + 1); ++ix)
        for (int t : mesh.grid_bins[static_cast<size_t>(iy) * mesh.grid_nx + ix])
          if (try_tri(t, tol, out)) return out;
  }
  for (int t = 0; t < mesh.triangle_count(); ++t)
    if (try_tri(t, 1e-9, out)) return out;
  throw std::runtime_error("locate_point: point (" + std::to_string(p.x) + ", " +
                           std::to_string(p.y) + ") is not inside the mesh");
}

double interpolate(const TriMesh& mesh, std::span<const double> u, Vec2 p) {
  if (u.size() != mesh.nodes.size())
    throw std::invalid_argument("interpolate: value vector size mismatch");
  BaryStencil s = locate_point(mesh, p);
  return s.weights[0] * u[s.nodes[0]] + s.weights[1] * u[s.nodes[1]] +
         s.weights[2] * u[s.nodes[2]];
}

}  // namespace masl
