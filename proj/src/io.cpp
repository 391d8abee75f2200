#include "masl/io.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace masl {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

[[noreturn]] void bad(const std::string& what) {
  throw std::runtime_error("file format: " + what);
}

}  // namespace

void write_polygon(std::ostream& os, const Polygon& poly) {
  const auto& v = poly.vertices();
  os << "polygon " << v.size() << "\n";
  for (const Vec2& p : v)
    os << fmt("%.17g", p.x) << " " << fmt("%.17g", p.y) << "\n";
}

Polygon read_polygon(std::istream& is, double sampling_h) {
  std::string tag;
  size_t n = 0;
  if (!(is >> tag >> n) || tag != "polygon") bad("expected 'polygon <V>'");
  if (n < 3) bad("polygon needs at least 3 vertices");
  std::vector<Vec2> verts(n);
  for (size_t i = 0; i < n; ++i)
    if (!(is >> verts[i].x >> verts[i].y)) bad("truncated polygon vertices");
  return Polygon::from_vertices(std::move(verts), "custom", sampling_h);
}

void write_mesh(std::ostream& os, const TriMesh& mesh) {
  os << "mesh " << mesh.node_count() << " " << mesh.triangle_count() << "\n";
  for (int i = 0; i < mesh.node_count(); ++i)
    os << fmt("%.17g", mesh.nodes[i].x) << " " << fmt("%.17g", mesh.nodes[i].y)
       << " " << int(mesh.boundary_node[i]) << "\n";
  for (const auto& t : mesh.triangles)
    os << t[0] << " " << t[1] << " " << t[2] << "\n";
}

TriMesh read_mesh(std::istream& is) {
  std::string tag;
  int n = 0, t = 0;
  if (!(is >> tag >> n >> t) || tag != "mesh") bad("expected 'mesh <N> <T>'");
  if (n < 3 || t < 1) bad("mesh too small");
  TriMesh mesh;
  mesh.nodes.resize(n);
  mesh.boundary_node.resize(n);
  for (int i = 0; i < n; ++i) {
    int b = 0;
    if (!(is >> mesh.nodes[i].x >> mesh.nodes[i].y >> b)) bad("truncated nodes");
    if (b != 0 && b != 1) bad("boundary flag must be 0 or 1");
    mesh.boundary_node[i] = static_cast<std::uint8_t>(b);
  }
  mesh.triangles.resize(t);
  for (int i = 0; i < t; ++i) {
    auto& tri = mesh.triangles[i];
    if (!(is >> tri[0] >> tri[1] >> tri[2])) bad("truncated triangles");
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || tri[k] >= n) bad("triangle index out of range");
    Vec2 a = mesh.nodes[tri[0]], b2 = mesh.nodes[tri[1]], c = mesh.nodes[tri[2]];
    if (cross(b2 - a, c - a) <= 0.0) bad("triangle not CCW");
  }

  // Rebuild the boundary chain: edges with a single incident triangle,
  // directed as in that triangle (interior on the left), linked into loops.
  std::map<std::pair<int, int>, int> count;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      int u = tri[k], v = tri[(k + 1) % 3];
      count[{std::min(u, v), std::max(u, v)}]++;
    }
  std::map<int, int> succ;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      int u = tri[k], v = tri[(k + 1) % 3];
      if (count[{std::min(u, v), std::max(u, v)}] == 1) {
        if (succ.count(u)) bad("boundary is not a disjoint union of loops");
        succ[u] = v;
      }
    }
  std::map<int, char> used;
  while (used.size() < succ.size()) {
    int start = -1;
    for (const auto& [u, v] : succ)
      if (!used.count(u)) {
        start = u;
        break;
      }
    int cur = start;
    do {
      auto it = succ.find(cur);
      if (it == succ.end()) bad("boundary chain is not closed");
      mesh.boundary_edges.push_back({cur, it->second});
      used[cur] = 1;
      cur = it->second;
    } while (cur != start);
  }
  for (const auto& e : mesh.boundary_edges)
    if (!mesh.boundary_node[e[0]] || !mesh.boundary_node[e[1]])
      bad("boundary chain endpoint not flagged as boundary");
  int flagged = 0;
  for (auto b : mesh.boundary_node) flagged += b;
  if (flagged != static_cast<int>(succ.size()))
    bad("boundary flags do not match the boundary chain");

  mesh.finalize();
  return mesh;
}

void write_solution(std::ostream& os, const TriMesh& mesh,
                    std::span<const double> u) {
  if (u.size() != mesh.nodes.size())
    throw std::invalid_argument("write_solution: vector size mismatch");
  os << "solution " << mesh.node_count() << "\n";
  for (int i = 0; i < mesh.node_count(); ++i)
    os << fmt("%.17g", mesh.nodes[i].x) << " " << fmt("%.17g", mesh.nodes[i].y)
       << " " << fmt("%.17g", u[i]) << "\n";
}

void write_csv(std::ostream& os, const std::vector<StudyRow>& rows) {
  os << "experiment,level,dofs,h,m,rel_linf_error,newton_iters,converged,"
        "wall_time_s\n";
  for (const StudyRow& r : rows) {
    os << r.experiment << "," << r.level << "," << r.dofs << ","
       << fmt("%.9e", r.h) << "," << fmt("%g", r.multiplier) << ",";
    if (r.rel_error) os << fmt("%.5e", *r.rel_error);
    os << "," << r.newton_iters << "," << (r.converged ? 1 : 0) << ","
       << fmt("%.3f", r.wall_s) << "\n";
  }
}

}  // namespace masl
