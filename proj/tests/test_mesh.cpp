#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "masl/io.hpp"
#include "masl/mesh.hpp"
#include "masl/parallel.hpp"

using namespace masl;

namespace {

TriMesh two_triangle_square() {
  TriMesh m;
  m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  m.boundary_node = {1, 1, 1, 1};
  m.boundary_edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  m.finalize();
  return m;
}

TriMesh read_mesh_str(const std::string& s) {
  std::stringstream ss(s);
  return read_mesh(ss);
}

}  // namespace

TEST_CASE("handmade two-triangle unit square") {
  TriMesh m = two_triangle_square();
  CHECK(average_edge_length(m) ==
        doctest::Approx((4.0 + std::sqrt(2.0)) / 5.0).epsilon(1e-14));
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.interior_count() == 0);

  // x^2 sampled at the corners: mid-diagonal interpolation averages the
  // diagonal endpoints instead of reproducing 0.25
  std::vector<double> u = {0.0, 1.0, 1.0, 0.0};
  CHECK(interpolate(m, u, {0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(interpolate(m, u, {1.0, 0.0}) == doctest::Approx(1.0));

  // affine data is reproduced exactly anywhere
  std::vector<double> aff(4);
  for (int i = 0; i < 4; ++i)
    aff[i] = 2.0 + 3.0 * m.nodes[i].x - 0.7 * m.nodes[i].y;
  CHECK(interpolate(m, aff, {0.37, 0.81}) ==
        doctest::Approx(2.0 + 3.0 * 0.37 - 0.7 * 0.81).epsilon(1e-14));

  BaryStencil b = locate_point(m, {1, 0});
  double w = 0.0;
  for (int k = 0; k < 3; ++k)
    if (b.nodes[k] == 1) w = b.weights[k];
  CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generate_mesh: validation passes on every domain family") {
  struct Case {
    const char* fam;
    double c, h0;
  } cases[] = {
      {"l_shape", 0, 0.25},           {"square", 0, 0.4},
      {"unit_square_test", 0, 0.3},   {"disc_union_square", 0, 0.19},
      {"heart", 0, 0.12},             {"bent_square_convex", 3, 0.16},
      {"bent_square_concave", 3, 0.16},
  };
  for (auto cse : cases) {
    CAPTURE(cse.fam);
    Polygon poly = build_domain({cse.fam, cse.c}, cse.h0);
    TriMesh mesh = generate_mesh(poly, cse.h0);
    MeshQuality q = mesh_quality(mesh);
    CHECK(q.conforming);
    CHECK(q.boundary_consistent);
    CHECK(q.all_ccw);
    CHECK(q.min_angle_deg > 15.0);
    CHECK(q.total_area ==
          doctest::Approx(poly.signed_area()).epsilon(1e-10));
    CHECK(q.mean_edge > 0.5 * cse.h0);
    CHECK(q.mean_edge < 2.0 * cse.h0);
    CHECK(q.min_edge > 0.0);
    CHECK(q.max_edge < 3.0 * cse.h0);

    // every polygon vertex appears as a mesh node
    for (const Vec2& pv : poly.vertices()) {
      bool found = false;
      for (const Vec2& nd : mesh.nodes)
        if (dist(nd, pv) < 1e-12) {
          found = true;
          break;
        }
      CHECK(found);
    }
    // boundary flags match the polygon classification of the node position
    for (int i = 0; i < mesh.node_count(); ++i) {
      bool onb = poly.classify(mesh.nodes[i]) == Region::Boundary;
      CHECK(bool(mesh.boundary_node[i]) == onb);
    }
    CHECK(mesh.interior_count() > 0);
    CHECK(mesh.interior_count() < mesh.node_count());
  }
  // node budget sanity on the base level used by most runs
  TriMesh L = generate_mesh(build_domain({"l_shape", 0.0}, 0.25), 0.25);
  CHECK(L.node_count() >= 40);
  CHECK(L.node_count() <= 110);
}

TEST_CASE("refine_uniform: counts, boundary midpoints, edge halving") {
  Polygon poly = build_domain({"l_shape", 0.0}, 0.25);
  TriMesh m0 = generate_mesh(poly, 0.25);
  TriMesh m1 = refine_uniform(m0);
  CHECK(m1.level == m0.level + 1);
  CHECK(m1.triangle_count() == 4 * m0.triangle_count());

  std::set<std::pair<int, int>> edges;
  for (const auto& t : m0.triangles)
    for (int k = 0; k < 3; ++k)
      edges.insert({std::min(t[k], t[(k + 1) % 3]),
                    std::max(t[k], t[(k + 1) % 3])});
  CHECK(m1.node_count() == m0.node_count() + int(edges.size()));

  double h0 = average_edge_length(m0), h1 = average_edge_length(m1);
  CHECK(h1 == doctest::Approx(0.5 * h0).epsilon(0.05));

  MeshQuality q0 = mesh_quality(m0), q1 = mesh_quality(m1);
  CHECK(q1.conforming);
  CHECK(q1.boundary_consistent);
  CHECK(q1.all_ccw);
  CHECK(q1.total_area == doctest::Approx(q0.total_area).epsilon(1e-12));
  // red refinement produces four similar children: the angle set is preserved
  CHECK(q1.min_angle_deg == doctest::Approx(q0.min_angle_deg).epsilon(1e-9));
  CHECK(m1.boundary_edges.size() == 2 * m0.boundary_edges.size());
  for (int i = 0; i < m1.node_count(); ++i)
    if (m1.boundary_node[i])
      CHECK(poly.classify(m1.nodes[i]) == Region::Boundary);

  // a second refinement keeps going
  TriMesh m2 = refine_uniform(m1);
  CHECK(m2.triangle_count() == 16 * m0.triangle_count());
  CHECK(m2.level == 2);
}

TEST_CASE("locate_point: convex weights reproduce coordinates") {
  Polygon poly = build_domain({"disc_union_square", 0.0}, 0.19);
  TriMesh mesh = refine_uniform(generate_mesh(poly, 0.19));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, mesh.triangle_count() - 1);
  std::uniform_real_distribution<double> uu(0.0, 1.0);
  for (int it = 0; it < 300; ++it) {
    auto t = mesh.triangles[pick(rng)];
    double a = uu(rng), b = uu(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    Vec2 p = a * mesh.nodes[t[0]] + b * mesh.nodes[t[1]] +
             (1.0 - a - b) * mesh.nodes[t[2]];
    BaryStencil bs = locate_point(mesh, p);
    double wsum = 0.0;
    Vec2 rec{0, 0};
    for (int k = 0; k < 3; ++k) {
      CHECK(bs.weights[k] >= 0.0);
      wsum += bs.weights[k];
      rec = rec + bs.weights[k] * mesh.nodes[bs.nodes[k]];
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dist(rec, p) < 1e-9);
  }
  CHECK_THROWS(locate_point(mesh, {50, 50}));
}

TEST_CASE("mesh file round trip") {
  Polygon poly = build_domain({"l_shape", 0.0}, 0.25);
  TriMesh mesh = generate_mesh(poly, 0.25);
  std::stringstream ss;
  write_mesh(ss, mesh);
  TriMesh back = read_mesh(ss);
  REQUIRE(back.node_count() == mesh.node_count());
  REQUIRE(back.triangle_count() == mesh.triangle_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    CHECK(back.nodes[i].x == mesh.nodes[i].x);  // %.17g round-trips exactly
    CHECK(back.nodes[i].y == mesh.nodes[i].y);
    CHECK(back.boundary_node[i] == mesh.boundary_node[i]);
  }
  CHECK(back.triangles == mesh.triangles);
  std::set<std::pair<int, int>> a, b;
  for (auto e : mesh.boundary_edges) a.insert({e[0], e[1]});
  for (auto e : back.boundary_edges) b.insert({e[0], e[1]});
  CHECK(a == b);
}

TEST_CASE("read_mesh rejects malformed input") {
  // smallest valid mesh parses
  CHECK_NOTHROW(read_mesh_str("mesh 3 1\n0 0 1\n1 0 1\n0 1 1\n0 1 2\n"));
  // wrong magic
  CHECK_THROWS(read_mesh_str("grid 3 1\n0 0 1\n1 0 1\n0 1 1\n0 1 2\n"));
  // boundary flag outside {0,1}
  CHECK_THROWS(read_mesh_str("mesh 3 1\n0 0 1\n1 0 1\n0 1 2\n0 1 2\n"));
  // clockwise triangle
  CHECK_THROWS(read_mesh_str("mesh 3 1\n0 0 1\n1 0 1\n0 1 1\n0 2 1\n"));
  // node index out of range
  CHECK_THROWS(read_mesh_str("mesh 3 1\n0 0 1\n1 0 1\n0 1 1\n0 1 5\n"));
  // chain endpoint not flagged as boundary
  CHECK_THROWS(read_mesh_str("mesh 3 1\n0 0 1\n1 0 0\n0 1 1\n0 1 2\n"));
  // truncated
  CHECK_THROWS(read_mesh_str("mesh 3 1\n0 0 1\n1 0 1\n"));
}

TEST_CASE("polygon and solution file formats") {
  Polygon poly = build_domain({"heart", 0.0}, 0.12);
  std::stringstream ss;
  write_polygon(ss, poly);
  Polygon back = read_polygon(ss, 0.12);
  REQUIRE(back.vertices().size() == poly.vertices().size());
  for (size_t i = 0; i < poly.vertices().size(); ++i) {
    CHECK(back.vertices()[i].x == poly.vertices()[i].x);
    CHECK(back.vertices()[i].y == poly.vertices()[i].y);
  }
  CHECK(back.signed_area() == doctest::Approx(poly.signed_area()));

  TriMesh m = two_triangle_square();
  std::vector<double> u = {0.0, 1.0, 2.0, 3.0};
  std::stringstream so;
  write_solution(so, m, u);
  std::string line;
  std::getline(so, line);
  CHECK(line == "solution 4");
  std::getline(so, line);
  CHECK(line == "0 0 0");
  std::getline(so, line);
  CHECK(line == "1 0 1");

  std::vector<double> wrong_size(3, 0.0);
  std::stringstream sink;
  CHECK_THROWS(write_solution(sink, m, wrong_size));

  std::stringstream pb("polygon 2\n0 0\n1 1\n");
  CHECK_THROWS(read_polygon(pb, 0.1));
  std::stringstream pb2("poly 3\n0 0\n1 0\n0 1\n");
  CHECK_THROWS(read_polygon(pb2, 0.1));
}

TEST_CASE("mesh generation is deterministic") {
  TriMesh a = generate_mesh(build_domain({"l_shape", 0.0}, 0.25), 0.25);
  TriMesh b = generate_mesh(build_domain({"l_shape", 0.0}, 0.25), 0.25);
  REQUIRE(a.node_count() == b.node_count());
  for (int i = 0; i < a.node_count(); ++i) {
    CHECK(a.nodes[i].x == b.nodes[i].x);
    CHECK(a.nodes[i].y == b.nodes[i].y);
  }
  CHECK(a.triangles == b.triangles);
  CHECK(a.boundary_node == b.boundary_node);
}

TEST_CASE("parallel_for: coverage, invariance, exceptions") {
  set_thread_count(4);
  std::vector<int> hits(1000, 0);
  parallel_for(1000, [&](int i) { hits[i]++; });
  for (int v : hits) CHECK(v == 1);

  set_thread_count(1);
  std::vector<int> hits1(1000, 0);
  parallel_for(1000, [&](int i) { hits1[i]++; });
  CHECK(hits == hits1);

  set_thread_count(0);
  CHECK(thread_count() >= 1);
  CHECK_THROWS(set_thread_count(-2));
  CHECK_THROWS(parallel_for(1000, [](int i) {
    if (i == 997) throw std::runtime_error("boom");
  }));
}
