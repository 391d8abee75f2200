#include "masl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace masl {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

Experiment make_quartic_lshape() {
  Experiment e;
  e.name = "quartic-lshape";
  e.domains = {{"l_shape", 0.0}};
  e.domain_labels = {e.name};
  e.h0 = 0.25;
  e.levels = {0, 1, 2, 3};
  e.multipliers = {2, 4, 8, 16, 32, 64};
  auto exact = [](Vec2 p) {
    double r2 = p.x * p.x + p.y * p.y;
    return r2 * r2;
  };
  e.f = {"8*sqrt(3)*|x|^2", [](Vec2 p) {
           return 8.0 * kSqrt3 * (p.x * p.x + p.y * p.y);
         }};
  e.g = {"|x|^4", exact};
  e.reference = ScalarField{"|x|^4", exact};
  e.omega_desc = "whole domain";
  return e;
}

Experiment make_bakelman() {
  Experiment e;
  e.name = "bakelman-disc-square";
  e.domains = {{"disc_union_square", 0.0}};
  e.domain_labels = {e.name};
  e.h0 = 0.19;
  e.levels = {0, 1, 2, 3};
  e.multipliers = {2, 4, 8, 16, 32, 64};
  e.f = {"0", [](Vec2) { return 0.0; }};
  // Boundary data x1^4 - 1 except on the segment {1} x (0,1), where it is
  // x2*(1 - x2); the mismatch drives a boundary layer near that segment.
  e.g = {"x1^4-1 except x2*(1-x2) on {1}x(0,1)", [](Vec2 p) {
           if (p.x >= 1.0 - 1e-9) return p.y * (1.0 - p.y);
           return p.x * p.x * p.x * p.x - 1.0;
         }};
  e.reference = ScalarField{"x1^4-1", [](Vec2 p) {
                              return p.x * p.x * p.x * p.x - 1.0;
                            }};
  e.omega = [](Vec2 p) { return p.x < 0.95; };
  e.omega_desc = "x1 < 0.95";
  return e;
}

Experiment make_nonconvex_lshape() {
  Experiment e;
  e.name = "nonconvex-lshape";
  e.domains = {{"l_shape", 0.0}};
  e.domain_labels = {e.name};
  e.h0 = 0.25;
  e.levels = {0, 1, 2, 3};
  e.multipliers = {2, 4, 8, 16, 32, 64};
  e.f = {"0", [](Vec2) { return 0.0; }};
  e.g = {"x1^4-1 except x2*(1-x2) on {-1}x(0,1)", [](Vec2 p) {
           if (p.x <= -1.0 + 1e-9) return p.y * (1.0 - p.y);
           return p.x * p.x * p.x * p.x - 1.0;
         }};
  e.reference = ScalarField{"x1^4-1", [](Vec2 p) {
                              return p.x * p.x * p.x * p.x - 1.0;
                            }};
  e.omega = [](Vec2 p) { return p.x > -0.95; };
  e.omega_desc = "x1 > -0.95";
  return e;
}

Experiment make_heart() {
  Experiment e;
  e.name = "heart";
  e.domains = {{"heart", 0.0}};
  e.domain_labels = {e.name};
  e.h0 = 0.12;
  e.levels = {0, 1, 2, 3};
  e.multipliers = {8};
  e.f = {"1", [](Vec2) { return 1.0; }};
  e.g = {"0", [](Vec2) { return 0.0; }};
  e.omega_desc = "no reference";
  return e;
}

Experiment make_bent_square() {
  Experiment e;
  e.name = "bent-square";
  e.domains = {{"bent_square_convex", 3.0},   {"bent_square_convex", 10.0},
               {"bent_square_convex", 100.0}, {"square", 0.0},
               {"bent_square_concave", 100.0}, {"bent_square_concave", 10.0},
               {"bent_square_concave", 3.0}};
  for (int i = 1; i <= 7; ++i)
    e.domain_labels.push_back("bent-square-" + std::to_string(i));
  e.h0 = 0.16;
  e.levels = {0, 1, 2, 3};
  e.multipliers = {16};
  e.f = {"0", [](Vec2) { return 0.0; }};
  // Wedge split by the diagonals: the convex piece x2^2-1 on the left/right
  // faces, the concave piece 1-x1^2 on top/bottom. Both pieces agree at the
  // four corners (+-1,+-1), so g is continuous on each domain boundary, and
  // x2^2-1 is the convex envelope of this data on the square.
  e.g = {"x2^2-1 if x1^2>x2^2 else 1-x1^2", [](Vec2 p) {
           return p.x * p.x > p.y * p.y ? p.y * p.y - 1.0 : 1.0 - p.x * p.x;
         }};
  e.reference = ScalarField{"x2^2-1", [](Vec2 p) { return p.y * p.y - 1.0; }};
  e.omega = [](Vec2 p) {
    return p.x > -0.75 && p.x < 0.75 && p.y > -0.75 && p.y < 0.75;
  };
  e.omega_desc = "(-3/4,3/4)^2";
  return e;
}

}  // namespace

const std::vector<Experiment>& catalog() {
  static const std::vector<Experiment> exps = [] {
    std::vector<Experiment> v;
    v.push_back(make_quartic_lshape());
    v.push_back(make_bakelman());
    v.push_back(make_nonconvex_lshape());
    v.push_back(make_heart());
    v.push_back(make_bent_square());
    return v;
  }();
  return exps;
}

ExperimentSelection find_experiment(const std::string& name) {
  for (const Experiment& e : catalog()) {
    if (e.name == name) return {&e, -1};
    for (size_t i = 0; i < e.domain_labels.size(); ++i)
      if (e.domain_labels[i] == name && e.domain_labels[i] != e.name)
        return {&e, static_cast<int>(i)};
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

double rel_linf_error(const TriMesh& mesh, std::span<const double> u,
                      const std::function<double(Vec2)>& ref,
                      const std::function<bool(Vec2)>& omega) {
  if (u.size() != mesh.nodes.size())
    throw std::invalid_argument("rel_linf_error: vector size mismatch");
  double num = 0.0, den = 0.0;
  int used = 0;
  for (int i = 0; i < mesh.node_count(); ++i) {
    Vec2 p = mesh.nodes[i];
    if (omega && !omega(p)) continue;
    double r = ref(p);
    num = std::max(num, std::abs(u[i] - r));
    den = std::max(den, std::abs(r));
    ++used;
  }
  if (used == 0) throw std::runtime_error("rel_linf_error: no nodes selected");
  if (den == 0.0) throw std::runtime_error("rel_linf_error: zero reference");
  return num / den;
}

namespace {

struct ResolvedOptions {
  double h0;
  std::vector<int> levels;
  std::vector<double> multipliers;
  int n_theta;
  ClipMode clip;
  NewtonConfig newton;
};

ResolvedOptions resolve(const Experiment& exp, const StudyOptions& opt) {
  ResolvedOptions r;
  r.h0 = opt.h0.value_or(exp.h0);
  r.levels = opt.levels.value_or(exp.levels);
  r.multipliers = opt.multipliers.value_or(exp.multipliers);
  r.n_theta = opt.n_theta.value_or(exp.n_theta);
  r.clip = opt.clip.value_or(exp.clip);
  r.newton = opt.newton.value_or(exp.newton);
  if (r.levels.empty() || r.multipliers.empty())
    throw std::invalid_argument("study: empty level or multiplier list");
  for (int l : r.levels)
    if (l < 0 || l > 12) throw std::invalid_argument("study: bad level");
  return r;
}

std::vector<double> sample_field(const TriMesh& mesh, const ScalarField& f) {
  std::vector<double> v(mesh.nodes.size());
  for (int i = 0; i < mesh.node_count(); ++i) v[i] = f.fn(mesh.nodes[i]);
  return v;
}

}  // namespace

SolveResult solve_experiment(const Experiment& exp, int domain_index, int level,
                             double multiplier, const StudyOptions& options) {
  if (domain_index < 0 || domain_index >= static_cast<int>(exp.domains.size()))
    throw std::invalid_argument("solve_experiment: bad domain index");
  ResolvedOptions ropt = resolve(exp, options);
  Polygon poly = build_domain(exp.domains[domain_index], ropt.h0);
  TriMesh mesh = generate_mesh(poly, ropt.h0);
  for (int l = 0; l < level; ++l) mesh = refine_uniform(mesh);

  DirectionSet dirs(ropt.n_theta);
  StencilTable table =
      build_stencils(mesh, poly, dirs, multiplier, ropt.clip);
  std::vector<double> f_nodes = sample_field(mesh, exp.f);
  std::vector<double> g_nodes = sample_field(mesh, exp.g);
  std::vector<double> u = initial_guess(table, f_nodes, g_nodes);
  NewtonReport rep = newton_solve(table, f_nodes, g_nodes, u, ropt.newton);

  SolveResult out;
  out.h = table.mesh_h;
  out.report = rep;
  if (exp.reference)
    out.rel_error = rel_linf_error(mesh, u, exp.reference->fn, exp.omega);
  out.mesh = std::move(mesh);
  out.u = std::move(u);
  return out;
}

std::vector<StudyRow> run_study(const Experiment& exp,
                                const StudyOptions& options) {
  ResolvedOptions ropt = resolve(exp, options);
  std::vector<StudyRow> rows;
  int max_level = *std::max_element(ropt.levels.begin(), ropt.levels.end());

  for (size_t di = 0; di < exp.domains.size(); ++di) {
    if (options.domain_index >= 0 &&
        options.domain_index != static_cast<int>(di))
      continue;
    Polygon poly = build_domain(exp.domains[di], ropt.h0);
    std::vector<TriMesh> meshes;
    meshes.push_back(generate_mesh(poly, ropt.h0));
    for (int l = 1; l <= max_level; ++l)
      meshes.push_back(refine_uniform(meshes.back()));

    DirectionSet dirs(ropt.n_theta);
    for (int level : ropt.levels) {
      const TriMesh& mesh = meshes[level];
      std::vector<double> f_nodes = sample_field(mesh, exp.f);
      std::vector<double> g_nodes = sample_field(mesh, exp.g);
      for (double m : ropt.multipliers) {
        auto t0 = std::chrono::steady_clock::now();
        StencilTable table =
            build_stencils(mesh, poly, dirs, m, ropt.clip);
        std::vector<double> u = initial_guess(table, f_nodes, g_nodes);
        NewtonReport rep = newton_solve(table, f_nodes, g_nodes, u, ropt.newton);
        auto t1 = std::chrono::steady_clock::now();

        StudyRow row;
        row.experiment = exp.domain_labels[di];
        row.level = level;
        row.dofs = mesh.node_count();
        row.h = table.mesh_h;
        row.multiplier = m;
        row.newton_iters = rep.iterations;
        row.converged = rep.converged;
        if (exp.reference && rep.converged)
          row.rel_error =
              rel_linf_error(mesh, u, exp.reference->fn, exp.omega);
        row.wall_s = options.timings
                         ? std::chrono::duration<double>(t1 - t0).count()
                         : 0.0;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace masl
