#include "masl/wide_stencil.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "masl/parallel.hpp"

namespace masl {

namespace {

StencilArm make_arm(const TriMesh& mesh, Vec2 origin, Vec2 d, double len,
                    bool clipped) {
  StencilArm arm;
  arm.length = len;
  arm.point = origin + len * d;
  arm.on_boundary = clipped;
  arm.interp = locate_point(mesh, arm.point);
  return arm;
}

}  // namespace

StencilTable build_stencils(const TriMesh& mesh, const Polygon& poly,
                            const DirectionSet& dirs, double multiplier,
                            ClipMode clip) {
  if (!(multiplier >= 1.0))
    throw std::invalid_argument("build_stencils: multiplier must be >= 1");
  StencilTable table;
  table.mesh = &mesh;
  table.n_theta = dirs.count;
  table.multiplier = multiplier;
  table.mesh_h = average_edge_length(mesh);
  table.radius = multiplier * table.mesh_h;
  table.clip = clip;
  table.interior_index.assign(mesh.nodes.size(), -1);
  for (int i = 0; i < mesh.node_count(); ++i) {
    if (!mesh.boundary_node[i]) {
      table.interior_index[i] = static_cast<int>(table.interior.size());
      table.interior.push_back(i);
    }
  }
  const int rows = static_cast<int>(table.interior.size());
  table.arms.resize(static_cast<size_t>(rows) * dirs.count);

  const double k = table.radius;
  parallel_for(rows, [&](int row) {
    Vec2 x = mesh.nodes[table.interior[row]];
    for (int j = 0; j < dirs.count; ++j) {
      NodeStencil ns;
      for (int pair = 0; pair < 2; ++pair) {
        Vec2 d = pair == 0 ? dirs.dir[j] : dirs.perp[j];
        Vec2 dneg{-d.x, -d.y};
        double cf = poly.clip_ray(x, d, k);
        double cb = poly.clip_ray(x, dneg, k);
        double lf = cf, lb = cb;
        if (table.clip == ClipMode::Symmetric) lf = lb = std::min(cf, cb);
        bool fwd_clipped = lf >= cf - 1e-12 && cf < k - 1e-12;
        bool bwd_clipped = lb >= cb - 1e-12 && cb < k - 1e-12;
        StencilArm fwd = make_arm(mesh, x, d, lf, fwd_clipped);
        StencilArm bwd = make_arm(mesh, x, dneg, lb, bwd_clipped);
        if (pair == 0) {
          ns.fwd = fwd;
          ns.bwd = bwd;
        } else {
          ns.pfwd = fwd;
          ns.pbwd = bwd;
        }
      }
      table.arms[static_cast<size_t>(row) * dirs.count + j] = ns;
    }
  });
  return table;
}

namespace {

inline double arm_value(const StencilArm& arm, std::span<const double> u) {
  return arm.interp.weights[0] * u[arm.interp.nodes[0]] +
         arm.interp.weights[1] * u[arm.interp.nodes[1]] +
         arm.interp.weights[2] * u[arm.interp.nodes[2]];
}

}  // namespace

double second_difference(double node_value, const StencilArm& fwd,
                         const StencilArm& bwd, std::span<const double> u) {
  double vp = arm_value(fwd, u);
  double vm = arm_value(bwd, u);
  double kp = fwd.length, km = bwd.length, s = kp + km;
  return 2.0 * (vp / (kp * s) - node_value / (kp * km) + vm / (km * s));
}

ResidualResult residual(const StencilTable& table, std::span<const double> u,
                        std::span<const double> f_nodes) {
  const TriMesh& mesh = *table.mesh;
  if (u.size() != mesh.nodes.size() || f_nodes.size() != mesh.nodes.size())
    throw std::invalid_argument("residual: vector size mismatch");
  const int rows = static_cast<int>(table.interior.size());
  ResidualResult res;
  res.values.assign(rows, 0.0);
  res.active_dir.assign(rows, 0);
  res.active_weight.assign(rows, 0.5);
  parallel_for(rows, [&](int row) {
    int node = table.interior[row];
    double ui = u[node];
    double fi = f_nodes[node];
    double best = -std::numeric_limits<double>::infinity();
    int best_j = 0;
    double best_lam = 0.5;
    for (int j = 0; j < table.n_theta; ++j) {
      const NodeStencil& ns = table.at(row, j);
      double d1 = second_difference(ui, ns.fwd, ns.bwd, u);
      double d2 = second_difference(ui, ns.pfwd, ns.pbwd, u);
      SplitMax sm = split_max(d1, d2, fi);
      if (sm.value > best) {
        best = sm.value;
        best_j = j;
        best_lam = sm.weight;
      }
    }
    res.values[row] = best;
    res.active_dir[row] = best_j;
    res.active_weight[row] = best_lam;
  });
  return res;
}

FrozenSystem assemble_frozen(const StencilTable& table,
                             std::span<const double> f_nodes,
                             std::span<const int> active_dir,
                             std::span<const double> active_weight,
                             std::span<const double> boundary_values) {
  const int rows = static_cast<int>(table.interior.size());
  if (static_cast<int>(active_dir.size()) != rows ||
      static_cast<int>(active_weight.size()) != rows)
    throw std::invalid_argument("assemble_frozen: active set size mismatch");
  if (boundary_values.size() != table.mesh->nodes.size() ||
      f_nodes.size() != table.mesh->nodes.size())
    throw std::invalid_argument("assemble_frozen: vector size mismatch");

  std::vector<std::vector<Eigen::Triplet<double>>> row_entries(rows);
  Eigen::VectorXd c(rows);

  parallel_for(rows, [&](int row) {
    auto& entries = row_entries[row];
    int node = table.interior[row];
    int j = active_dir[row];
    double lam = active_weight[row];
    if (j < 0 || j >= table.n_theta || lam < 0.0 || lam > 1.0)
      throw std::invalid_argument("assemble_frozen: invalid active control");
    const NodeStencil& ns = table.at(row, j);
    double diag = 0.0;
    double cst = f_nodes[node] * std::sqrt(lam * (1.0 - lam));

    auto add_pair = [&](double t, const StencilArm& fwd, const StencilArm& bwd) {
      if (t == 0.0) return;
      double kp = fwd.length, km = bwd.length, s = kp + km;
      diag += 2.0 * t / (kp * km);
      for (const StencilArm* arm : {&fwd, &bwd}) {
        double coef = -2.0 * t / (arm->length * s);
        for (int l = 0; l < 3; ++l) {
          double w = arm->interp.weights[l];
          if (w == 0.0) continue;
          int col_node = arm->interp.nodes[l];
          int col = table.interior_index[col_node];
          if (col >= 0)
            entries.emplace_back(row, col, coef * w);
          else
            cst += coef * w * boundary_values[col_node];
        }
      }
    };
    add_pair(lam, ns.fwd, ns.bwd);
    add_pair(1.0 - lam, ns.pfwd, ns.pbwd);
    entries.emplace_back(row, row, diag);
    c[row] = cst;
  });

  std::vector<Eigen::Triplet<double>> triplets;
  size_t total = 0;
  for (const auto& e : row_entries) total += e.size();
  triplets.reserve(total);
  for (const auto& e : row_entries)
    triplets.insert(triplets.end(), e.begin(), e.end());

  FrozenSystem sys;
  sys.matrix.resize(rows, rows);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.constant = std::move(c);
  return sys;
}

}  // namespace masl
