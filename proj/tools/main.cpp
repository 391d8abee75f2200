// Command line front end: mesh generation, single solves and convergence
// studies for the catalog of Monge-Ampere experiments.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "masl/io.hpp"
#include "masl/parallel.hpp"

namespace {

constexpr int kExitBadInput = 3;
constexpr int kExitNoConvergence = 2;

struct CommonOpts {
  int n_theta = 0;            // 0 = experiment default
  double step_tol = 0.0;      // 0 = default
  int max_iter = 0;           // 0 = default
  std::string clip;           // "", "asymmetric", "symmetric"
  int threads = 0;
  bool no_timings = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--ntheta", c.n_theta, "number of stencil directions");
  cmd->add_option("--step-tol", c.step_tol, "Newton step tolerance");
  cmd->add_option("--max-iter", c.max_iter, "Newton iteration cap");
  cmd->add_option("--clip", c.clip, "arm clipping: asymmetric|symmetric")
      ->check(CLI::IsMember({"asymmetric", "symmetric"}));
  cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)");
  cmd->add_flag("--no-timings", c.no_timings,
                "write wall_time_s as zero for reproducible output");
}

void apply_common(const CommonOpts& c, masl::StudyOptions& opt) {
  if (c.n_theta > 0) opt.n_theta = c.n_theta;
  if (!c.clip.empty())
    opt.clip = c.clip == "symmetric" ? masl::ClipMode::Symmetric
                                     : masl::ClipMode::Asymmetric;
  if (c.step_tol > 0.0 || c.max_iter > 0) {
    masl::NewtonConfig cfg;
    if (c.step_tol > 0.0) cfg.step_tol = c.step_tol;
    if (c.max_iter > 0) cfg.max_iter = c.max_iter;
    opt.newton = cfg;
  }
  opt.timings = !c.no_timings;
  masl::set_thread_count(c.threads);
}

// Parses "0..3" or "0,1,2" into a level list.
std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  auto range_pos = s.find("..");
  if (range_pos != std::string::npos) {
    int a = std::stoi(s.substr(0, range_pos));
    int b = std::stoi(s.substr(range_pos + 2));
    if (b < a) throw std::invalid_argument("bad level range '" + s + "'");
    for (int l = a; l <= b; ++l) out.push_back(l);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw std::invalid_argument("empty level list");
  return out;
}

std::vector<double> parse_multipliers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("empty multiplier list");
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
  return os;
}

int cmd_domains() {
  std::cout << "domain families:\n";
  for (const auto& f : masl::domain_families()) std::cout << "  " << f << "\n";
  std::cout << "experiments:\n";
  for (const auto& e : masl::catalog()) {
    std::cout << "  " << e.name << " (h0=" << e.h0 << ")";
    if (e.domain_labels.size() > 1) {
      std::cout << " members:";
      for (const auto& l : e.domain_labels) std::cout << " " << l;
    }
    std::cout << "\n";
  }
  return 0;
}

struct MeshArgs {
  std::string domain, polygon_in, polygon_out, out;
  double c = 0.0;
  double h0 = 0.0;
  int refine = 0;
};

int cmd_mesh(const MeshArgs& a) {
  if (a.domain.empty() == a.polygon_in.empty())
    throw std::invalid_argument("mesh: give exactly one of --domain, --polygon");
  if (!(a.h0 > 0.0)) throw std::invalid_argument("mesh: --h0 must be positive");
  masl::Polygon poly;
  if (!a.domain.empty()) {
    poly = masl::build_domain({a.domain, a.c}, a.h0);
  } else {
    std::ifstream is(a.polygon_in);
    if (!is) throw std::runtime_error("cannot open '" + a.polygon_in + "'");
    poly = masl::read_polygon(is, a.h0);
  }
  if (!a.polygon_out.empty()) {
    auto os = open_out(a.polygon_out);
    masl::write_polygon(os, poly);
  }
  masl::TriMesh mesh = masl::generate_mesh(poly, a.h0);
  for (int l = 0; l < a.refine; ++l) mesh = masl::refine_uniform(mesh);
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    masl::write_mesh(os, mesh);
  }
  masl::MeshQuality q = masl::mesh_quality(mesh);
  std::cout << "nodes " << mesh.node_count() << " triangles "
            << mesh.triangle_count() << " h " << masl::average_edge_length(mesh)
            << " min_angle " << q.min_angle_deg << "\n";
  return 0;
}

struct SolveArgs {
  std::string experiment, out;
  int level = 0;
  double m = 0.0;  // 0 = experiment default
  CommonOpts common;
};

int cmd_solve(const SolveArgs& a) {
  auto sel = masl::find_experiment(a.experiment);
  const masl::Experiment& exp = *sel.experiment;
  int domain_index = sel.domain_index < 0 ? 0 : sel.domain_index;
  masl::StudyOptions opt;
  apply_common(a.common, opt);
  double m = a.m > 0.0 ? a.m : exp.multipliers.front();
  masl::SolveResult r =
      masl::solve_experiment(exp, domain_index, a.level, m, opt);
  std::cout << "experiment " << exp.domain_labels[domain_index] << " level "
            << a.level << " dofs " << r.mesh.node_count() << " h " << r.h
            << " m " << m << " newton " << r.report.iterations << " converged "
            << (r.report.converged ? 1 : 0);
  if (r.rel_error) std::cout << " rel_linf_error " << *r.rel_error;
  std::cout << "\n";
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    masl::write_solution(os, r.mesh, r.u);
  }
  return r.report.converged ? 0 : kExitNoConvergence;
}

struct StudyArgs {
  std::string experiment, out, levels, multipliers;
  double h0 = 0.0;
  CommonOpts common;
};

int cmd_study(const StudyArgs& a) {
  auto sel = masl::find_experiment(a.experiment);
  masl::StudyOptions opt;
  opt.domain_index = sel.domain_index;
  apply_common(a.common, opt);
  if (!a.levels.empty()) opt.levels = parse_levels(a.levels);
  if (!a.multipliers.empty()) opt.multipliers = parse_multipliers(a.multipliers);
  if (a.h0 > 0.0) opt.h0 = a.h0;
  std::vector<masl::StudyRow> rows = masl::run_study(*sel.experiment, opt);
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    masl::write_csv(os, rows);
  } else {
    masl::write_csv(std::cout, rows);
  }
  bool all_converged = true;
  for (const auto& r : rows) all_converged = all_converged && r.converged;
  return all_converged ? 0 : kExitNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wide-stencil Monge-Ampere solver"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value file");

  auto* domains = app.add_subcommand("domains", "list domain families and experiments");

  MeshArgs margs;
  auto* mesh = app.add_subcommand("mesh", "generate or import a mesh");
  mesh->add_option("--domain", margs.domain, "domain family name");
  mesh->add_option("--c", margs.c, "bend parameter for bent squares");
  mesh->add_option("--polygon", margs.polygon_in, "read polygon from file");
  mesh->add_option("--polygon-out", margs.polygon_out, "write sampled polygon");
  mesh->add_option("--h0", margs.h0, "target edge length")->required();
  mesh->add_option("--refine", margs.refine, "uniform refinement levels");
  mesh->add_option("--out", margs.out, "mesh output file");

  SolveArgs sargs;
  auto* solve = app.add_subcommand("solve", "solve one experiment instance");
  solve->add_option("--experiment", sargs.experiment, "experiment name")
      ->required();
  solve->add_option("--level", sargs.level, "refinement level");
  solve->add_option("--m", sargs.m, "stencil radius multiplier");
  solve->add_option("--out", sargs.out, "solution output file");
  add_common(solve, sargs.common);

  StudyArgs targs;
  auto* study = app.add_subcommand("study", "run a convergence study, emit CSV");
  study->add_option("--experiment", targs.experiment, "experiment name")
      ->required();
  study->add_option("--levels", targs.levels, "levels, e.g. 0..3 or 0,2");
  study->add_option("--m", targs.multipliers, "multipliers, e.g. 2,4,8");
  study->add_option("--h0", targs.h0, "override base mesh size");
  study->add_option("--out", targs.out, "CSV output file");
  add_common(study, targs.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (domains->parsed()) return cmd_domains();
    if (mesh->parsed()) return cmd_mesh(margs);
    if (solve->parsed()) return cmd_solve(sargs);
    if (study->parsed()) return cmd_study(targs);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
