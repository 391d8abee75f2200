#pragma once

#include <functional>
#include <optional>
#include <string>

#include "masl/solver.hpp"

namespace masl {

struct ScalarField {
  std::string id;
  std::function<double(Vec2)> fn;
};

// A named convergence experiment: domain(s), data, default discretization
// parameters. The bent-square entry carries seven domains run in sequence;
// all other entries have exactly one.
struct Experiment {
  std::string name;
  std::vector<DomainSpec> domains;
  std::vector<std::string> domain_labels;  // row labels, parallel to domains
  double h0 = 0.0;
  std::vector<int> levels;
  std::vector<double> multipliers;
  int n_theta = 32;
  ClipMode clip = ClipMode::Asymmetric;
  NewtonConfig newton;
  ScalarField f;
  ScalarField g;
  std::optional<ScalarField> reference;
  // Node filter for the error norm; empty = every node. Strict inequalities,
  // evaluated on node coordinates.
  std::function<bool(Vec2)> omega;
  std::string omega_desc;
};

const std::vector<Experiment>& catalog();

// Accepts a catalog name, or a domain label like "bent-square-3" to select a
// single member of a family. domain_index is -1 when the whole family runs.
struct ExperimentSelection {
  const Experiment* experiment = nullptr;
  int domain_index = -1;
};
ExperimentSelection find_experiment(const std::string& name);

// max_over_omega |u - ref| / max_over_omega |ref| on mesh nodes.
double rel_linf_error(const TriMesh& mesh, std::span<const double> u,
                      const std::function<double(Vec2)>& ref,
                      const std::function<bool(Vec2)>& omega);

struct StudyOptions {
  std::optional<double> h0;
  std::optional<std::vector<int>> levels;
  std::optional<std::vector<double>> multipliers;
  std::optional<int> n_theta;
  std::optional<ClipMode> clip;
  std::optional<NewtonConfig> newton;
  int domain_index = -1;  // restrict a family to one member
  bool timings = true;    // false writes wall_time_s as zero (reproducible)
};

struct StudyRow {
  std::string experiment;
  int level = 0;
  int dofs = 0;
  double h = 0.0;
  double multiplier = 0.0;
  std::optional<double> rel_error;
  int newton_iters = 0;
  bool converged = false;
  double wall_s = 0.0;
};

// Runs levels x multipliers for each selected domain. Meshes are built once
// per domain at h0 and refined incrementally. Non-convergence is recorded in
// the row and the sweep continues.
std::vector<StudyRow> run_study(const Experiment& exp,
                                const StudyOptions& options);

// Single solve helper used by the CLI and bindings.
struct SolveResult {
  TriMesh mesh;
  std::vector<double> u;
  NewtonReport report;
  std::optional<double> rel_error;
  double h = 0.0;
};
SolveResult solve_experiment(const Experiment& exp, int domain_index, int level,
                             double multiplier, const StudyOptions& options);

}  // namespace masl
