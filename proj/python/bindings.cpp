#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "masl/io.hpp"
#include "masl/parallel.hpp"

namespace py = pybind11;
using namespace masl;

namespace {

TriMesh make_mesh(const std::string& family, double c, double h0, int refine) {
  Polygon poly = build_domain({family, c}, h0);
  TriMesh mesh = generate_mesh(poly, h0);
  for (int l = 0; l < refine; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

py::dict row_to_dict(const StudyRow& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["level"] = r.level;
  d["dofs"] = r.dofs;
  d["h"] = r.h;
  d["m"] = r.multiplier;
  d["rel_linf_error"] = r.rel_error ? py::object(py::float_(*r.rel_error))
                                    : py::object(py::none());
  d["newton_iters"] = r.newton_iters;
  d["converged"] = r.converged;
  d["wall_time_s"] = r.wall_s;
  return d;
}

}  // namespace

PYBIND11_MODULE(_masl, m) {
  m.doc() = "wide-stencil Monge-Ampere solver";

  py::class_<TriMesh>(m, "TriMesh")
      .def_property_readonly("level", [](const TriMesh& t) { return t.level; })
      .def("node_count", &TriMesh::node_count)
      .def("triangle_count", &TriMesh::triangle_count)
      .def("interior_count", &TriMesh::interior_count)
      .def("total_area", &TriMesh::total_area)
      .def("nodes",
           [](const TriMesh& t) {
             std::vector<std::pair<double, double>> out;
             for (const Vec2& p : t.nodes) out.emplace_back(p.x, p.y);
             return out;
           })
      .def("triangles", [](const TriMesh& t) { return t.triangles; })
      .def("boundary_flags",
           [](const TriMesh& t) {
             return std::vector<int>(t.boundary_node.begin(),
                                     t.boundary_node.end());
           })
      .def("average_edge_length",
           [](const TriMesh& t) { return average_edge_length(t); })
      .def("refined", [](const TriMesh& t) { return refine_uniform(t); })
      .def("interpolate", [](const TriMesh& t, std::vector<double> u, double x,
                             double y) {
        return interpolate(t, u, {x, y});
      });

  m.def("domain_families", &domain_families);
  m.def(
      "domain_polygon",
      [](const std::string& family, double c, double sampling_h) {
        Polygon poly = build_domain({family, c}, sampling_h);
        std::vector<std::pair<double, double>> out;
        for (const Vec2& p : poly.vertices()) out.emplace_back(p.x, p.y);
        return out;
      },
      py::arg("family"), py::arg("c") = 0.0, py::arg("sampling_h") = 0.1);
  m.def("generate_mesh", &make_mesh, py::arg("family"), py::arg("c") = 0.0,
        py::arg("h0") = 0.1, py::arg("refine") = 0);

  m.def(
      "split_max",
      [](double d1, double d2, double f) {
        SplitMax s = split_max(d1, d2, f);
        return std::make_pair(s.value, s.weight);
      },
      py::arg("d1"), py::arg("d2"), py::arg("f"),
      "closed-form direction-pair maximization: returns (value, weight)");
  m.def(
      "hamiltonian",
      [](double a11, double a12, double a22, double f) {
        return hamiltonian({a11, a12, a22}, f);
      },
      py::arg("a11"), py::arg("a12"), py::arg("a22"), py::arg("f"));
  m.def(
      "hamiltonian_grid",
      [](double a11, double a12, double a22, double f, int n_dir,
         int n_weight) {
        return hamiltonian_grid({a11, a12, a22}, f, n_dir, n_weight);
      },
      py::arg("a11"), py::arg("a12"), py::arg("a22"), py::arg("f"),
      py::arg("n_dir") = 64, py::arg("n_weight") = 201);

  m.def("experiment_names", [] {
    std::vector<std::string> names;
    for (const auto& e : catalog()) names.push_back(e.name);
    return names;
  });

  m.def(
      "solve_experiment",
      [](const std::string& name, int level, double m_mult, int n_theta) {
        auto sel = find_experiment(name);
        const Experiment& exp = *sel.experiment;
        StudyOptions opt;
        if (n_theta > 0) opt.n_theta = n_theta;
        double mult = m_mult > 0 ? m_mult : exp.multipliers.front();
        SolveResult r = solve_experiment(
            exp, sel.domain_index < 0 ? 0 : sel.domain_index, level, mult, opt);
        py::dict d;
        std::vector<std::pair<double, double>> pts;
        for (const Vec2& p : r.mesh.nodes) pts.emplace_back(p.x, p.y);
        d["nodes"] = pts;
        d["u"] = r.u;
        d["h"] = r.h;
        d["iterations"] = r.report.iterations;
        d["converged"] = r.report.converged;
        d["rel_linf_error"] = r.rel_error
                                  ? py::object(py::float_(*r.rel_error))
                                  : py::object(py::none());
        return d;
      },
      py::arg("name"), py::arg("level") = 0, py::arg("m") = 0.0,
      py::arg("ntheta") = 0);

  m.def(
      "run_study",
      [](const std::string& name, std::optional<std::vector<int>> levels,
         std::optional<std::vector<double>> multipliers, bool timings) {
        auto sel = find_experiment(name);
        StudyOptions opt;
        opt.domain_index = sel.domain_index;
        opt.levels = std::move(levels);
        opt.multipliers = std::move(multipliers);
        opt.timings = timings;
        std::vector<StudyRow> rows = run_study(*sel.experiment, opt);
        py::list out;
        for (const auto& r : rows) out.append(row_to_dict(r));
        return out;
      },
      py::arg("name"), py::arg("levels") = py::none(),
      py::arg("multipliers") = py::none(), py::arg("timings") = true);

  m.def(
      "study_csv",
      [](const std::string& name, std::optional<std::vector<int>> levels,
         std::optional<std::vector<double>> multipliers, bool timings) {
        auto sel = find_experiment(name);
        StudyOptions opt;
        opt.domain_index = sel.domain_index;
        opt.levels = std::move(levels);
        opt.multipliers = std::move(multipliers);
        opt.timings = timings;
        std::vector<StudyRow> rows = run_study(*sel.experiment, opt);
        std::ostringstream os;
        write_csv(os, rows);
        return os.str();
      },
      py::arg("name"), py::arg("levels") = py::none(),
      py::arg("multipliers") = py::none(), py::arg("timings") = true);

  m.def("set_thread_count", &set_thread_count, py::arg("n"));
}
