#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quasifix/cli.hpp"
#include "quasifix/config.hpp"
#include "quasifix/picard.hpp"

namespace py = pybind11;
using namespace quasifix;

namespace {

py::list report_to_py(const Report& report) {
  py::list out;
  for (const auto& c : report.checks) {
    py::dict d;
    d["name"] = c.name;
    d["status"] = to_string(c.status);
    d["witness"] = c.witness;
    d["detail"] = c.detail;
    out.append(std::move(d));
  }
  return out;
}

SampleGrid grid_from_arg(const QuasiMetricSpace& space, const py::object& arg,
                         std::uint64_t seed) {
  if (arg.is_none()) return SampleGrid::standard(space.domain(), 101, 100, seed);
  if (py::isinstance<py::int_>(arg)) {
    auto n = arg.cast<std::size_t>();
    return SampleGrid::standard(space.domain(), n, n > 1 ? n - 1 : 0, seed);
  }
  return SampleGrid::of(arg.cast<std::vector<double>>());
}

FiniteCompactSet set_from_list(const std::vector<double>& pts) {
  return FiniteCompactSet::of(pts);
}

py::dict run_to_py(const AttractorRun& run) {
  py::dict d;
  d["stopped_at"] = run.stopped_at;
  d["converged"] = run.converged;
  d["h_trace"] = run.h_trace;
  d["sup_trace"] = run.sup_trace;
  d["inf_trace"] = run.inf_trace;
  d["final"] = run.final.points();
  if (run.mesh)
    d["mesh"] = *run.mesh;
  else
    d["mesh"] = py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_quasifix, m) {
  m.doc() = "Proinov-type Z-contractions on quasi-metric spaces: verification, "
            "Picard fixed points, and IFS attractors";

  py::register_exception<ParseError>(m, "ExprParseError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "ExprEvalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigurationError", PyExc_ValueError);

  py::class_<Expr>(m, "Expr")
      .def_static("parse", [](const std::string& text) { return Expr::parse(text); })
      .def("free_vars",
           [](const Expr& e) {
             return std::vector<std::string>(e.free_vars().begin(), e.free_vars().end());
           })
      .def_property_readonly("text", [](const Expr& e) { return e.text(); })
      .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; })
      .def("eval", [](const Expr& e, const py::kwargs& kwargs) {
        std::vector<std::pair<std::string, double>> named;
        for (auto item : kwargs)
          named.emplace_back(item.first.cast<std::string>(), item.second.cast<double>());
        std::vector<Binding> bindings;
        for (const auto& [name, value] : named) bindings.push_back({name, value});
        return e.eval(std::span<const Binding>(bindings.data(), bindings.size()));
      });

  py::class_<QuasiMetricSpace>(m, "QuasiMetricSpace")
      .def_static(
          "preset",
          [](const std::string& name, double lambda, std::pair<double, double> domain) {
            return QuasiMetricSpace::preset(name, lambda, {domain.first, domain.second});
          },
          py::arg("name"), py::arg("lambda_") = 0.0,
          py::arg("domain") = std::pair<double, double>(0.0, 1.0))
      .def_static(
          "piecewise",
          [](std::pair<double, double> domain, const std::string& gt, const std::string& lt,
             std::optional<double> delta) {
            return QuasiMetricSpace::piecewise({domain.first, domain.second},
                                               Expr::parse(gt), Expr::parse(lt), delta);
          },
          py::arg("domain"), py::arg("gt"), py::arg("lt"),
          py::arg("delta") = std::nullopt)
      .def_property_readonly("name", &QuasiMetricSpace::name)
      .def_property_readonly("domain",
                             [](const QuasiMetricSpace& s) {
                               return std::pair<double, double>(s.domain().lo, s.domain().hi);
                             })
      .def_property_readonly("declared_delta", &QuasiMetricSpace::declared_delta)
      .def("q", &QuasiMetricSpace::eval_q)
      .def("ball_contains",
           [](const QuasiMetricSpace& s, double center, double radius, double point,
              const std::string& direction) {
             return s.ball_contains(center, radius, point,
                                    direction == "backward" ? Direction::backward
                                                            : Direction::forward);
           },
           py::arg("center"), py::arg("radius"), py::arg("point"),
           py::arg("direction") = "forward")
      .def("check_axioms",
           [](const QuasiMetricSpace& s, const py::object& grid, std::uint64_t seed) {
             return report_to_py(s.check_axioms(grid_from_arg(s, grid, seed)));
           },
           py::arg("grid") = py::none(), py::arg("seed") = 0)
      .def("estimate_delta",
           [](const QuasiMetricSpace& s, const py::object& grid, std::uint64_t seed) {
             DeltaEstimate est = s.estimate_delta(grid_from_arg(s, grid, seed));
             py::dict d;
             d["value"] = est.value;
             d["unbounded"] = est.unbounded;
             d["refined_value"] = est.refined_value;
             d["unstable"] = est.unstable;
             return d;
           },
           py::arg("grid") = py::none(), py::arg("seed") = 0);

  py::class_<SimulationFunction>(m, "SimulationFunction")
      .def_static("from_expr",
                  [](const std::string& xi) {
                    return SimulationFunction::from_expr(Expr::parse(xi));
                  })
      .def_static("xi1",
                  [](const std::string& p, const std::string& q) {
                    return SimulationFunction::family_xi1(Expr::parse(p), Expr::parse(q));
                  })
      .def_static("xi2",
                  [](const std::string& f, const std::string& g) {
                    return SimulationFunction::family_xi2(Expr::parse(f), Expr::parse(g));
                  })
      .def_static("xi3",
                  [](const std::string& h) {
                    return SimulationFunction::family_xi3(Expr::parse(h));
                  })
      .def_static("max_combined", &SimulationFunction::max_combined)
      .def("__call__", &SimulationFunction::eval)
      .def("check_z_properties",
           [](const SimulationFunction& f, const std::vector<double>& s_grid,
              const std::vector<double>& t_grid, std::size_t families, std::uint64_t seed) {
             return report_to_py(f.check_z_properties(SampleGrid::of(s_grid),
                                                      SampleGrid::of(t_grid), families, seed));
           },
           py::arg("s_grid"), py::arg("t_grid"), py::arg("families") = 64,
           py::arg("seed") = 0);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def_property_readonly("is_ifs", [](const SystemConfig& c) { return c.is_ifs; })
      .def_property_readonly("preset", [](const SystemConfig& c) { return c.preset; })
      .def("json", [](const SystemConfig& c) { return config_json(c); });

  m.def("preset_names", &preset_names);
  m.def("preset", &preset_config, py::arg("name"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config_json, py::arg("json_text"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("x0", [](const Trajectory& t) { return t.x0; })
      .def_property_readonly("iterates", [](const Trajectory& t) { return t.iterates; })
      .def_property_readonly("q_fwd", [](const Trajectory& t) { return t.q_fwd; })
      .def_property_readonly("q_bwd", [](const Trajectory& t) { return t.q_bwd; })
      .def_property_readonly("converged", [](const Trajectory& t) { return t.converged; })
      .def_property_readonly("fixed_point", [](const Trajectory& t) { return t.fixed_point; })
      .def_property_readonly("iterations_used",
                             [](const Trajectory& t) { return t.iterations_used; })
      .def("csv", &trajectory_csv);

  py::class_<ContractionSystem>(m, "ContractionSystem")
      .def_property_readonly("space",
                             [](const ContractionSystem& s) { return s.space; })
      .def("T", &ContractionSystem::apply_map)
      .def("verify_inequality",
           [](const ContractionSystem& sys, const py::object& grid, std::uint64_t seed) {
             return report_to_py(verify_inequality(sys, grid_from_arg(sys.space, grid, seed)));
           },
           py::arg("grid") = py::none(), py::arg("seed") = 0)
      .def("audit_hypotheses",
           [](const ContractionSystem& sys, const py::object& grid, std::size_t families,
              std::uint64_t seed) {
             return report_to_py(
                 audit_hypotheses(sys, grid_from_arg(sys.space, grid, seed), families, seed));
           },
           py::arg("grid") = py::none(), py::arg("families") = 64, py::arg("seed") = 0)
      .def("probe_asymptotic_regularity",
           [](const ContractionSystem& sys, double x0, int n_max) {
             RegularityProbe p = probe_asymptotic_regularity(sys, x0, n_max);
             py::list steps;
             for (const auto& s : p.steps)
               steps.append(py::make_tuple(s.n, s.q_fwd, s.q_bwd));
             py::dict d;
             d["steps"] = std::move(steps);
             d["regular"] = p.regular;
             return d;
           },
           py::arg("x0"), py::arg("n_max") = 50)
      .def("probe_continuity",
           [](const ContractionSystem& sys, double x, double c, long n_max) {
             return report_to_py(probe_continuity(sys, x, c, n_max));
           },
           py::arg("x"), py::arg("c"), py::arg("n_max") = 1000000)
      .def("iterate",
           [](const ContractionSystem& sys, double x0, double tol, int max_iter) {
             return iterate(sys, x0, tol, max_iter);
           },
           py::arg("x0"), py::arg("tol") = 1e-12, py::arg("max_iter") = 1000)
      .def("uniqueness_probe",
           [](const ContractionSystem& sys, const std::vector<double>& seeds, double tol,
              int max_iter) {
             UniquenessProbe p = uniqueness_probe(
                 sys, std::span<const double>(seeds.data(), seeds.size()), tol, max_iter);
             py::dict d;
             d["passed"] = p.passed();
             d["report"] = report_to_py(p.report);
             py::list runs;
             for (const auto& r : p.runs) {
               py::dict rd;
               rd["x0"] = r.x0;
               rd["converged"] = r.converged;
               rd["fixed_point"] = r.fixed_point;
               rd["iterations_used"] = r.iterations_used;
               runs.append(std::move(rd));
             }
             d["runs"] = std::move(runs);
             return d;
           },
           py::arg("seeds"), py::arg("tol") = 1e-9, py::arg("max_iter") = 10000);

  py::class_<IfsSystem>(m, "IfsSystem")
      .def_property_readonly("space", &IfsSystem::space)
      .def("apply_operator",
           [](const IfsSystem& ifs, const std::vector<double>& a) {
             return apply_operator(ifs, set_from_list(a)).points();
           })
      .def("compute_attractor",
           [](const IfsSystem& ifs, const std::vector<double>& a0, double tol, int max_iter,
              std::size_t max_points) {
             return run_to_py(
                 compute_attractor(ifs, set_from_list(a0), tol, max_iter, max_points));
           },
           py::arg("a0"), py::arg("tol") = 1e-9, py::arg("max_iter") = 100,
           py::arg("max_points") = 4096)
      .def("verify_hyperspace_contraction",
           [](const IfsSystem& ifs,
              const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs) {
             std::vector<std::pair<FiniteCompactSet, FiniteCompactSet>> samples;
             for (const auto& [a, b] : pairs)
               samples.emplace_back(set_from_list(a), set_from_list(b));
             return report_to_py(verify_hyperspace_contraction(
                 ifs, std::span<const std::pair<FiniteCompactSet, FiniteCompactSet>>(
                          samples.data(), samples.size())));
           });

  m.def("make_contraction", &make_contraction, py::arg("config"));
  m.def("make_ifs", &make_ifs, py::arg("config"));

  m.def(
      "q_gap",
      [](const std::vector<double>& a, const std::vector<double>& b,
         const QuasiMetricSpace& space) {
        return q_gap(set_from_list(a), set_from_list(b), space);
      },
      py::arg("a"), py::arg("b"), py::arg("space"));
  m.def(
      "hausdorff",
      [](const std::vector<double>& a, const std::vector<double>& b,
         const QuasiMetricSpace& space) {
        return hausdorff(set_from_list(a), set_from_list(b), space);
      },
      py::arg("a"), py::arg("b"), py::arg("space"));

  m.def("run_cli", &run, py::arg("args"),
        "Run a CLI command in-process; returns the exit code.");
}
