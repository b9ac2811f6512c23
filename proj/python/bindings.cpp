#include "ptgne/bench.hpp"
#include "ptgne/cli.hpp"
#include "ptgne/config.hpp"
#include "ptgne/errors.hpp"
#include "ptgne/graph.hpp"
#include "ptgne/kkt.hpp"
#include "ptgne/trace.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

namespace py = pybind11;
using namespace ptgne;

namespace {

/// A benchmark game kept alive together with its generated data.
struct Game {
  Experiment ex;
  explicit Game(Experiment e) : ex(std::move(e)) {}
  const GameProblem& problem() const { return ex.problem(); }
  AugmentedState unpack(const Vec& z) const { return AugmentedState::from_flat(problem().dims, z); }
};

Game make_game(const std::string& benchmark, const std::vector<std::string>& overrides) {
  RunConfig cfg = default_config(benchmark_from_string(benchmark));
  for (const std::string& o : overrides) apply_override(cfg, o);
  validate_config(cfg);
  return Game(prepare_experiment(cfg));
}

py::dict report_dict(const RunReport& rep) {
  py::list assertions, info;
  for (const SummaryEntry& e : rep.assertions)
    assertions.append(py::dict(py::arg("name") = e.name, py::arg("value") = e.value, py::arg("op") = e.op,
                               py::arg("threshold") = e.threshold, py::arg("pass") = e.pass,
                               py::arg("source") = e.source));
  for (const SummaryInfo& i : rep.info)
    info.append(py::dict(py::arg("name") = i.name, py::arg("value") = i.value, py::arg("source") = i.source));
  return py::dict(py::arg("exit_code") = rep.exit_code, py::arg("error") = rep.error,
                  py::arg("out_dir") = rep.out_dir, py::arg("assertions") = assertions, py::arg("info") = info);
}

py::dict trace_columns(const std::vector<TraceRecord>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  std::vector<Vec> cols(kTraceColumns.size(), Vec(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const TraceRecord& r = rows[k];
    const double v[] = {r.t,       r.V,   r.S_norm,    r.s1_norm,           r.s2_norm,        r.s3_norm, r.W_c,
                        r.W_o,     r.W_delta, r.V_net, r.W, r.sigma_min, r.dual_disagreement, r.consensus_error};
    for (size_t c = 0; c < kTraceColumns.size(); ++c) cols[c](k) = v[c];
  }
  py::dict out;
  for (size_t c = 0; c < kTraceColumns.size(); ++c) out[py::str(std::string(kTraceColumns[c]))] = cols[c];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Prescribed-time generalized Nash equilibrium seeking";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", base.ptr());

  m.def("fb", &fb, py::arg("a"), py::arg("b"), py::arg("eps"));
  m.def(
      "fb_partials",
      [](double a, double b, double eps) {
        const FbPartials d = fb_partials(a, b, eps);
        return py::make_tuple(d.da, d.db);
      },
      py::arg("a"), py::arg("b"), py::arg("eps"));

  py::class_<GainSchedule>(m, "GainSchedule")
      .def(py::init<>())
      .def_readwrite("horizon", &GainSchedule::horizon)
      .def_readwrite("mu_c", &GainSchedule::mu_c)
      .def_readwrite("k_o", &GainSchedule::k_o)
      .def_readwrite("c_o", &GainSchedule::c_o)
      .def_readwrite("gamma_c", &GainSchedule::gamma_c)
      .def_readwrite("k_d", &GainSchedule::k_d)
      .def_readwrite("epsilon_bar", &GainSchedule::epsilon_bar)
      .def("validate", [](const GainSchedule& g) {
        try {
          g.validate();
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      })
      .def("sigma_opt", &GainSchedule::sigma_opt, py::arg("t"))
      .def("xi", &GainSchedule::xi, py::arg("t"))
      .def("kappa", &GainSchedule::kappa, py::arg("t"));

  py::class_<CommGraph>(m, "CommGraph")
      .def(py::init([](int agents, const std::vector<std::tuple<int, int, double>>& edges) {
             std::vector<Edge> list;
             for (const auto& [i, j, w] : edges) list.push_back({i, j, w});
             return CommGraph(agents, list);
           }),
           py::arg("agents"), py::arg("edges"))
      .def_static("from_spec", &parse_graph_spec, py::arg("spec"))
      .def_property_readonly("size", &CommGraph::size)
      .def_property_readonly("lambda2", &CommGraph::lambda2)
      .def_property_readonly("laplacian", &CommGraph::laplacian)
      .def_property_readonly("connected", [](const CommGraph& g) { return g.connected(); })
      .def("neighbors", &CommGraph::neighbors, py::arg("i"))
      .def("edges", [](const CommGraph& g) {
        std::vector<std::tuple<int, int, double>> out;
        for (const Edge& e : g.edges()) out.emplace_back(e.i, e.j, e.weight);
        return out;
      });

  py::class_<Game>(m, "Game")
      .def(py::init(&make_game), py::arg("benchmark") = "cournot",
           py::arg("overrides") = std::vector<std::string>{})
      .def_property_readonly("agents", [](const Game& g) { return g.problem().dims.agents(); })
      .def_property_readonly("n", [](const Game& g) { return g.problem().dims.n(); })
      .def_property_readonly("ineq_count", [](const Game& g) { return g.problem().dims.ineq_count; })
      .def_property_readonly("eq_count", [](const Game& g) { return g.problem().dims.eq_count; })
      .def_property_readonly("graph", [](const Game& g) { return g.ex.graph; })
      .def_property_readonly("z0", [](const Game& g) { return g.ex.z0.flat(); })
      .def("pseudo_gradient", [](const Game& g, const Vec& x) { return g.problem().pseudo_gradient(x); })
      .def(
          "stationarity",
          [](const Game& g, const Vec& z, double eps) { return stationarity(g.problem(), g.unpack(z), eps).flat(); },
          py::arg("z"), py::arg("eps") = kDefaultSmoothing)
      .def(
          "jacobian",
          [](const Game& g, const Vec& z, double eps) { return stationarity_jacobian(g.problem(), g.unpack(z), eps); },
          py::arg("z"), py::arg("eps") = kDefaultSmoothing)
      .def(
          "olf",
          [](const Game& g, const Vec& z, double eps) { return stationarity(g.problem(), g.unpack(z), eps).olf; },
          py::arg("z"), py::arg("eps") = kDefaultSmoothing)
      .def("compactness_threshold", [](const Game& g) { return compactness_threshold(g.problem()); })
      .def(
          "newton_oracle",
          [](const Game& g, double eps) {
            const NewtonResult r = newton_oracle(g.problem(), eps, g.ex.z0);
            return py::make_tuple(r.root.flat(), r.residual, r.iterations);
          },
          py::arg("eps") = kDefaultSmoothing)
      .def("manifest", [](const Game& g) { return manifest_json(g.ex); });

  m.def(
      "run",
      [](const std::string& benchmark, const std::string& mode, const std::string& out,
         const std::vector<std::string>& overrides, bool per_agent) {
        RunConfig cfg = default_config(benchmark_from_string(benchmark));
        cfg.mode = run_mode_from_string(mode);
        cfg.out = out;
        cfg.per_agent = per_agent;
        for (const std::string& o : overrides) apply_override(cfg, o);
        RunReport rep;
        {
          py::gil_scoped_release release;
          rep = run_experiment(cfg);
        }
        return report_dict(rep);
      },
      py::arg("benchmark") = "cournot", py::arg("mode") = "both", py::arg("out") = "ptgne-out",
      py::arg("overrides") = std::vector<std::string>{}, py::arg("per_agent") = false,
      "Runs a benchmark, writes its artifacts and returns the summary.");

  m.def(
      "read_trace",
      [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open trace file '" + path + "'");
        return trace_columns(read_trace_csv(in));
      },
      py::arg("path"), "Trace CSV as a dict of column name to array.");

  std::vector<std::string> columns(kTraceColumns.begin(), kTraceColumns.end());
  m.attr("TRACE_COLUMNS") = columns;
  m.attr("config_keys") = config_keys();
}
