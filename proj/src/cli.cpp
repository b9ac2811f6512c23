#include "ptgne/cli.hpp"

#include "ptgne/centralized.hpp"
#include "ptgne/diagnostics.hpp"
#include "ptgne/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace ptgne {

namespace fs = std::filesystem;
using nlohmann::json;

bool RunReport::passed() const {
  if (exit_code != kExitPass) return false;
  return std::all_of(assertions.begin(), assertions.end(), [](const SummaryEntry& e) { return e.pass; });
}

const GameProblem& Experiment::problem() const {
  return cournot ? cournot->problem : sensor->problem;
}

namespace {

// JSON has no infinities; they are written as strings and read back.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Vec json_vec(const json& a) {
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (size_t k = 0; k < a.size(); ++k) v(static_cast<Eigen::Index>(k)) = a[k].get<double>();
  return v;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_manifest(RunConfig& c, const json& m) {
  try {
    if (m.at("format") != "ptgne-manifest") throw ConfigError("manifest: unrecognised format");
    c.benchmark = benchmark_from_string(m.at("benchmark").get<std::string>());
    c.seed = m.at("seed").get<std::uint64_t>();
    c.graph = m.at("graph").at("spec").get<std::string>();
    const json& g = m.at("gains");
    c.gains.horizon = g.at("horizon");
    c.gains.mu_c = g.at("mu_c");
    c.gains.k_o = g.at("k_o");
    c.gains.c_o = g.at("c_o");
    c.gains.gamma_c = g.at("gamma_c");
    c.gains.k_d = g.at("k_d");
    c.gains.epsilon_bar = g.at("epsilon_bar");
    c.epsilon = g.at("epsilon");
    const json& it = m.at("integrator");
    c.integrator.method = method_from_string(it.at("method").get<std::string>());
    c.integrator.rel_tol = it.at("rel_tol");
    c.integrator.abs_tol = it.at("abs_tol");
    c.integrator.max_step_fraction = it.at("max_step_fraction");
    c.integrator.trace_stride = it.at("trace_stride");
    const json& t = m.at("tolerances");
    c.tol.convergence = t.at("convergence");
    c.tol.consensus = t.at("consensus");
    c.tol.olf = t.at("olf");
    c.tol.dual = t.at("dual");
    c.tol.agreement = t.at("agreement");
    c.tol.monotone = t.at("monotone");
    const json& ini = m.at("initial");
    c.initial.x0 = ini.at("x0");
    c.initial.disc_radius = ini.at("disc_radius");
    c.initial.duals.lambda_lo = ini.at("lambda_lo");
    c.initial.duals.lambda_hi = ini.at("lambda_hi");
    c.initial.duals.mu_lo = ini.at("mu_lo");
    c.initial.duals.mu_hi = ini.at("mu_hi");
    c.initial.perturbation = ini.at("perturbation");
    if (c.benchmark == Benchmark::Cournot) {
      const json& cc = m.at("cournot");
      c.cournot.agents = cc.at("agents");
      c.cournot.base_price = cc.at("base_price");
      c.cournot.elasticity = cc.at("elasticity");
      c.cournot.alpha_lo = cc.at("alpha_lo");
      c.cournot.alpha_hi = cc.at("alpha_hi");
      c.cournot.beta_lo = cc.at("beta_lo");
      c.cournot.beta_hi = cc.at("beta_hi");
      c.cournot.r_lo = cc.at("r_lo");
      c.cournot.r_hi = cc.at("r_hi");
      c.cournot.capacity = cc.at("capacity");
      c.cournot.quota_target = cc.at("quota_target");
    } else if (c.benchmark == Benchmark::Sensor) {
      const json& sc = m.at("sensor");
      c.sensor.agents = sc.at("agents");
      c.sensor.target_radius = sc.at("target_radius");
      c.sensor.max_radius = sc.at("max_radius");
    } else {
      throw ConfigError("manifest: benchmark must be cournot or sensor");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
}

CommGraph graph_from_config(const RunConfig& c, int agents) {
  try {
    CommGraph g = parse_graph_spec(c.graph);
    if (g.size() != agents) {
      std::ostringstream os;
      os << "run.graph: '" << c.graph << "' has " << g.size() << " nodes, the benchmark has " << agents
         << " agents";
      throw ConfigError(os.str());
    }
    return g;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("run.graph: " + std::string(e.what()));
  }
}

CommGraph graph_from_manifest(const json& m) {
  std::vector<Edge> edges;
  for (const json& e : m.at("graph").at("edges")) edges.push_back({e.at(0), e.at(1), e.at(2)});
  return CommGraph(m.at("graph").at("agents").get<int>(), edges);
}

}  // namespace

Experiment prepare_experiment(const RunConfig& cfg) {
  RunConfig eff = cfg;
  std::optional<json> src;
  if (cfg.benchmark == Benchmark::CustomManifest) {
    if (cfg.manifest.empty()) throw ConfigError("run.manifest is required for the custom-manifest benchmark");
    src = read_json_file(cfg.manifest);
    apply_manifest(eff, *src);
    for (const std::string& o : cfg.overrides) {
      if (o.rfind("run.", 0) == 0) continue;
      const auto eq = o.find('=');
      set_config_value(eff, o.substr(0, eq), o.substr(eq + 1));
    }
  }
  validate_config(eff);

  const int agents = eff.benchmark == Benchmark::Cournot ? eff.cournot.agents : eff.sensor.agents;
  CommGraph graph = src ? graph_from_manifest(*src) : graph_from_config(eff, agents);
  if (graph.size() != agents) throw ConfigError("manifest: graph size differs from the agent count");

  std::optional<CournotInstance> cournot;
  std::optional<SensorInstance> sensor;
  std::vector<Vec> local;
  if (eff.benchmark == Benchmark::Cournot) {
    CournotConfig cc = eff.cournot;
    cc.seed = eff.seed;
    if (src) {
      const json& co = src->at("cournot");
      cournot = build_cournot(cc, json_vec(co.at("alpha")), json_vec(co.at("beta")), json_vec(co.at("r")));
    } else {
      cournot = build_cournot(cc);
    }
    local = cournot_initial_states(*cournot, eff.initial_seed(), eff.initial.x0, eff.initial.duals);
  } else {
    SensorConfig sc = eff.sensor;
    sc.seed = eff.initial_seed();
    sensor = build_sensor(sc, graph);
    local = sensor_initial_states(*sensor, eff.initial_seed(), eff.initial.disc_radius, eff.initial.duals);
  }

  const Dimensions dims = cournot ? cournot->problem.dims : sensor->problem.dims;
  Experiment ex(eff, std::move(graph), dims);
  ex.kind = eff.benchmark;
  ex.cournot = std::move(cournot);
  ex.sensor = std::move(sensor);
  if (src) {
    const json& ini = src->at("initial");
    local.clear();
    for (const json& z : ini.at("local_states")) local.push_back(json_vec(z));
    ex.initial_network = NetworkState(dims, json_vec(ini.at("network")));
    for (int j = 0; j < dims.agents(); ++j)
      if (!(ex.initial_network.z(j) == local.at(j)))
        throw ConfigError("manifest: initial network disagrees with the recorded local states");
  } else {
    ex.initial_network = make_initial_network(dims, local, eff.estimate_seed(), eff.initial.perturbation);
  }
  ex.local_states = std::move(local);
  ex.z0 = consensual_point(dims, ex.local_states);
  return ex;
}

std::string manifest_json(const Experiment& ex) {
  const RunConfig& c = ex.config;
  json m;
  m["format"] = "ptgne-manifest";
  m["version"] = 1;
  m["benchmark"] = to_string(ex.kind);
  m["seed"] = c.seed;
  m["initial_seed"] = c.initial_seed();
  m["estimate_seed"] = c.estimate_seed();
  if (!c.manifest.empty()) m["replayed_from"] = c.manifest;
  m["overrides"] = c.overrides;

  json edges = json::array();
  for (const Edge& e : ex.graph.edges()) edges.push_back({e.i, e.j, e.weight});
  m["graph"] = {{"spec", c.graph}, {"agents", ex.graph.size()}, {"lambda2", ex.graph.lambda2()},
                {"edges", edges}};
  m["gains"] = {{"horizon", c.gains.horizon}, {"mu_c", c.gains.mu_c},       {"k_o", c.gains.k_o},
                {"c_o", c.gains.c_o},         {"gamma_c", c.gains.gamma_c}, {"k_d", c.gains.k_d},
                {"epsilon_bar", c.gains.epsilon_bar}, {"epsilon", c.epsilon}};
  m["integrator"] = {{"method", to_string(c.integrator.method)},
                     {"rel_tol", c.integrator.rel_tol},
                     {"abs_tol", c.integrator.abs_tol},
                     {"max_step_fraction", c.integrator.max_step_fraction},
                     {"trace_stride", c.integrator.trace_stride}};
  m["tolerances"] = {{"convergence", c.tol.convergence}, {"consensus", c.tol.consensus},
                     {"olf", c.tol.olf},                 {"dual", c.tol.dual},
                     {"agreement", c.tol.agreement},     {"monotone", c.tol.monotone}};
  json local = json::array();
  for (const Vec& z : ex.local_states) local.push_back(vec_json(z));
  m["initial"] = {{"x0", c.initial.x0},
                  {"disc_radius", c.initial.disc_radius},
                  {"lambda_lo", c.initial.duals.lambda_lo},
                  {"lambda_hi", c.initial.duals.lambda_hi},
                  {"mu_lo", c.initial.duals.mu_lo},
                  {"mu_hi", c.initial.duals.mu_hi},
                  {"perturbation", c.initial.perturbation},
                  {"local_states", local},
                  {"network", vec_json(ex.initial_network.flat)}};
  if (ex.cournot) {
    const CournotConfig& cc = ex.cournot->config;
    m["cournot"] = {{"agents", cc.agents},         {"base_price", cc.base_price},
                    {"elasticity", cc.elasticity}, {"alpha_lo", cc.alpha_lo},
                    {"alpha_hi", cc.alpha_hi},     {"beta_lo", cc.beta_lo},
                    {"beta_hi", cc.beta_hi},       {"r_lo", cc.r_lo},
                    {"r_hi", cc.r_hi},             {"capacity", cc.capacity},
                    {"quota_target", cc.quota_target},
                    {"alpha", vec_json(ex.cournot->alpha)},
                    {"beta", vec_json(ex.cournot->beta)},
                    {"r", vec_json(ex.cournot->r)}};
  }
  if (ex.sensor) {
    const SensorConfig& sc = ex.sensor->config;
    json targets = json::array();
    for (Eigen::Index k = 0; k < ex.sensor->targets.cols(); ++k)
      targets.push_back(vec_json(ex.sensor->targets.col(k)));
    m["sensor"] = {{"agents", sc.agents},
                   {"target_radius", sc.target_radius},
                   {"max_radius", sc.max_radius},
                   {"power_budget", sc.power_budget()},
                   {"targets", targets}};
  }
  m["compactness_threshold"] = num(compactness_threshold(ex.problem()));
  return m.dump(2);
}

namespace {

/// Accumulates assertions and informational values for one run.
class Recorder {
 public:
  explicit Recorder(RunReport& r) : r_(r) {}

  void le(const std::string& name, double value, double threshold, const std::string& source) {
    add(name, value, "<=", threshold, value <= threshold, source);
  }
  void lt(const std::string& name, double value, double threshold, const std::string& source) {
    add(name, value, "<", threshold, value < threshold, source);
  }
  void gt(const std::string& name, double value, double threshold, const std::string& source) {
    add(name, value, ">", threshold, value > threshold, source);
  }
  void add(const std::string& name, double value, const std::string& op, double threshold, bool pass,
           const std::string& source) {
    r_.assertions.push_back({name, value, op, threshold, pass, source});
  }
  void info(const std::string& name, double value, const std::string& source) {
    r_.info.push_back({name, value, source});
  }

 private:
  RunReport& r_;
};

struct Discrepancy {
  double primal = 0.0;
  double dual = 0.0;
};

Discrepancy discrepancy(const AugmentedState& a, const AugmentedState& b) {
  Discrepancy d;
  d.primal = (a.x - b.x).lpNorm<Eigen::Infinity>();
  if (a.lambda.size()) d.dual = std::max(d.dual, (a.lambda - b.lambda).lpNorm<Eigen::Infinity>());
  if (a.mu.size()) d.dual = std::max(d.dual, (a.mu - b.mu).lpNorm<Eigen::Infinity>());
  return d;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

void write_trace(const fs::path& path, const std::vector<TraceRecord>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  write_trace_csv(out, rows);
}

/// Wide per-agent file. Centralized rows hold col(x, lambda, mu); distributed
/// rows hold the stacked agent blocks z_1..z_N.
void write_agent_csv(const fs::path& path, const Dimensions& d, bool distributed,
                     const std::vector<double>& times, const std::vector<Vec>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "t";
  for (int i = 0; i < d.agents(); ++i) {
    for (int c = 0; c < d.primal_dims[i]; ++c) out << ",x" << i << '_' << c;
    if (distributed) {
      for (int j = 0; j < d.ineq_count; ++j) out << ",lambda" << i << '_' << j;
      for (int j = 0; j < d.eq_count; ++j) out << ",mu" << i << '_' << j;
    }
  }
  if (!distributed) {
    for (int j = 0; j < d.ineq_count; ++j) out << ",lambda_" << j;
    for (int j = 0; j < d.eq_count; ++j) out << ",mu_" << j;
  }
  out << '\n' << std::setprecision(17);
  for (size_t k = 0; k < rows.size(); ++k) {
    out << times[k];
    for (Eigen::Index c = 0; c < rows[k].size(); ++c) out << ',' << rows[k](c);
    out << '\n';
  }
}

bool nonlinear_inequalities(const GameProblem& p) { return p.dims.ineq_count > 0 && !p.ineq.affine; }

/// Feasibility and relaxed complementarity lambda_j g_j = -eps^2/2 at a point.
void constraint_checks(Recorder& rec, const std::string& prefix, const GameProblem& p,
                       const AugmentedState& z, double eps, const std::string& source) {
  const Vec g = p.ineq.value(z.x);
  rec.le(prefix + ".constraint_g", g.maxCoeff(), 1e-8, source);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j)
    worst = std::max(worst, std::abs(z.lambda(j) * g(j) + 0.5 * eps * eps));
  rec.le(prefix + ".fb_complementarity", worst, 1e-10, source);
}

void log_line(std::ostream* log, const std::string& s) {
  if (log) *log << s << '\n' << std::flush;
}

void execute(const Experiment& ex, RunReport& rep, std::ostream* log) {
  const RunConfig& c = ex.config;
  const GameProblem& p = ex.problem();
  const Dimensions& d = p.dims;
  const double eps = c.epsilon;
  const fs::path out(c.out);
  Recorder rec(rep);
  bool numerical = false;
  auto numeric_failure = [&](const std::string& who, const Error& e) {
    numerical = true;
    rep.error += (rep.error.empty() ? "" : "; ") + who + ": " + e.what();
    log_line(log, "[" + who + "] numerical failure: " + e.what());
  };

  const double c_star = compactness_threshold(p);
  rec.info("compactness_threshold", c_star, "manifest.json:compactness_threshold");
  rec.info("graph.lambda2", ex.graph.lambda2(), "manifest.json:graph.lambda2");
  rec.gt("graph.connected", ex.graph.lambda2(), kConnectivityTol, "manifest.json:graph.lambda2");

  const bool want_c = c.mode != RunMode::Distributed;
  const bool want_d = c.mode != RunMode::Centralized;

  // Pre-run gates.
  const double V0 = stationarity(p, ex.z0, eps).olf;
  const bool gate_c = !std::isfinite(c_star) || V0 < c_star;
  if (want_c) rec.lt("centralized.gate_V0_below_cstar", V0, c_star, "trace_centralized.csv:V[0]");
  const double W0 = snapshot(ex.initial_network, ex.graph, p, c.gains, eps, 0.0).W;
  const bool gate_d = (!std::isfinite(c_star) || W0 < c_star) && ex.graph.connected();
  if (want_d) {
    rec.lt("distributed.gate_W0_below_cstar", W0, c_star, "trace_distributed.csv:W[0]");
    rec.info("distributed.W0", W0, "trace_distributed.csv:W[0]");
    rec.info("distributed.gate_margin", c_star / W0, "manifest.json:compactness_threshold / W[0]");
  }

  std::optional<AugmentedState> oracle;
  try {
    const NewtonResult nr = newton_oracle(p, eps, ex.z0);
    oracle = nr.root;
    rec.le("oracle.residual", nr.residual, NewtonOptions{}.stagnation_tol, "newton oracle ||S||");
    rec.info("oracle.iterations", nr.iterations, "newton oracle");
  } catch (const ConvergenceFailure& e) {
    rec.le("oracle.residual", e.value(), NewtonOptions{}.stagnation_tol, "newton oracle ||S||");
  } catch (const Error& e) {
    rec.add("oracle.residual", std::nan(""), "<=", NewtonOptions{}.stagnation_tol, false,
            std::string("newton oracle: ") + e.what());
  }

  std::optional<AugmentedState> central_final;
  if (want_c && gate_c) {
    log_line(log, "[centralized] integrating on [0, " + std::to_string(c.gains.horizon) + "]");
    try {
      CentralizedOptions co;
      co.epsilon = eps;
      co.convergence_target = c.tol.convergence;
      co.keep_states = c.per_agent;
      const CentralizedRun run = run_centralized(p, c.gains, c.integrator, ex.z0, co);
      write_trace(out / "trace_centralized.csv", run.trace);
      if (c.per_agent) {
        std::vector<double> times;
        for (const TraceRecord& r : run.trace) times.push_back(r.t);
        write_agent_csv(out / "agents_centralized.csv", d, false, times, run.states);
      }
      central_final = run.final_state;

      rec.le("centralized.final_S_norm", run.final_residual, c.tol.convergence,
             "trace_centralized.csv:S_norm[last]");
      double worst_rise = 0.0;
      for (size_t k = 1; k < run.trace.size(); ++k) {
        const double prev = run.trace[k - 1].V;
        if (prev > EnvelopeOptions{}.noise_floor)
          worst_rise = std::max(worst_rise, (run.trace[k].V - prev) / prev);
      }
      rec.le("centralized.V_monotone", worst_rise, c.tol.monotone, "trace_centralized.csv:V");
      const double sigma_lb = run.sampled_sigma_lb();
      rec.info("centralized.sigma_lb", sigma_lb, "trace_centralized.csv:sigma_min");
      try {
        const EnvelopeReport env = check_decay_envelope(run, sigma_lb);
        rec.le("centralized.decay_envelope", env.worst_ratio, 1.0 + EnvelopeOptions{}.slack,
               "trace_centralized.csv:V,sigma_min");
        rec.info("centralized.gamma_bound", env.gamma_bound, "trace_centralized.csv:sigma_min");
        rec.info("centralized.gamma_emp", env.gamma_emp, "trace_centralized.csv:V");
      } catch (const std::invalid_argument& e) {
        rec.add("centralized.decay_envelope", std::nan(""), "<=", 1.0 + EnvelopeOptions{}.slack, false,
                e.what());
      }
      if (nonlinear_inequalities(p))
        constraint_checks(rec, "centralized", p, run.final_state, eps, "agents_centralized.csv[last]");
      rec.info("centralized.accepted_steps", static_cast<double>(run.flow.accepted_steps), "integrator");
      rec.info("centralized.rejected_steps", static_cast<double>(run.flow.rejected_steps), "integrator");
      log_line(log, "[centralized] final ||S|| = " + std::to_string(run.final_residual));
    } catch (const IntegrationFailure& e) {
      numeric_failure("centralized", e);
    } catch (const DivergenceError& e) {
      numeric_failure("centralized", e);
    }
  }

  std::optional<AugmentedState> dist_average;
  std::vector<AugmentedState> dist_agents;
  if (want_d && gate_d) {
    log_line(log, "[distributed] integrating " + std::to_string(ex.initial_network.flat.size()) +
                      " states on [0, " + std::to_string(c.gains.horizon) + "]");
    try {
      DistributedOptions dopt;
      dopt.epsilon = eps;
      dopt.tol_consensus = c.tol.consensus;
      dopt.tol_olf = c.tol.olf;
      dopt.tol_dual = c.tol.dual;
      dopt.enforce = false;
      dopt.keep_agent_states = c.per_agent;
      const DistributedRun run = run_distributed(p, ex.graph, c.gains, c.integrator, ex.initial_network, dopt);
      write_trace(out / "trace_distributed.csv", run.trace);
      if (c.per_agent) write_agent_csv(out / "agents_distributed.csv", d, true, run.state_times, run.agent_states);

      for (const Assertion& a : run.assertions) {
        std::string src = "final state";
        if (a.name == "consensus_error") src = "trace_distributed.csv:consensus_error[last]";
        if (a.name == "dual_disagreement") src = "trace_distributed.csv:dual_disagreement[last]";
        if (a.name == "max_agent_V") src = "final estimates y_i(T)";
        rec.add("distributed." + a.name, a.value, "<=", a.threshold, a.pass, src);
      }
      dist_average = run.final_state.network_average();
      for (int i = 0; i < d.agents(); ++i) dist_agents.push_back(run.final_state.agent_estimate(i));

      const DissipationReport dis = check_dissipation(run.snapshots, c.gains);
      rec.add("distributed.W_additivity", dis.additivity_ok ? 0.0 : 1.0, "==", 0.0, dis.additivity_ok,
              "trace_distributed.csv:W,W_c,W_o,W_delta");
      rec.le("distributed.W_confinement", dis.max_W / dis.W0 - 1.0, 1e-6, "trace_distributed.csv:W");
      const LyapunovSnapshot& last = run.snapshots.back();
      rec.le("distributed.W_c_at_T", last.W_c, c.tol.consensus * c.tol.consensus,
             "trace_distributed.csv:W_c[last]");
      rec.le("distributed.W_o_at_T", last.W_o, c.tol.olf, "trace_distributed.csv:W_o[last]");
      rec.le("distributed.W_delta_at_T", last.W_delta, c.tol.dual * c.tol.dual,
             "trace_distributed.csv:W_delta[last]");
      rec.gt("distributed.gamma_emp", dis.gamma_emp, 0.0, "trace_distributed.csv:W");

      double sigma_lb = kInf;
      for (const LyapunovSnapshot& s : run.snapshots) sigma_lb = std::min(sigma_lb, s.sigma_min);
      rec.info("distributed.sigma_lb", sigma_lb, "trace_distributed.csv:sigma_min");
      rec.info("distributed.k_d_threshold", dual_gain_threshold(sigma_lb, ex.graph),
               "trace_distributed.csv:sigma_min, manifest.json:graph.lambda2");

      const HessianConditionReport hc = check_sensor_hessian_condition(run.snapshots, p);
      if (hc.applicable)
        rec.gt("distributed.hessian_condition", hc.worst_margin, 0.0, "trace snapshots lambda_bar, dF");
      if (nonlinear_inequalities(p)) {
        double worst_s = 0.0;
        for (const AugmentedState& z : dist_agents) worst_s = std::max(worst_s, stationarity(p, z, eps).norm());
        rec.le("distributed.max_agent_S_norm", worst_s, c.tol.convergence, "final estimates y_i(T)");
        constraint_checks(rec, "distributed", p, *dist_average, eps, "agents_distributed.csv[last]");
      }
      rec.info("distributed.accepted_steps", static_cast<double>(run.flow.accepted_steps), "integrator");
      rec.info("distributed.rejected_steps", static_cast<double>(run.flow.rejected_steps), "integrator");
      log_line(log, "[distributed] consensus error " + std::to_string(run.consensus_error) +
                        ", dual disagreement " + std::to_string(run.dual_disagreement));
    } catch (const IntegrationFailure& e) {
      numeric_failure("distributed", e);
    } catch (const DivergenceError& e) {
      numeric_failure("distributed", e);
    }
  }

  // Pairwise agreement between everything that finished.
  const double tol = c.tol.agreement;
  auto agree = [&](const std::string& name, const Discrepancy& dd, const std::string& src) {
    rec.le(name + ".primal", dd.primal, tol, src);
    if (d.ineq_count + d.eq_count > 0) rec.le(name + ".dual", dd.dual, tol, src);
  };
  if (oracle && central_final)
    agree("agreement.centralized_vs_oracle", discrepancy(*central_final, *oracle), "centralized z(T), oracle root");
  if (oracle && !dist_agents.empty()) {
    Discrepancy worst;
    for (const AugmentedState& z : dist_agents) {
      const Discrepancy dd = discrepancy(z, *oracle);
      worst.primal = std::max(worst.primal, dd.primal);
      worst.dual = std::max(worst.dual, dd.dual);
    }
    agree("agreement.distributed_vs_oracle", worst, "agent consensus points, oracle root");
  }
  if (central_final && dist_average)
    agree("agreement.centralized_vs_distributed", discrepancy(*central_final, *dist_average),
          "centralized z(T), network average z(T)");

  if (numerical) rep.exit_code = kExitNumerical;
  else if (!rep.passed()) rep.exit_code = kExitAssertion;
}

json summary_json(const RunReport& r, const RunConfig& c) {
  json s;
  s["exit_code"] = r.exit_code;
  s["status"] = r.exit_code == kExitPass ? "pass" : r.exit_code == kExitAssertion ? "assertion-failure"
                : r.exit_code == kExitConfig ? "configuration-error" : "numerical-failure";
  if (!r.error.empty()) s["error"] = r.error;
  s["benchmark"] = to_string(c.benchmark);
  s["mode"] = to_string(c.mode);
  json a = json::array();
  for (const SummaryEntry& e : r.assertions)
    a.push_back({{"name", e.name}, {"value", num(e.value)}, {"op", e.op}, {"threshold", num(e.threshold)},
                 {"pass", e.pass}, {"source", e.source}});
  s["assertions"] = a;
  json info = json::array();
  for (const SummaryInfo& e : r.info)
    info.push_back({{"name", e.name}, {"value", num(e.value)}, {"source", e.source}});
  s["info"] = info;
  return s;
}

}  // namespace

void write_summary_text(std::ostream& out, const RunReport& r) {
  out << std::setprecision(6);
  for (const SummaryEntry& e : r.assertions)
    out << (e.pass ? "PASS " : "FAIL ") << e.name << " = " << e.value << ' ' << e.op << ' ' << e.threshold
        << "  [" << e.source << "]\n";
  for (const SummaryInfo& e : r.info) out << "INFO " << e.name << " = " << e.value << "  [" << e.source << "]\n";
  if (!r.error.empty()) out << "ERROR " << r.error << '\n';
  out << "EXIT " << r.exit_code << '\n';
}

RunReport run_experiment(const RunConfig& cfg, std::ostream* log) {
  RunReport rep;
  rep.out_dir = cfg.out;
  bool have_dir = false;
  try {
    const Experiment ex = prepare_experiment(cfg);
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec || !fs::is_directory(cfg.out))
      throw ConfigError("cannot create output directory '" + cfg.out + "'");
    have_dir = true;
    write_text(fs::path(cfg.out) / "manifest.json", manifest_json(ex) + "\n");
    {
      std::ofstream g(fs::path(cfg.out) / "graph.edges");
      write_edge_list(g, ex.graph);
    }
    execute(ex, rep, log);
  } catch (const ConfigError& e) {
    rep.exit_code = kExitConfig;
    rep.error = e.what();
  } catch (const json::exception& e) {
    rep.exit_code = kExitConfig;
    rep.error = std::string("manifest: ") + e.what();
  } catch (const StructuralError& e) {
    rep.exit_code = kExitConfig;
    rep.error = e.what();
  } catch (const Error& e) {
    rep.exit_code = kExitNumerical;
    rep.error = e.what();
  }
  if (have_dir) {
    try {
      write_text(fs::path(cfg.out) / "summary.json", summary_json(rep, cfg).dump(2) + "\n");
      std::ostringstream txt;
      write_summary_text(txt, rep);
      write_text(fs::path(cfg.out) / "summary.txt", txt.str());
    } catch (const ConfigError& e) {
      if (rep.exit_code == kExitPass) rep.exit_code = kExitConfig;
      rep.error = e.what();
    }
  }
  return rep;
}

std::vector<std::vector<std::string>> read_sweep_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep file '" + path + "'");
  std::vector<std::vector<std::string>> runs;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> words;
    for (std::string w; ls >> w;) {
      if (w[0] == '#') break;
      words.push_back(w);
    }
    if (!words.empty()) runs.push_back(std::move(words));
  }
  if (runs.empty()) throw ConfigError("sweep file '" + path + "' lists no runs");
  return runs;
}

int run_sweep(const RunConfig& base, const std::string& sweep_path, unsigned workers, std::ostream* log) {
  const auto runs = read_sweep_file(sweep_path);
  std::vector<RunConfig> configs;
  std::vector<RunReport> reports(runs.size());
  for (size_t k = 0; k < runs.size(); ++k) {
    RunConfig c = base;
    std::ostringstream dir;
    dir << "run_" << std::setw(3) << std::setfill('0') << k;
    c.out = (fs::path(base.out) / dir.str()).string();
    try {
      for (const std::string& o : runs[k]) apply_override(c, o);
    } catch (const ConfigError& e) {
      reports[k].exit_code = kExitConfig;
      reports[k].error = e.what();
    }
    configs.push_back(std::move(c));
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(configs.size()));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < configs.size(); k = next++)
      if (reports[k].exit_code != kExitConfig) reports[k] = run_experiment(configs[k]);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  int worst = kExitPass;
  std::error_code ec;
  fs::create_directories(base.out, ec);
  std::ofstream index(fs::path(base.out) / "sweep.csv");
  index << "run,exit_code,out,overrides\n";
  for (size_t k = 0; k < configs.size(); ++k) {
    worst = std::max(worst, reports[k].exit_code);
    std::string joined;
    for (const std::string& o : runs[k]) joined += (joined.empty() ? "" : " ") + o;
    index << k << ',' << reports[k].exit_code << ',' << configs[k].out << ",\"" << joined << "\"\n";
    if (log) *log << "run " << k << " exit " << reports[k].exit_code << "  " << joined
                  << (reports[k].error.empty() ? "" : "  (" + reports[k].error + ")") << '\n';
  }
  return worst;
}

}  // namespace ptgne
