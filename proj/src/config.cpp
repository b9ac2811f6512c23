#include "ptgne/config.hpp"

#include "ptgne/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ptgne {

std::string to_string(Benchmark b) {
  switch (b) {
    case Benchmark::Cournot: return "cournot";
    case Benchmark::Sensor: return "sensor";
    case Benchmark::CustomManifest: return "custom-manifest";
  }
  return "?";
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::Centralized: return "centralized";
    case RunMode::Distributed: return "distributed";
    case RunMode::Both: return "both";
  }
  return "?";
}

Benchmark benchmark_from_string(const std::string& s) {
  if (s == "cournot") return Benchmark::Cournot;
  if (s == "sensor") return Benchmark::Sensor;
  if (s == "custom-manifest") return Benchmark::CustomManifest;
  throw ConfigError("run.benchmark: expected cournot, sensor or custom-manifest, got '" + s + "'");
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "centralized") return RunMode::Centralized;
  if (s == "distributed") return RunMode::Distributed;
  if (s == "both") return RunMode::Both;
  throw ConfigError("run.mode: expected centralized, distributed or both, got '" + s + "'");
}

RunConfig default_config(Benchmark b) {
  RunConfig cfg;
  cfg.benchmark = b;
  if (b == Benchmark::Sensor) {
    cfg.gains.horizon = 0.5;
    cfg.gains.mu_c = 2.0;
    cfg.tol.convergence = 1e-7;
  }
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string s = trim(v);
  double out = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (s.empty() || ec != std::errc() || ptr != end)
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

long long parse_integer(const std::string& key, const std::string& v) {
  const std::string s = trim(v);
  long long out = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (s.empty() || ec != std::errc() || ptr != end)
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string s = trim(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <class Member>
Setter number(Member member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v) {
    member(c) = parse_double(k, v);
  };
}

template <class Member>
Setter count(Member member, long long lo) {
  return [member, lo](RunConfig& c, const std::string& k, const std::string& v) {
    const long long n = parse_integer(k, v);
    if (n < lo) throw ConfigError(k + ": must be at least " + std::to_string(lo));
    member(c) = static_cast<std::decay_t<decltype(member(c))>>(n);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["run.benchmark"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.benchmark = benchmark_from_string(trim(v));
    };
    t["run.mode"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.mode = run_mode_from_string(trim(v));
    };
    t["run.seed"] = count([](RunConfig& c) -> std::uint64_t& { return c.seed; }, 0);
    t["run.graph"] = [](RunConfig& c, const std::string&, const std::string& v) { c.graph = trim(v); };
    t["run.manifest"] = [](RunConfig& c, const std::string&, const std::string& v) { c.manifest = trim(v); };
    t["run.out"] = [](RunConfig& c, const std::string&, const std::string& v) { c.out = trim(v); };
    t["run.per_agent"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.per_agent = parse_bool(k, v);
    };

    t["gains.horizon"] = number([](RunConfig& c) -> double& { return c.gains.horizon; });
    t["gains.mu_c"] = number([](RunConfig& c) -> double& { return c.gains.mu_c; });
    t["gains.k_o"] = number([](RunConfig& c) -> double& { return c.gains.k_o; });
    t["gains.c_o"] = number([](RunConfig& c) -> double& { return c.gains.c_o; });
    t["gains.gamma_c"] = number([](RunConfig& c) -> double& { return c.gains.gamma_c; });
    t["gains.k_d"] = number([](RunConfig& c) -> double& { return c.gains.k_d; });
    t["gains.epsilon_bar"] = number([](RunConfig& c) -> double& { return c.gains.epsilon_bar; });
    t["gains.epsilon"] = number([](RunConfig& c) -> double& { return c.epsilon; });

    t["integrator.method"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      try {
        c.integrator.method = method_from_string(trim(v));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(k + ": " + e.what());
      }
    };
    t["integrator.rel_tol"] = number([](RunConfig& c) -> double& { return c.integrator.rel_tol; });
    t["integrator.abs_tol"] = number([](RunConfig& c) -> double& { return c.integrator.abs_tol; });
    t["integrator.max_step_fraction"] =
        number([](RunConfig& c) -> double& { return c.integrator.max_step_fraction; });
    t["integrator.trace_stride"] = count([](RunConfig& c) -> int& { return c.integrator.trace_stride; }, 1);

    t["tolerances.convergence"] = number([](RunConfig& c) -> double& { return c.tol.convergence; });
    t["tolerances.consensus"] = number([](RunConfig& c) -> double& { return c.tol.consensus; });
    t["tolerances.olf"] = number([](RunConfig& c) -> double& { return c.tol.olf; });
    t["tolerances.dual"] = number([](RunConfig& c) -> double& { return c.tol.dual; });
    t["tolerances.agreement"] = number([](RunConfig& c) -> double& { return c.tol.agreement; });
    t["tolerances.monotone"] = number([](RunConfig& c) -> double& { return c.tol.monotone; });

    t["initial.x0"] = number([](RunConfig& c) -> double& { return c.initial.x0; });
    t["initial.disc_radius"] = number([](RunConfig& c) -> double& { return c.initial.disc_radius; });
    t["initial.lambda_lo"] = number([](RunConfig& c) -> double& { return c.initial.duals.lambda_lo; });
    t["initial.lambda_hi"] = number([](RunConfig& c) -> double& { return c.initial.duals.lambda_hi; });
    t["initial.mu_lo"] = number([](RunConfig& c) -> double& { return c.initial.duals.mu_lo; });
    t["initial.mu_hi"] = number([](RunConfig& c) -> double& { return c.initial.duals.mu_hi; });
    t["initial.perturbation"] = number([](RunConfig& c) -> double& { return c.initial.perturbation; });

    t["cournot.agents"] = count([](RunConfig& c) -> int& { return c.cournot.agents; }, 1);
    t["cournot.base_price"] = number([](RunConfig& c) -> double& { return c.cournot.base_price; });
    t["cournot.elasticity"] = number([](RunConfig& c) -> double& { return c.cournot.elasticity; });
    t["cournot.alpha_lo"] = number([](RunConfig& c) -> double& { return c.cournot.alpha_lo; });
    t["cournot.alpha_hi"] = number([](RunConfig& c) -> double& { return c.cournot.alpha_hi; });
    t["cournot.beta_lo"] = number([](RunConfig& c) -> double& { return c.cournot.beta_lo; });
    t["cournot.beta_hi"] = number([](RunConfig& c) -> double& { return c.cournot.beta_hi; });
    t["cournot.r_lo"] = number([](RunConfig& c) -> double& { return c.cournot.r_lo; });
    t["cournot.r_hi"] = number([](RunConfig& c) -> double& { return c.cournot.r_hi; });
    t["cournot.capacity"] = number([](RunConfig& c) -> double& { return c.cournot.capacity; });
    t["cournot.quota_target"] = number([](RunConfig& c) -> double& { return c.cournot.quota_target; });

    t["sensor.agents"] = count([](RunConfig& c) -> int& { return c.sensor.agents; }, 1);
    t["sensor.target_radius"] = number([](RunConfig& c) -> double& { return c.sensor.target_radius; });
    t["sensor.max_radius"] = number([](RunConfig& c) -> double& { return c.sensor.max_radius; });
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(cfg, key, value);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  set_config_value(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
  cfg.overrides.push_back(assignment);
}

namespace {

boost::property_tree::ptree read_ini(std::istream& in, const std::string& name) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    std::ostringstream os;
    os << name << ":" << e.line() << ": " << e.message();
    throw ConfigError(os.str());
  }
  return tree;
}

void apply_tree(RunConfig& cfg, const boost::property_tree::ptree& tree) {
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' must sit inside a [section]");
    for (const auto& [key, value] : body) set_config_value(cfg, section + "." + key, value.data());
  }
}

}  // namespace

void load_config_stream(RunConfig& cfg, std::istream& in) { apply_tree(cfg, read_ini(in, "<config>")); }

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const auto tree = read_ini(in, path);
  try {
    apply_tree(cfg, tree);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string peek_benchmark(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const auto tree = read_ini(in, path);
  return tree.get<std::string>("run.benchmark", "");
}

void validate_config(const RunConfig& cfg) {
  try {
    cfg.gains.validate();
    cfg.integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.epsilon > 0.0)) throw ConfigError("gains.epsilon must be positive");
  const std::pair<const char*, double> tols[] = {
      {"tolerances.convergence", cfg.tol.convergence}, {"tolerances.consensus", cfg.tol.consensus},
      {"tolerances.olf", cfg.tol.olf},                 {"tolerances.dual", cfg.tol.dual},
      {"tolerances.agreement", cfg.tol.agreement},     {"tolerances.monotone", cfg.tol.monotone}};
  for (const auto& [name, v] : tols)
    if (!(v >= 0.0)) throw ConfigError(std::string(name) + " must be non-negative");
  if (!(cfg.initial.perturbation >= 0.0)) throw ConfigError("initial.perturbation must be non-negative");
  if (!(cfg.initial.disc_radius >= 0.0)) throw ConfigError("initial.disc_radius must be non-negative");
  if (cfg.initial.duals.lambda_lo > cfg.initial.duals.lambda_hi)
    throw ConfigError("initial.lambda_lo exceeds initial.lambda_hi");
  if (cfg.initial.duals.mu_lo > cfg.initial.duals.mu_hi)
    throw ConfigError("initial.mu_lo exceeds initial.mu_hi");
  if (cfg.benchmark == Benchmark::CustomManifest && cfg.manifest.empty())
    throw ConfigError("run.manifest is required for the custom-manifest benchmark");
}

}  // namespace ptgne
