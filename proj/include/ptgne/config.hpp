#pragma once

#include "ptgne/bench.hpp"
#include "ptgne/integrate.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ptgne {

enum class Benchmark { Cournot, Sensor, CustomManifest };
enum class RunMode { Centralized, Distributed, Both };

std::string to_string(Benchmark b);
std::string to_string(RunMode m);
Benchmark benchmark_from_string(const std::string& s);
RunMode run_mode_from_string(const std::string& s);

struct Tolerances {
  double convergence = 1e-8;  // centralized ||S(z(T))||
  double consensus = 1e-7;
  double olf = 1e-14;
  double dual = 1e-8;
  double agreement = 1e-6;    // cross-solver and oracle agreement
  double monotone = 1e-8;     // relative V increase allowed between trace rows
};

struct InitialSpec {
  double x0 = 5.0;            // Cournot production level
  double disc_radius = 5.0;   // sensor positions
  InitialDuals duals;
  double perturbation = 1.0;  // estimate perturbation radius
};

/// Everything a run needs. Defaults depend on the benchmark, see default_config.
struct RunConfig {
  Benchmark benchmark = Benchmark::Cournot;
  RunMode mode = RunMode::Both;
  std::uint64_t seed = 1;  // problem draws; initial states use seed + 1, estimates seed + 2
  std::string graph = "dfstree:20:1";
  std::string manifest;    // source manifest for custom-manifest runs
  std::string out = "ptgne-out";
  bool per_agent = false;

  GainSchedule gains;
  double epsilon = 1e-8;
  IntegratorConfig integrator;
  Tolerances tol;
  InitialSpec initial;
  CournotConfig cournot;
  SensorConfig sensor;

  /// "section.key=value" strings applied after the defaults, in order.
  std::vector<std::string> overrides;

  std::uint64_t initial_seed() const { return seed + 1; }
  std::uint64_t estimate_seed() const { return seed + 2; }
};

/// Paper parameter sets: T = 10 for Cournot; T = 0.5 and mu_c = 2 for the
/// sensor game (its mu_c is not given in the source experiments).
RunConfig default_config(Benchmark b);

/// Sets one "section.key". Throws ConfigError naming the key for unknown keys
/// or unparsable values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Applies "section.key=value" and records it in cfg.overrides.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Reads an INI-style file. Sections: run, gains, integrator, tolerances,
/// initial, cournot, sensor. Parse errors carry the line number.
void load_config_file(RunConfig& cfg, const std::string& path);
void load_config_stream(RunConfig& cfg, std::istream& in);

/// Reads only run.benchmark from a config file, if present.
std::string peek_benchmark(const std::string& path);

/// Full validation of gains, integrator and tolerances.
void validate_config(const RunConfig& cfg);

/// All recognised keys, for documentation and error messages.
const std::vector<std::string>& config_keys();

}  // namespace ptgne
