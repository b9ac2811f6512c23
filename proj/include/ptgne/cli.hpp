#pragma once

#include "ptgne/bench.hpp"
#include "ptgne/config.hpp"
#include "ptgne/distributed.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ptgne {

enum ExitCode : int { kExitPass = 0, kExitAssertion = 1, kExitConfig = 2, kExitNumerical = 3 };

/// One acceptance assertion: pass iff `value op threshold`. `source` names the
/// artifact column or manifest field the value comes from.
struct SummaryEntry {
  std::string name;
  double value = 0.0;
  std::string op = "<=";
  double threshold = 0.0;
  bool pass = false;
  std::string source;
};

/// Reported but never asserted.
struct SummaryInfo {
  std::string name;
  double value = 0.0;
  std::string source;
};

struct RunReport {
  int exit_code = kExitPass;
  std::string error;  // set for configuration or numerical failures
  std::vector<SummaryEntry> assertions;
  std::vector<SummaryInfo> info;
  std::string out_dir;

  bool passed() const;
};

/// A fully built benchmark: problem, graph, initial condition and the manifest
/// that reproduces all of them.
struct Experiment {
  RunConfig config;  // effective configuration (manifest values applied)
  Benchmark kind = Benchmark::Cournot;  // cournot or sensor
  std::optional<CournotInstance> cournot;
  std::optional<SensorInstance> sensor;
  CommGraph graph;
  std::vector<Vec> local_states;
  NetworkState initial_network;
  AugmentedState z0;

  Experiment(RunConfig cfg, CommGraph g, const Dimensions& dims)
      : config(std::move(cfg)), graph(std::move(g)), initial_network(dims) {}
  const GameProblem& problem() const;
};

/// Builds the benchmark named by cfg. For custom-manifest runs every recorded
/// value is taken from the manifest, then non-run overrides are reapplied.
Experiment prepare_experiment(const RunConfig& cfg);

/// Manifest JSON text for an experiment (full round-trip precision).
std::string manifest_json(const Experiment& ex);

/// Runs the configured solvers and writes manifest.json, trace CSVs and
/// summary.{json,txt} into cfg.out. Never throws for configuration or
/// numerical problems: they are mapped to exit codes in the report.
RunReport run_experiment(const RunConfig& cfg, std::ostream* log = nullptr);

/// Sweep file: one run per non-blank line, each line a whitespace-separated
/// list of section.key=value overrides applied on top of `base`. Runs execute
/// concurrently into base.out/run_NNN. Returns the worst exit code.
int run_sweep(const RunConfig& base, const std::string& sweep_path, unsigned workers = 0,
              std::ostream* log = nullptr);
std::vector<std::vector<std::string>> read_sweep_file(const std::string& path);

/// Summary text in the format written to summary.txt.
void write_summary_text(std::ostream& out, const RunReport& report);

}  // namespace ptgne
