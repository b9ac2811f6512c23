#include "ptgne/cli.hpp"
#include "ptgne/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prescribed-time v-GNE seeking: centralized and distributed solvers"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run a benchmark and write traces, manifest and summary");
  std::string config_path, benchmark, mode, out, sweep;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool per_agent = false;
  unsigned workers = 0;
  run->add_option("--config", config_path, "INI config file, or a manifest.json to replay")
      ->check(CLI::ExistingFile);
  run->add_option("--benchmark", benchmark, "cournot | sensor | custom-manifest");
  run->add_option("--mode", mode, "centralized | distributed | both");
  run->add_option("--seed", seed, "Problem seed (initial states use seed+1, estimates seed+2)");
  run->add_option("--out", out, "Output directory");
  run->add_option("--override", overrides, "section.key=value, repeatable")->take_all();
  run->add_option("--sweep", sweep, "File with one override set per line")->check(CLI::ExistingFile);
  run->add_option("--workers", workers, "Concurrent sweep runs (default: hardware threads)");
  run->add_flag("--per-agent", per_agent, "Also write wide per-agent CSV files");

  CLI::App* keys = app.add_subcommand("keys", "List every configuration key");

  CLI11_PARSE(app, argc, argv);

  if (*keys) {
    for (const std::string& k : ptgne::config_keys()) std::cout << k << '\n';
    return 0;
  }

  ptgne::RunConfig cfg;
  try {
    std::string manifest;
    std::string chosen = benchmark;
    const bool ini = !config_path.empty() && !ends_with(config_path, ".json");
    if (!config_path.empty() && !ini) {
      manifest = config_path;
      if (chosen.empty()) chosen = "custom-manifest";
    }
    if (chosen.empty() && ini) chosen = ptgne::peek_benchmark(config_path);
    const ptgne::Benchmark kind = chosen.empty() ? ptgne::Benchmark::Cournot : ptgne::benchmark_from_string(chosen);

    cfg = ptgne::default_config(kind);
    if (ini) ptgne::load_config_file(cfg, config_path);
    cfg.benchmark = kind;
    if (!manifest.empty()) cfg.manifest = manifest;
    if (!mode.empty()) cfg.mode = ptgne::run_mode_from_string(mode);
    if (seed) cfg.seed = *seed;
    if (!out.empty()) cfg.out = out;
    if (per_agent) cfg.per_agent = true;
    for (const std::string& o : overrides) ptgne::apply_override(cfg, o);
    if (cfg.benchmark != ptgne::Benchmark::CustomManifest) ptgne::validate_config(cfg);
  } catch (const ptgne::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return ptgne::kExitConfig;
  }

  if (!sweep.empty()) {
    try {
      return ptgne::run_sweep(cfg, sweep, workers, &std::cout);
    } catch (const ptgne::ConfigError& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return ptgne::kExitConfig;
    }
  }

  const ptgne::RunReport report = ptgne::run_experiment(cfg, &std::cout);
  ptgne::write_summary_text(std::cout, report);
  if (report.exit_code == ptgne::kExitConfig) std::cerr << "configuration error: " << report.error << '\n';
  return report.exit_code;
}
