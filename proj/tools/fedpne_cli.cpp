#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fedpne/config.hpp"
#include "fedpne/csvio.hpp"
#include "fedpne/harness.hpp"
#include "fedpne/svgplot.hpp"

namespace fs = std::filesystem;
using namespace fedpne;

namespace {

int cmd_run(const std::string& config_path, const ConfigOverrides& ov,
            const std::string& out_dir) {
  ExperimentConfig cfg = load_config(config_path, ov);
  BuiltObjective built = build_objective(cfg);
  fs::create_directories(out_dir);

  {
    std::ofstream echo(fs::path(out_dir) / "config_resolved.json",
                       std::ios::binary | std::ios::trunc);
    if (!echo) throw std::runtime_error(out_dir + "/config_resolved.json: cannot write");
    echo << config_to_json(cfg);
  }

  std::vector<RegretSummary> runs;
  for (uint64_t seed : cfg.seeds) {
    ObjectiveEnsemble ens =
        make_ensemble(built.objective, cfg.server.M, cfg.perturb_scale, cfg.noise, seed);
    RunTrace trace;
    if (cfg.algorithm == Algorithm::grid) {
      GridBaselineSetup gs{cfg.server, ens, built.fstar, cfg.grid.K, cfg.grid.c};
      trace = run_grid_baseline(gs, seed);
    } else {
      RunSetup rs{cfg.server, ens, built.fstar,
                  cfg.algorithm == Algorithm::dp_fedpne ? cfg.dp_sigma2 : 0.0};
      trace = run_experiment(rs, seed);
    }
    std::string tag = "seed" + std::to_string(seed);
    emit_trace(trace, (fs::path(out_dir) / ("trace_" + tag + ".csv")).string());
    emit_communication(trace, (fs::path(out_dir) / ("comm_" + tag + ".csv")).string());
    runs.push_back(cumulative_regret(trace));
    const RegretSummary& r = runs.back();
    std::printf("seed %llu: phases=%d comm_events=%lld final_avg_regret=%.6g\n",
                (unsigned long long)seed, r.completed_phases, r.comm_events,
                r.average.empty() ? 0.0 : r.average.back());
  }

  AggregatedRegret agg = aggregate_runs(runs);
  emit_summary(agg, (fs::path(out_dir) / "summary.csv").string());
  std::printf("wrote %zu seed runs and summary.csv to %s\n", runs.size(),
              out_dir.c_str());
  return 0;
}

std::string series_label(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "config_resolved.json", std::ios::binary);
  if (in) {
    try {
      nlohmann::json j = nlohmann::json::parse(in);
      std::string algo = j.value("algorithm", "");
      if (!algo.empty() && j.contains("M"))
        return algo + " M=" + std::to_string(j["M"].get<long long>());
    } catch (...) {
      // fall through to the directory name
    }
  }
  fs::path p = fs::path(dir).lexically_normal();
  std::string name = p.filename().string();
  return name.empty() ? dir : name;
}

int cmd_plot(const std::vector<std::string>& in_dirs, const std::string& out_file) {
  std::vector<PlotSeries> series;
  for (const std::string& dir : in_dirs) {
    AggregatedRegret agg = parse_summary((fs::path(dir) / "summary.csv").string());
    series.push_back({series_label(dir), agg.mean, agg.stddev});
  }
  render_regret_plot(series, out_file);
  std::printf("wrote %s (%zu series)\n", out_file.c_str(), series.size());
  return 0;
}

int cmd_oracle(const std::string& name, long resolution) {
  Objective obj;
  if (name == "garland") obj = make_garland();
  else if (name == "doublesine") obj = make_doublesine(0.3, 0.8);
  else if (name == "covid") obj = make_covid_objective(SeirParams{}, InfectionMetric::cumulative_infected);
  else throw std::runtime_error("unknown objective '" + name + "' (garland | doublesine | covid)");
  if (resolution == 0) resolution = name == "covid" ? 4001 : 1000000;
  FstarEstimate est = estimate_fstar(obj, resolution);
  std::printf("f* = %.17g\n", est.value);
  std::printf("argmax =");
  for (double x : est.argmax) std::printf(" %.17g", x);
  std::printf("\n");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"federated X-armed bandit experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  ConfigOverrides ov;
  long long seed_override = 0;
  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "config file (JSON)")->required();
  auto* seed_opt = run->add_option("--seed-override", seed_override, "run only this seed");
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_option("--algo", ov.algorithm, "override algorithm: fedpne | dp-fedpne | grid")
      ->check(CLI::IsMember({"fedpne", "dp-fedpne", "grid"}));
  run->add_option("--preset", ov.preset, "override preset: experimental | theory")
      ->check(CLI::IsMember({"experimental", "theory"}));

  std::vector<std::string> in_dirs;
  std::string out_file;
  CLI::App* plot = app.add_subcommand("plot", "render a regret plot from run output");
  plot->add_option("--in", in_dirs, "run output directory (repeatable)")->required();
  plot->add_option("--out", out_file, "output SVG file")->required();

  std::string objective_name;
  long resolution = 0;
  CLI::App* oracle = app.add_subcommand("oracle", "print an objective's optimum");
  oracle->add_option("--objective", objective_name, "garland | doublesine | covid")
      ->required();
  oracle->add_option("--resolution", resolution, "grid points (default per objective)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (run->parsed()) {
      if (seed_opt->count()) {
        if (seed_override < 0) throw std::runtime_error("--seed-override must be >= 0");
        ov.has_seed = true;
        ov.seed = (uint64_t)seed_override;
      }
      return cmd_run(config_path, ov, out_dir);
    }
    if (plot->parsed()) return cmd_plot(in_dirs, out_file);
    return cmd_oracle(objective_name, resolution);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& ch : msg)
      if (ch == '\n') ch = ' ';
    std::cerr << "error: " << msg << "\n";
    return 1;
  }
}
