// docrep: run document-representation experiments from a config file.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "docrep/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  bool deterministic = false;
  std::optional<std::size_t> ntrees;
  std::optional<std::size_t> mtry;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "Experiment config (.yaml, .yml or .json)")->required();
  cmd->add_option("--seed", o.seed, "Master seed (overrides the config)");
  cmd->add_option("-j,--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--deterministic", o.deterministic, "Run pipelines one at a time (results are seed-determined either way)");
  cmd->add_option("--ntrees", o.ntrees, "Trees per forest")->check(CLI::PositiveNumber);
  cmd->add_option("--mtry", o.mtry, "Fixed features per split (disables tuning)")->check(CLI::PositiveNumber);
}

docrep::ExperimentConfig load(const Overrides& o) {
  docrep::ExperimentConfig cfg;
  try {
    cfg = docrep::load_config(o.config);
  } catch (const std::exception& e) {
    throw docrep::StageError("config", e.what());
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.deterministic) cfg.deterministic = true;
  if (o.ntrees) cfg.forest.n_trees = *o.ntrees;
  if (o.mtry) {
    cfg.forest.mtry = *o.mtry;
    cfg.tune_mtry = false;
  }
  return cfg;
}

void print_stage(const docrep::RunManifest& m, const std::string& stage) {
  if (const auto* s = m.stage(stage)) {
    std::cerr << stage << ": " << s->artifacts.size() << " artifacts in " << std::fixed << std::setprecision(3) << s->seconds
              << std::defaultfloat << " s\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document representation experiments: preprocess, featurize, train, evaluate, rank, report"};
  app.require_subcommand(1);

  Overrides o;
  std::size_t sweep = 1;
  std::vector<std::pair<std::string, CLI::App*>> stage_cmds;
  const std::vector<std::pair<std::string, std::string>> stages = {
      {"ingest", "Load and preprocess corpora, write statistics and splits"},
      {"featurize", "Fit representations on training documents and write feature matrices"},
      {"train", "Tune mtry and train one random forest per corpus and model"},
      {"evaluate", "Score test documents and write evaluation reports"},
      {"rank", "Pareto-rank models per corpus for every metric"},
      {"report", "Write report, rank and plot-data CSVs"},
  };
  for (const auto& [name, help] : stages) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, o);
    stage_cmds.emplace_back(name, cmd);
  }
  auto* run_all = app.add_subcommand("run-all", "Run every stage in order");
  add_common(run_all, o);
  run_all->add_option("--sweep", sweep, "Repeat with seeds seed, seed+1, ... (one run directory each)")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = load(o);
    if (run_all->parsed()) {
      const auto base = cfg.seed;
      for (std::size_t k = 0; k < sweep; ++k) {
        cfg.seed = base + k;
        const auto m = docrep::run_experiment(cfg);
        for (const auto& s : docrep::stage_names()) print_stage(m, s);
        std::cout << m.root.string() << '\n';
      }
      return EXIT_SUCCESS;
    }
    for (const auto& [name, cmd] : stage_cmds) {
      if (!cmd->parsed()) continue;
      auto m = docrep::open_run(cfg);
      docrep::run_stage(cfg, name, m);
      print_stage(m, name);
      std::cout << m.root.string() << '\n';
    }
    return EXIT_SUCCESS;
  } catch (const docrep::StageError& e) {
    std::cerr << "docrep: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "docrep: [internal] " << e.what() << '\n';
  }
  return EXIT_FAILURE;
}
