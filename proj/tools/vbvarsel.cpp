// vbvarsel/tools/vbvarsel.cpp

// Copyright 2026  The vbvarsel authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command line front end: fit a single model, run a repetition experiment,
// generate synthetic data, or rerun the canned benchmark tables.
//
// Exit codes: 0 success, 1 configuration problem, 2 data or numerical
// problem.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "vbvarsel/vbvarsel.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string input;
  std::string output;
  int repetitions = -1;
  long long seed = -1;
  int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path,
                  "key=value config file, one entry per line");
  cmd->add_option("--set", args->overrides,
                  "override a config key, e.g. --set hyper.alpha0=0.05")
      ->take_all();
  cmd->add_option("--input", args->input, "data CSV (rows x covariates)");
  cmd->add_option("--output", args->output, "artifact directory");
  cmd->add_option("--repetitions", args->repetitions, "repetition count");
  cmd->add_option("--seed", args->seed, "base seed");
  cmd->add_option("--workers", args->workers, "concurrent repetitions");
}

vbvarsel::RunConfig build_config(const CommonArgs& args) {
  vbvarsel::ConfigMap map;
  if (!args.config_path.empty()) {
    map = vbvarsel::parse_config_file(args.config_path);
  }
  vbvarsel::apply_overrides(map, args.overrides);
  if (!args.input.empty()) map["input"] = args.input;
  if (!args.output.empty()) map["output"] = args.output;
  if (args.repetitions >= 0) {
    map["repetitions"] = std::to_string(args.repetitions);
  }
  if (args.seed >= 0) map["seed"] = std::to_string(args.seed);
  if (args.workers >= 0) map["workers"] = std::to_string(args.workers);
  return vbvarsel::RunConfig::from_map(map);
}

void print_summary(const vbvarsel::ExperimentResult& result) {
  const vbvarsel::RepetitionSummary& s = result.summary;
  std::printf("repetitions %d, failures %d\n", s.repetitions, s.failures);
  auto line = [](const char* name, const vbvarsel::MetricQuartiles& mq) {
    if (mq.count == 0) return;
    std::printf("  %-24s %.4f [%.4f, %.4f]  (n=%d)\n", name, mq.q.median,
                mq.q.lower, mq.q.upper, mq.count);
  };
  line("ari", s.ari);
  line("relevant_selected", s.relevant_selected);
  line("irrelevant_deselected", s.irrelevant_deselected);
  line("n_selected", s.n_selected);
  line("effective_k", s.effective_k);
  line("iterations", s.iterations);
  line("seconds", s.seconds);
  for (const vbvarsel::RepetitionRecord& r : result.records) {
    if (r.failed) {
      std::fprintf(stderr, "repetition %d failed: %s\n", r.repetition,
                   r.error.c_str());
    } else if (r.elbo_decreased) {
      std::fprintf(stderr,
                   "warning: repetition %d saw the bound decrease at T=1\n",
                   r.repetition);
    }
  }
}

int run_fit(const CommonArgs& args) {
  vbvarsel::ConfigMap defaults;
  defaults["repetitions"] = "1";
  defaults["shuffle_covariates"] = "false";
  vbvarsel::ConfigMap map;
  if (!args.config_path.empty()) {
    map = vbvarsel::parse_config_file(args.config_path);
  }
  for (const auto& [key, value] : defaults) {
    map.emplace(key, value);
  }
  CommonArgs patched = args;
  patched.config_path.clear();
  vbvarsel::apply_overrides(map, patched.overrides);
  if (!args.input.empty()) map["input"] = args.input;
  if (!args.output.empty()) map["output"] = args.output;
  if (args.seed >= 0) map["seed"] = std::to_string(args.seed);
  if (args.workers >= 0) map["workers"] = std::to_string(args.workers);
  const vbvarsel::RunConfig cfg = vbvarsel::RunConfig::from_map(map);

  const vbvarsel::ExperimentResult result = vbvarsel::run_experiment(cfg);
  const vbvarsel::RepetitionRecord& rec = result.records.front();
  if (rec.failed) {
    throw vbvarsel::InvalidData(rec.error);
  }
  std::printf("converged %s after %d iterations, %.2fs\n",
              rec.converged ? "yes" : "no", rec.iterations, rec.seconds);
  std::printf("clusters %d, covariates selected %d\n", rec.effective_k,
              rec.n_selected);
  if (!std::isnan(rec.ari)) std::printf("ari %.4f\n", rec.ari);
  if (!std::isnan(rec.relevant_selected)) {
    std::printf("relevant selected %.4f, irrelevant deselected %.4f\n",
                rec.relevant_selected, rec.irrelevant_deselected);
  }
  if (rec.elbo_decreased) {
    std::fprintf(stderr, "warning: the bound decreased at T=1\n");
  }
  return 0;
}

int run_experiment_cmd(const CommonArgs& args) {
  const vbvarsel::RunConfig cfg = build_config(args);
  const vbvarsel::ExperimentResult result = vbvarsel::run_experiment(cfg);
  print_summary(result);
  return 0;
}

int run_simulate(const CommonArgs& args) {
  vbvarsel::ConfigMap map;
  if (!args.config_path.empty()) {
    map = vbvarsel::parse_config_file(args.config_path);
  }
  map["simulate"] = "true";
  vbvarsel::apply_overrides(map, args.overrides);
  if (!args.output.empty()) map["output"] = args.output;
  if (args.seed >= 0) map["simulate.seed"] = std::to_string(args.seed);
  const vbvarsel::RunConfig cfg = vbvarsel::RunConfig::from_map(map);
  if (cfg.output.empty()) {
    throw vbvarsel::ConfigError("simulate needs --output");
  }
  const vbvarsel::SyntheticDataset ds = vbvarsel::generate(cfg.spec);
  std::filesystem::create_directories(cfg.output);
  const std::filesystem::path dir(cfg.output);
  vbvarsel::write_csv((dir / "data.csv").string(), ds.data);
  vbvarsel::write_truth_labels_csv((dir / "truth_labels.csv").string(),
                                   ds.labels);
  vbvarsel::write_truth_relevant_csv((dir / "truth_relevant.csv").string(),
                                     ds.relevant);
  std::printf("wrote %lld x %lld dataset to %s\n",
              static_cast<long long>(ds.data.n()),
              static_cast<long long>(ds.data.j()), cfg.output.c_str());
  return 0;
}

int run_reproduce(const CommonArgs& args, const std::string& table) {
  std::vector<std::string> tables;
  if (table == "all") {
    tables = vbvarsel::reproduction_tables();
  } else {
    tables.push_back(table);
  }
  const std::uint64_t base_seed =
      args.seed >= 0 ? static_cast<std::uint64_t>(args.seed) : 0;
  const int workers = args.workers >= 1 ? args.workers : 1;
  for (const std::string& id : tables) {
    const std::vector<vbvarsel::Scenario> scenarios =
        vbvarsel::reproduction_scenarios(id);
    std::vector<vbvarsel::ScenarioResult> results;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      std::string scenario_dir;
      if (!args.output.empty()) {
        scenario_dir = (std::filesystem::path(args.output) / id /
                        ("scenario_" + std::to_string(i)))
                           .string();
      }
      results.push_back(vbvarsel::run_scenario(scenarios[i], base_seed,
                                               workers, scenario_dir,
                                               args.repetitions));
    }
    std::fputs(vbvarsel::format_reproduction_report(id, results).c_str(),
               stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational clustering with covariate selection"};
  app.require_subcommand(1);

  CommonArgs fit_args, experiment_args, simulate_args, reproduce_args;
  std::string table;

  CLI::App* fit_cmd = app.add_subcommand("fit", "single fit on one dataset");
  add_common(fit_cmd, &fit_args);
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "repeated fits with aggregation");
  add_common(experiment_cmd, &experiment_args);
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "generate a synthetic dataset");
  add_common(simulate_cmd, &simulate_args);
  CLI::App* reproduce_cmd =
      app.add_subcommand("reproduce", "rerun a canned benchmark table");
  add_common(reproduce_cmd, &reproduce_args);
  reproduce_cmd
      ->add_option("table", table,
                   "table id or 'all'; see --list for the known ids")
      ->required(false);
  bool list_tables = false;
  reproduce_cmd->add_flag("--list", list_tables, "list known table ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit_args);
    if (experiment_cmd->parsed()) return run_experiment_cmd(experiment_args);
    if (simulate_cmd->parsed()) return run_simulate(simulate_args);
    if (reproduce_cmd->parsed()) {
      if (list_tables) {
        for (const std::string& id : vbvarsel::reproduction_tables()) {
          std::printf("%s\n", id.c_str());
        }
        return 0;
      }
      if (table.empty()) {
        throw vbvarsel::ConfigError("reproduce needs a table id or 'all'");
      }
      return run_reproduce(reproduce_args, table);
    }
  } catch (const vbvarsel::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const vbvarsel::DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
