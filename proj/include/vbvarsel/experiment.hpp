// vbvarsel/experiment.hpp

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

#ifndef VBVARSEL_EXPERIMENT_HPP_
#define VBVARSEL_EXPERIMENT_HPP_

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "vbvarsel/config.hpp"
#include "vbvarsel/csv.hpp"
#include "vbvarsel/engine.hpp"
#include "vbvarsel/metrics.hpp"
#include "vbvarsel/rng.hpp"
#include "vbvarsel/synthetic.hpp"

namespace vbvarsel {

namespace detail {

// Decorrelates the column-shuffle stream from the fit's own seed.
inline constexpr std::uint64_t kShuffleSalt = 0xda3e39cb94b95bdbULL;

inline void parallel_for(int count, int workers,
                         const std::function<void(int)>& fn) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&next, count, &fn] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

inline std::string rep_dir_name(int t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "rep_%03d", t);
  return buf;
}

}  // namespace detail

struct ExperimentResult {
  std::vector<RepetitionRecord> records;
  RepetitionSummary summary;
};

inline void write_assignments_csv(const std::string& path,
                                  const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write '" + path + "'");
  out << "observation_index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << i << "," << labels[i] << "\n";
  }
}

inline void write_selection_csv(const std::string& path,
                                const std::vector<std::string>& names,
                                const Eigen::VectorXd& c,
                                const std::vector<bool>& selected) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write '" + path + "'");
  out << "covariate_index,name,c,selected\n";
  for (Eigen::Index p = 0; p < c.size(); ++p) {
    const std::size_t sp = static_cast<std::size_t>(p);
    out << p << "," << (names.empty() ? std::to_string(p) : names[sp]) << ","
        << detail::format_double(c[p]) << "," << (selected[sp] ? 1 : 0)
        << "\n";
  }
}

inline void write_elbo_trace_csv(const std::string& path,
                                 const std::vector<double>& elbo,
                                 const std::vector<double>& temperature) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write '" + path + "'");
  out << "iteration,temperature,elbo\n";
  for (std::size_t i = 0; i < elbo.size(); ++i) {
    out << i << "," << detail::format_double(temperature[i]) << ","
        << detail::format_double(elbo[i]) << "\n";
  }
}

inline void write_truth_labels_csv(const std::string& path,
                                   const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write '" + path + "'");
  out << "observation_index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << i << "," << labels[i] << "\n";
  }
}

inline void write_truth_relevant_csv(const std::string& path,
                                     const std::vector<bool>& relevant) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write '" + path + "'");
  out << "covariate_index,relevant\n";
  for (std::size_t p = 0; p < relevant.size(); ++p) {
    out << p << "," << (relevant[p] ? 1 : 0) << "\n";
  }
}

// Repetition harness.  Repetition t fits with seed base_seed + t on a
// (by default) column-shuffled copy of the data, undoes the shuffle in the
// reported selection, scores against any ground truth, and optionally writes
// per-repetition artifacts into output_dir/rep_00t/.  A repetition that
// throws is recorded as failed and excluded from the aggregates; results are
// identical for any worker count because every repetition is self-contained.
inline ExperimentResult run_repetitions(
    const DataMatrix& data, const std::vector<int>* truth_labels,
    const std::vector<bool>* truth_relevant, const Hyperparameters& hyper,
    const TemperatureSchedule& schedule, int repetitions,
    std::uint64_t base_seed, bool shuffle_covariates, int workers,
    double selection_threshold, const std::string& output_dir) {
  if (truth_labels &&
      static_cast<Eigen::Index>(truth_labels->size()) != data.n()) {
    throw LengthMismatch("truth labels cover " +
                         std::to_string(truth_labels->size()) +
                         " observations, data has " + std::to_string(data.n()));
  }
  if (truth_relevant &&
      static_cast<Eigen::Index>(truth_relevant->size()) != data.j()) {
    throw LengthMismatch("relevance mask covers " +
                         std::to_string(truth_relevant->size()) +
                         " covariates, data has " + std::to_string(data.j()));
  }
  hyper.validate();
  schedule.validate();
  if (!output_dir.empty()) {
    std::filesystem::create_directories(output_dir);
  }

  const Eigen::Index j = data.j();
  ExperimentResult result;
  result.records.resize(static_cast<std::size_t>(repetitions));

  detail::parallel_for(repetitions, workers, [&](int t) {
    RepetitionRecord& rec = result.records[static_cast<std::size_t>(t)];
    rec.repetition = t;
    rec.seed = base_seed + static_cast<std::uint64_t>(t);
    try {
      std::vector<int> perm(static_cast<std::size_t>(j));
      for (Eigen::Index p = 0; p < j; ++p) {
        perm[static_cast<std::size_t>(p)] = static_cast<int>(p);
      }
      DataMatrix working = data;
      if (shuffle_covariates) {
        Rng shuffle_rng(rec.seed ^ detail::kShuffleSalt);
        perm = shuffle_rng.permutation(static_cast<int>(j));
        working.values.resize(data.n(), j);
        if (!data.column_names.empty()) {
          working.column_names.resize(static_cast<std::size_t>(j));
        }
        for (Eigen::Index p = 0; p < j; ++p) {
          const int src = perm[static_cast<std::size_t>(p)];
          working.values.col(p) = data.values.col(src);
          if (!data.column_names.empty()) {
            working.column_names[static_cast<std::size_t>(p)] =
                data.column_names[static_cast<std::size_t>(src)];
          }
        }
      }

      const auto start = std::chrono::steady_clock::now();
      const FitResult fit_result = fit(working, hyper, schedule, rec.seed);
      rec.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();

      // Undo the shuffle: report covariates in their original order.
      Eigen::VectorXd c_original(j);
      std::vector<bool> selected_original(static_cast<std::size_t>(j));
      for (Eigen::Index p = 0; p < j; ++p) {
        const std::size_t src = static_cast<std::size_t>(
            perm[static_cast<std::size_t>(p)]);
        c_original[static_cast<Eigen::Index>(src)] = fit_result.c[p];
        selected_original[src] = c_original[static_cast<Eigen::Index>(src)] >=
                                 selection_threshold;
      }

      rec.iterations = fit_result.iterations;
      rec.converged = fit_result.converged;
      rec.effective_k = fit_result.effective_k;
      rec.elbo_decreased = fit_result.elbo_decreased;
      rec.final_elbo = fit_result.elbo_trace.back();
      rec.n_selected = static_cast<int>(std::count(
          selected_original.begin(), selected_original.end(), true));

      if (truth_labels) {
        rec.ari = adjusted_rand_index(fit_result.labels, *truth_labels);
      }
      if (truth_relevant) {
        const SelectionMetrics sm =
            selection_metrics(selected_original, *truth_relevant);
        rec.relevant_selected = sm.relevant_selected;
        rec.irrelevant_deselected = sm.irrelevant_deselected;
        int n_rel = 0, overlap = 0;
        for (std::size_t p = 0; p < selected_original.size(); ++p) {
          if ((*truth_relevant)[p]) {
            ++n_rel;
            if (selected_original[p]) ++overlap;
          }
        }
        rec.enrichment_p = fisher_enrichment(overlap, n_rel, rec.n_selected,
                                             static_cast<int>(j));
      }

      if (!output_dir.empty()) {
        const std::filesystem::path dir =
            std::filesystem::path(output_dir) / detail::rep_dir_name(t);
        std::filesystem::create_directories(dir);
        write_assignments_csv((dir / "assignments.csv").string(),
                              fit_result.labels);
        write_selection_csv((dir / "selection.csv").string(),
                            data.column_names, c_original, selected_original);
        write_elbo_trace_csv((dir / "elbo_trace.csv").string(),
                             fit_result.elbo_trace,
                             fit_result.temperature_trace);
      }
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  });

  result.summary = aggregate(result.records);
  return result;
}

// --- JSON views ---------------------------------------------------------------

inline nlohmann::json to_json(const MetricQuartiles& mq) {
  return {{"count", mq.count},
          {"lower", mq.q.lower},
          {"median", mq.q.median},
          {"upper", mq.q.upper}};
}

inline nlohmann::json to_json(const RepetitionSummary& s) {
  return {{"repetitions", s.repetitions},
          {"failures", s.failures},
          {"ari", to_json(s.ari)},
          {"relevant_selected", to_json(s.relevant_selected)},
          {"irrelevant_deselected", to_json(s.irrelevant_deselected)},
          {"n_selected", to_json(s.n_selected)},
          {"effective_k", to_json(s.effective_k)},
          {"iterations", to_json(s.iterations)},
          {"seconds", to_json(s.seconds)}};
}

inline nlohmann::json to_json(const RepetitionRecord& r) {
  nlohmann::json out = {{"repetition", r.repetition},
                        {"seed", r.seed},
                        {"failed", r.failed}};
  if (r.failed) {
    out["error"] = r.error;
    return out;
  }
  out["ari"] = r.ari;
  out["relevant_selected"] = r.relevant_selected;
  out["irrelevant_deselected"] = r.irrelevant_deselected;
  out["enrichment_p"] = r.enrichment_p;
  out["n_selected"] = r.n_selected;
  out["effective_k"] = r.effective_k;
  out["iterations"] = r.iterations;
  out["converged"] = r.converged;
  out["elbo_decreased"] = r.elbo_decreased;
  out["final_elbo"] = r.final_elbo;
  out["seconds"] = r.seconds;
  return out;
}

inline nlohmann::json to_json(const TemperatureSchedule& s) {
  nlohmann::json out = {{"kind", to_string(s.kind)}, {"t0", s.t0}};
  if (s.kind != ScheduleKind::kFixed) {
    out["annealed_iterations"] = s.annealed_iterations;
  }
  return out;
}

inline nlohmann::json to_json(const Hyperparameters& h) {
  return {{"k_max", h.k_max},
          {"alpha0", h.alpha0},
          {"beta0", h.beta0},
          {"a0", h.a0},
          {"b0", h.b0_scale},
          {"d0", h.d0},
          {"c_init", h.c_init},
          {"max_iterations", h.max_iterations},
          {"epsilon", h.epsilon},
          {"standardize", h.standardize}};
}

inline nlohmann::json to_json(const SyntheticSpec& spec) {
  nlohmann::json out = {{"n", spec.n},
                        {"j", spec.j_total},
                        {"frac_relevant", spec.frac_relevant},
                        {"weights", spec.weights},
                        {"centres", spec.centres},
                        {"correlation", to_string(spec.correlation.kind)},
                        {"noise_sd", spec.noise_sd},
                        {"misspecification", to_string(spec.misspecification)},
                        {"seed", spec.seed}};
  if (spec.correlation.kind == CorrelationKind::kFixedAll) {
    out["rho"] = spec.correlation.rho;
  } else if (spec.correlation.kind != CorrelationKind::kNone) {
    out["rho_min"] = spec.correlation.rho_min;
    out["rho_max"] = spec.correlation.rho_max;
  }
  if (spec.misspecification == Misspecification::kStudentTNoise) {
    out["t_noise_dof"] = spec.t_noise_dof;
  }
  if (spec.misspecification == Misspecification::kStudentTComponents) {
    out["t_component_dof"] = spec.t_component_dof;
  }
  return out;
}

inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json out = {{"repetitions", cfg.repetitions},
                        {"seed", cfg.base_seed},
                        {"shuffle_covariates", cfg.shuffle_covariates},
                        {"workers", cfg.workers},
                        {"selection_threshold", cfg.selection_threshold},
                        {"hyper", to_json(cfg.hyper)},
                        {"schedule", to_json(cfg.schedule)}};
  if (cfg.simulate) {
    out["simulate"] = to_json(cfg.spec);
  } else {
    out["input"] = cfg.input;
    if (!cfg.truth_labels.empty()) out["truth_labels"] = cfg.truth_labels;
    if (!cfg.truth_relevant.empty()) {
      out["truth_relevant"] = cfg.truth_relevant;
    }
  }
  if (!cfg.output.empty()) out["output"] = cfg.output;
  return out;
}

// Full experiment from a RunConfig: load or simulate the data, run the
// repetition harness, and (when an output directory is set) leave behind the
// dataset, any generated ground truth, per-repetition artifacts, and
// summary.json.
inline ExperimentResult run_experiment(const RunConfig& cfg) {
  if (!cfg.simulate && cfg.input.empty()) {
    throw ConfigError("no data source: set input=<csv> or simulate=true");
  }

  DataMatrix data;
  std::vector<int> truth_labels;
  std::vector<bool> truth_relevant;
  bool have_labels = false, have_relevant = false;

  if (cfg.simulate) {
    SyntheticDataset ds = generate(cfg.spec);
    data = std::move(ds.data);
    truth_labels = std::move(ds.labels);
    truth_relevant = std::move(ds.relevant);
    have_labels = have_relevant = true;
  } else {
    data = load_csv(cfg.input);
    if (!cfg.truth_labels.empty()) {
      truth_labels = load_labels_csv(cfg.truth_labels);
      have_labels = true;
    }
    if (!cfg.truth_relevant.empty()) {
      truth_relevant = load_relevant_csv(cfg.truth_relevant);
      have_relevant = true;
    }
  }

  if (!cfg.output.empty()) {
    std::filesystem::create_directories(cfg.output);
    if (cfg.simulate) {
      const std::filesystem::path dir(cfg.output);
      write_csv((dir / "data.csv").string(), data);
      write_truth_labels_csv((dir / "truth_labels.csv").string(), truth_labels);
      write_truth_relevant_csv((dir / "truth_relevant.csv").string(),
                               truth_relevant);
    }
  }

  ExperimentResult result = run_repetitions(
      data, have_labels ? &truth_labels : nullptr,
      have_relevant ? &truth_relevant : nullptr, cfg.hyper, cfg.schedule,
      cfg.repetitions, cfg.base_seed, cfg.shuffle_covariates, cfg.workers,
      cfg.selection_threshold, cfg.output);

  if (!cfg.output.empty()) {
    nlohmann::json summary = {
        {"config", to_json(cfg)},
        {"dataset",
         {{"n", data.n()},
          {"j", data.j()},
          {"source", cfg.simulate ? "simulated" : cfg.input}}},
        {"aggregates", to_json(result.summary)}};
    nlohmann::json records = nlohmann::json::array();
    for (const RepetitionRecord& r : result.records) {
      records.push_back(to_json(r));
    }
    summary["records"] = std::move(records);
    std::ofstream out(std::filesystem::path(cfg.output) / "summary.json");
    if (!out) throw InvalidData("cannot write summary.json");
    out << summary.dump(2) << "\n";
  }
  return result;
}

}  // namespace vbvarsel

#endif  // VBVARSEL_EXPERIMENT_HPP_
