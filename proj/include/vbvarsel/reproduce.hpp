// vbvarsel/reproduce.hpp

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

#ifndef VBVARSEL_REPRODUCE_HPP_
#define VBVARSEL_REPRODUCE_HPP_

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "vbvarsel/experiment.hpp"

namespace vbvarsel {

// Canned benchmark studies.  Each table bundles a few scenarios (a generator
// spec, priors, a temperature schedule, a repetition count) together with the
// originally reported aggregates, so a run prints its own quartiles next to
// the reference numbers.

struct ReferenceValue {
  double median = std::numeric_limits<double>::quiet_NaN();
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();

  bool present() const { return !std::isnan(median); }
};

struct ScenarioReference {
  ReferenceValue ari;
  ReferenceValue relevant_selected;
  ReferenceValue irrelevant_deselected;
};

struct Scenario {
  std::string label;
  SyntheticSpec data;
  Hyperparameters hyper;
  TemperatureSchedule schedule;
  int repetitions = 10;
  ScenarioReference reference;
};

namespace detail {

inline ReferenceValue ref(double median, double lower, double upper) {
  return {median, lower, upper};
}

inline ReferenceValue ref(double median) {
  return {median, std::numeric_limits<double>::quiet_NaN(),
          std::numeric_limits<double>::quiet_NaN()};
}

inline Scenario make_scenario(const std::string& label, int n,
                              double frac_relevant,
                              const TemperatureSchedule& schedule,
                              std::uint64_t data_seed) {
  Scenario s;
  s.label = label;
  s.data.n = n;
  s.data.j_total = 200;
  s.data.frac_relevant = frac_relevant;
  s.data.seed = data_seed;
  s.schedule = schedule;
  return s;
}

inline std::string pct(double frac) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%g%%", 100.0 * frac);
  return buf;
}

}  // namespace detail

inline std::vector<std::string> reproduction_tables() {
  return {"baseline-5pc",    "baseline-10pc",     "baseline-25pc",
          "baseline-50pc",   "anneal-random-corr", "anneal-fixed-corr",
          "anneal-per-cluster", "anneal-b0",       "anneal-noise",
          "misspec-t-noise", "misspec-t-components"};
}

inline std::vector<Scenario> reproduction_scenarios(const std::string& table) {
  using detail::make_scenario;
  using detail::ref;
  const TemperatureSchedule plain = TemperatureSchedule::fixed(1.0);
  std::vector<Scenario> out;

  auto baseline = [&](double frac, ScenarioReference small,
                      ScenarioReference large, std::uint64_t seed_base) {
    Scenario a = make_scenario("n=100 " + detail::pct(frac) + " relevant", 100,
                               frac, plain, seed_base);
    a.reference = small;
    Scenario b = make_scenario("n=1000 " + detail::pct(frac) + " relevant",
                               1000, frac, plain, seed_base + 1);
    b.reference = large;
    out.push_back(a);
    out.push_back(b);
  };

  if (table == "baseline-5pc") {
    baseline(0.05,
             {ref(0.99, 0.98, 1.0), ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0)},
             {ref(0.95, 0.90, 0.96), ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0)},
             100);
  } else if (table == "baseline-10pc") {
    baseline(0.10,
             {ref(1.0, 0.98, 1.0), ref(1.0, 1.0, 1.0), ref(1.0, 0.99, 1.0)},
             {ref(0.92, 0.87, 0.99), ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0)},
             110);
  } else if (table == "baseline-25pc") {
    baseline(0.25,
             {ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0)},
             {ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0), ref(1.0, 0.99, 1.0)},
             120);
  } else if (table == "baseline-50pc") {
    baseline(0.50,
             {ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0)},
             {ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0), ref(1.0, 1.0, 1.0)},
             130);
  } else if (table == "anneal-random-corr") {
    // Random correlation per cluster and covariate, rho in [0, 0.5].
    auto corr = [](const std::string& label, const TemperatureSchedule& sched,
                   ReferenceValue ari) {
      Scenario s = detail::make_scenario(label, 100, 0.10, sched, 140);
      s.data.correlation.kind = CorrelationKind::kPerClusterAndCovariate;
      s.data.correlation.rho_min = 0.0;
      s.data.correlation.rho_max = 0.5;
      s.reference.ari = ari;
      return s;
    };
    out.push_back(corr("fixed T=1", plain, ref(0.48, 0.41, 0.54)));
    out.push_back(corr("fixed T=2", TemperatureSchedule::fixed(2.0), ref(0.59)));
    out.push_back(corr("geometric T0=2", TemperatureSchedule::geometric(2.0, 5),
                       ref(0.69, 0.69, 0.71)));
  } else if (table == "anneal-fixed-corr") {
    auto corr = [](const std::string& label, double rho,
                   const TemperatureSchedule& sched, ReferenceValue ari) {
      Scenario s = detail::make_scenario(label, 100, 0.10, sched,
                                         150 + (rho > 0.25 ? 1 : 0));
      s.data.correlation.kind = CorrelationKind::kFixedAll;
      s.data.correlation.rho = rho;
      s.reference.ari = ari;
      return s;
    };
    out.push_back(corr("rho=0.1 fixed T=1", 0.1, plain, ref(0.97)));
    out.push_back(corr("rho=0.1 fixed T=2", 0.1,
                       TemperatureSchedule::fixed(2.0), ref(1.0)));
    out.push_back(corr("rho=0.1 harmonic T0=2", 0.1,
                       TemperatureSchedule::harmonic(2.0, 5),
                       ref(1.0, 0.97, 1.0)));
    out.push_back(corr("rho=0.5 fixed T=1", 0.5, plain, ref(0.68)));
    out.push_back(corr("rho=0.5 fixed T=2", 0.5,
                       TemperatureSchedule::fixed(2.0), ref(0.70)));
    out.push_back(corr("rho=0.5 geometric T0=3", 0.5,
                       TemperatureSchedule::geometric(3.0, 5), ref(0.76)));
  } else if (table == "anneal-per-cluster") {
    auto corr = [](const std::string& label, const TemperatureSchedule& sched,
                   ReferenceValue ari) {
      Scenario s = detail::make_scenario(label, 100, 0.10, sched, 160);
      s.data.correlation.kind = CorrelationKind::kPerCluster;
      s.data.correlation.rho_min = 0.0;
      s.data.correlation.rho_max = 0.5;
      s.reference.ari = ari;
      return s;
    };
    out.push_back(corr("fixed T=1", plain, ref(0.65)));
    out.push_back(corr("fixed T=2", TemperatureSchedule::fixed(2.0), ref(0.71)));
    out.push_back(corr("geometric T0=2", TemperatureSchedule::geometric(2.0, 5),
                       ref(0.74, 0.74, 1.0)));
  } else if (table == "anneal-b0") {
    // Deliberately mis-set prior scale b0.
    auto mk = [](const std::string& label, const TemperatureSchedule& sched,
                 ReferenceValue ari) {
      Scenario s = detail::make_scenario(label, 100, 0.10, sched, 170);
      s.hyper.b0_scale = 0.01;
      s.reference.ari = ari;
      return s;
    };
    out.push_back(mk("fixed T=1", plain, ref(0.84, 0.75, 0.88)));
    out.push_back(mk("geometric T0=3", TemperatureSchedule::geometric(3.0, 5),
                     ref(1.0, 0.70, 1.0)));
    out.push_back(mk("harmonic T0=2", TemperatureSchedule::harmonic(2.0, 5),
                     ref(1.0, 0.94, 1.0)));
  } else if (table == "anneal-noise") {
    auto mk = [](const std::string& label, double sd,
                 const TemperatureSchedule& sched, ReferenceValue ari) {
      Scenario s = detail::make_scenario(label, 100, 0.10, sched,
                                         180 + (sd > 0.25 ? 1 : 0));
      s.data.noise_sd = sd;
      s.reference.ari = ari;
      return s;
    };
    out.push_back(mk("sd=0.1 fixed T=1", 0.1, plain, ref(0.89)));
    out.push_back(mk("sd=0.1 geometric T0=3", 0.1,
                     TemperatureSchedule::geometric(3.0, 5), ref(1.0)));
    out.push_back(mk("sd=0.1 harmonic T0=3", 0.1,
                     TemperatureSchedule::harmonic(3.0, 5), ref(1.0)));
    out.push_back(mk("sd=0.5 fixed T=1", 0.5, plain, ref(0.90)));
    out.push_back(mk("sd=0.5 geometric T0=2", 0.5,
                     TemperatureSchedule::geometric(2.0, 5), ref(1.0)));
    out.push_back(mk("sd=0.5 harmonic T0=2", 0.5,
                     TemperatureSchedule::harmonic(2.0, 5), ref(1.0)));
  } else if (table == "misspec-t-noise") {
    // Per-cluster Student t noise on top of the base draw; fits run on the
    // raw (unstandardized) data.
    auto mk = [](int n, double frac, ReferenceValue ari, std::uint64_t seed) {
      Scenario s = detail::make_scenario(
          "n=" + std::to_string(n) + " " + detail::pct(frac) + " relevant", n,
          frac, TemperatureSchedule::fixed(1.0), seed);
      s.data.misspecification = Misspecification::kStudentTNoise;
      s.hyper.standardize = false;
      s.reference.ari = ari;
      return s;
    };
    out.push_back(mk(100, 0.10, ref(0.60), 190));
    out.push_back(mk(100, 0.25, ref(0.56), 191));
    out.push_back(mk(100, 0.50, ref(0.46), 192));
    out.push_back(mk(1000, 0.10, ref(0.69), 193));
    out.push_back(mk(1000, 0.25, ref(0.78), 194));
    out.push_back(mk(1000, 0.50, ref(0.69), 195));
  } else if (table == "misspec-t-components") {
    auto mk = [](int n, double frac, ScenarioReference reference,
                 std::uint64_t seed) {
      Scenario s = detail::make_scenario(
          "n=" + std::to_string(n) + " " + detail::pct(frac) + " relevant", n,
          frac, TemperatureSchedule::fixed(1.0), seed);
      s.data.misspecification = Misspecification::kStudentTComponents;
      s.reference = reference;
      return s;
    };
    out.push_back(mk(100, 0.25, {ref(0.68), ref(0.82), {}}, 200));
    out.push_back(mk(100, 0.50,
                     {ref(0.74, 0.71, 0.80), ref(0.96), {}}, 201));
    out.push_back(mk(1000, 0.25, {ref(0.59), {}, {}}, 202));
    out.push_back(mk(1000, 0.50, {ref(0.58), {}, {}}, 203));
  } else {
    throw UnknownTable(table);
  }
  return out;
}

struct ScenarioResult {
  Scenario scenario;
  ExperimentResult result;
};

// Generate the scenario's dataset and run the repetition harness over it.
// base_seed shifts both the generator seed and the repetition seeds, so the
// whole table is reproducible from one number.
inline ScenarioResult run_scenario(const Scenario& scenario,
                                   std::uint64_t base_seed, int workers,
                                   const std::string& output_dir,
                                   int repetitions_override = 0) {
  SyntheticSpec spec = scenario.data;
  spec.seed += base_seed;
  const SyntheticDataset ds = generate(spec);
  const int repetitions = repetitions_override > 0 ? repetitions_override
                                                   : scenario.repetitions;
  ScenarioResult out{scenario, {}};
  out.result = run_repetitions(ds.data, &ds.labels, &ds.relevant,
                               scenario.hyper, scenario.schedule, repetitions,
                               spec.seed + 1, /*shuffle_covariates=*/true,
                               workers, /*selection_threshold=*/0.5,
                               output_dir);
  return out;
}

namespace detail {

inline std::string format_aggregate(const MetricQuartiles& mq) {
  if (mq.count == 0) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f [%.2f, %.2f]", mq.q.median, mq.q.lower,
                mq.q.upper);
  return buf;
}

inline std::string format_reference(const ReferenceValue& v) {
  if (!v.present()) return "-";
  char buf[64];
  if (std::isnan(v.lower)) {
    std::snprintf(buf, sizeof(buf), "%.2f", v.median);
  } else {
    std::snprintf(buf, sizeof(buf), "%.2f [%.2f, %.2f]", v.median, v.lower,
                  v.upper);
  }
  return buf;
}

}  // namespace detail

// Plain-text comparison: one block per scenario, one line per metric that has
// either a reference value or a computed aggregate.
inline std::string format_reproduction_report(
    const std::string& table, const std::vector<ScenarioResult>& results) {
  std::string out = "table " + table + "\n";
  char line[160];
  std::snprintf(line, sizeof(line), "  %-28s %-22s %-20s %s\n", "scenario",
                "metric", "reference", "this run");
  out += line;
  for (const ScenarioResult& sr : results) {
    const RepetitionSummary& s = sr.result.summary;
    auto row = [&](const char* metric, const ReferenceValue& reference,
                   const MetricQuartiles& mq) {
      if (!reference.present() && mq.count == 0) return;
      std::snprintf(line, sizeof(line), "  %-28s %-22s %-20s %s\n",
                    sr.scenario.label.c_str(), metric,
                    detail::format_reference(reference).c_str(),
                    detail::format_aggregate(mq).c_str());
      out += line;
    };
    row("ari", sr.scenario.reference.ari, s.ari);
    row("relevant_selected", sr.scenario.reference.relevant_selected,
        s.relevant_selected);
    row("irrelevant_deselected", sr.scenario.reference.irrelevant_deselected,
        s.irrelevant_deselected);
    if (s.failures > 0) {
      std::snprintf(line, sizeof(line), "  %-28s %d of %d repetitions failed\n",
                    sr.scenario.label.c_str(), s.failures, s.repetitions);
      out += line;
    }
  }
  return out;
}

}  // namespace vbvarsel

#endif  // VBVARSEL_REPRODUCE_HPP_
