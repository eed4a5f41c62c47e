// vbvarsel/config.hpp

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

#ifndef VBVARSEL_CONFIG_HPP_
#define VBVARSEL_CONFIG_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "vbvarsel/csv.hpp"
#include "vbvarsel/errors.hpp"
#include "vbvarsel/hyperparameters.hpp"
#include "vbvarsel/schedule.hpp"
#include "vbvarsel/synthetic.hpp"

namespace vbvarsel {

using ConfigMap = std::map<std::string, std::string>;

// Flat `key = value` file; blank lines and lines starting with '#' are
// skipped, later assignments win.
inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open '" + path + "'", 0);
  ConfigMap map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigParseError("expected key=value, got '" + t + "'", line_no);
    }
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigParseError("empty key", line_no);
    map[key] = value;
  }
  return map;
}

// Apply `key=value` strings (e.g. from command-line flags) on top of a map.
inline void apply_overrides(ConfigMap& map,
                            const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override must look like key=value, got '" + item +
                        "'");
    }
    map[detail::trim(item.substr(0, eq))] = detail::trim(item.substr(eq + 1));
  }
}

namespace detail {

inline double config_double(const std::string& key, const std::string& value) {
  double v;
  if (!parse_double(value, v)) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "' as a number");
  }
  return v;
}

inline long long config_int(const std::string& key, const std::string& value) {
  long long v;
  if (!parse_int(value, v)) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "' as an integer");
  }
  return v;
}

inline bool config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw ConfigError("config key '" + key + "': cannot parse '" + value +
                    "' as a boolean");
}

inline std::vector<double> config_double_list(const std::string& key,
                                              const std::string& value) {
  std::vector<double> out;
  for (const std::string& field : split_fields(value)) {
    out.push_back(config_double(key, field));
  }
  return out;
}

}  // namespace detail

// Everything one run needs: the data source (a CSV file or a synthetic
// generator spec), optional ground truth, priors, schedule, and the
// repetition harness settings.
struct RunConfig {
  std::string input;           // CSV path; empty when simulating
  bool simulate = false;
  SyntheticSpec spec;
  std::string truth_labels;    // optional CSV paths
  std::string truth_relevant;
  std::string output;          // artifact directory; empty writes nothing

  Hyperparameters hyper;
  TemperatureSchedule schedule;

  int repetitions = 10;
  std::uint64_t base_seed = 0;
  bool shuffle_covariates = true;
  int workers = 1;
  double selection_threshold = 0.5;

  static RunConfig from_map(ConfigMap map);
};

inline RunConfig RunConfig::from_map(ConfigMap map) {
  RunConfig cfg;
  auto take = [&map](const std::string& key) {
    auto it = map.find(key);
    if (it == map.end()) return std::pair<bool, std::string>{false, {}};
    std::pair<bool, std::string> out{true, it->second};
    map.erase(it);
    return out;
  };
  auto take_double = [&take](const std::string& key, double& into) {
    if (auto [found, value] = take(key); found) {
      into = detail::config_double(key, value);
    }
  };
  auto take_int = [&take](const std::string& key, auto& into) {
    if (auto [found, value] = take(key); found) {
      into = static_cast<std::decay_t<decltype(into)>>(
          detail::config_int(key, value));
    }
  };
  auto take_bool = [&take](const std::string& key, bool& into) {
    if (auto [found, value] = take(key); found) {
      into = detail::config_bool(key, value);
    }
  };
  auto take_string = [&take](const std::string& key, std::string& into) {
    if (auto [found, value] = take(key); found) into = value;
  };

  take_string("input", cfg.input);
  take_string("output", cfg.output);
  take_string("truth_labels", cfg.truth_labels);
  take_string("truth_relevant", cfg.truth_relevant);
  take_int("repetitions", cfg.repetitions);
  take_int("seed", cfg.base_seed);
  take_bool("shuffle_covariates", cfg.shuffle_covariates);
  take_int("workers", cfg.workers);
  take_double("selection_threshold", cfg.selection_threshold);

  take_int("hyper.k_max", cfg.hyper.k_max);
  take_double("hyper.alpha0", cfg.hyper.alpha0);
  take_double("hyper.beta0", cfg.hyper.beta0);
  take_double("hyper.a0", cfg.hyper.a0);
  take_double("hyper.b0", cfg.hyper.b0_scale);
  take_double("hyper.d0", cfg.hyper.d0);
  take_double("hyper.c_init", cfg.hyper.c_init);
  take_int("hyper.max_iterations", cfg.hyper.max_iterations);
  take_double("hyper.epsilon", cfg.hyper.epsilon);
  take_bool("hyper.standardize", cfg.hyper.standardize);

  if (auto [found, value] = take("schedule.kind"); found) {
    if (value == "fixed") {
      cfg.schedule.kind = ScheduleKind::kFixed;
    } else if (value == "geometric") {
      cfg.schedule.kind = ScheduleKind::kGeometric;
    } else if (value == "harmonic") {
      cfg.schedule.kind = ScheduleKind::kHarmonic;
    } else {
      throw ConfigError("config key 'schedule.kind': expected fixed, geometric "
                        "or harmonic, got '" + value + "'");
    }
  }
  take_double("schedule.t0", cfg.schedule.t0);
  take_int("schedule.annealed_iterations", cfg.schedule.annealed_iterations);

  take_bool("simulate", cfg.simulate);
  take_int("simulate.n", cfg.spec.n);
  take_int("simulate.j", cfg.spec.j_total);
  take_double("simulate.frac_relevant", cfg.spec.frac_relevant);
  if (auto [found, value] = take("simulate.weights"); found) {
    cfg.spec.weights = detail::config_double_list("simulate.weights", value);
  }
  if (auto [found, value] = take("simulate.centres"); found) {
    cfg.spec.centres = detail::config_double_list("simulate.centres", value);
  }
  if (auto [found, value] = take("simulate.correlation"); found) {
    if (value == "none") {
      cfg.spec.correlation.kind = CorrelationKind::kNone;
    } else if (value == "fixed_all") {
      cfg.spec.correlation.kind = CorrelationKind::kFixedAll;
    } else if (value == "per_cluster") {
      cfg.spec.correlation.kind = CorrelationKind::kPerCluster;
    } else if (value == "per_cluster_and_covariate") {
      cfg.spec.correlation.kind = CorrelationKind::kPerClusterAndCovariate;
    } else {
      throw ConfigError(
          "config key 'simulate.correlation': expected none, fixed_all, "
          "per_cluster or per_cluster_and_covariate, got '" + value + "'");
    }
  }
  take_double("simulate.rho", cfg.spec.correlation.rho);
  take_double("simulate.rho_min", cfg.spec.correlation.rho_min);
  take_double("simulate.rho_max", cfg.spec.correlation.rho_max);
  take_double("simulate.noise_sd", cfg.spec.noise_sd);
  if (auto [found, value] = take("simulate.misspecification"); found) {
    if (value == "none") {
      cfg.spec.misspecification = Misspecification::kNone;
    } else if (value == "student_t_noise") {
      cfg.spec.misspecification = Misspecification::kStudentTNoise;
    } else if (value == "student_t_components") {
      cfg.spec.misspecification = Misspecification::kStudentTComponents;
    } else {
      throw ConfigError(
          "config key 'simulate.misspecification': expected none, "
          "student_t_noise or student_t_components, got '" + value + "'");
    }
  }
  if (auto [found, value] = take("simulate.t_noise_dof"); found) {
    cfg.spec.t_noise_dof =
        detail::config_double_list("simulate.t_noise_dof", value);
  }
  take_double("simulate.t_component_dof", cfg.spec.t_component_dof);
  take_int("simulate.seed", cfg.spec.seed);

  if (!map.empty()) {
    throw ConfigError("unknown config key '" + map.begin()->first + "'");
  }
  if (cfg.repetitions < 1) {
    throw ConfigError("repetitions must be at least 1");
  }
  if (cfg.workers < 1) {
    throw ConfigError("workers must be at least 1");
  }
  if (!(cfg.selection_threshold >= 0.0) || cfg.selection_threshold > 1.0) {
    throw ConfigError("selection_threshold must lie in [0, 1]");
  }
  if (cfg.simulate && !cfg.input.empty()) {
    throw ConfigError("pass either input or simulate=true, not both");
  }
  return cfg;
}

}  // namespace vbvarsel

#endif  // VBVARSEL_CONFIG_HPP_
