// vbvarsel/schedule.hpp

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

#ifndef VBVARSEL_SCHEDULE_HPP_
#define VBVARSEL_SCHEDULE_HPP_

#include <cassert>
#include <cmath>
#include <string>

#include "vbvarsel/errors.hpp"

namespace vbvarsel {

enum class ScheduleKind { kFixed, kGeometric, kHarmonic };

inline std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kFixed: return "fixed";
    case ScheduleKind::kGeometric: return "geometric";
    case ScheduleKind::kHarmonic: return "harmonic";
  }
  return "?";
}

// Iteration-indexed temperature.  Fixed schedules hold t0 forever; geometric
// and harmonic schedules decay from t0 and are clamped to exactly 1 once the
// annealing window ends, so late iterations run plain (unannealed) updates.
struct TemperatureSchedule {
  ScheduleKind kind = ScheduleKind::kFixed;
  double t0 = 1.0;
  int annealed_iterations = 5;  // window length for the decaying schedules

  static TemperatureSchedule fixed(double t0) {
    TemperatureSchedule s;
    s.kind = ScheduleKind::kFixed;
    s.t0 = t0;
    s.validate();
    return s;
  }

  static TemperatureSchedule geometric(double t0, int annealed_iterations) {
    TemperatureSchedule s;
    s.kind = ScheduleKind::kGeometric;
    s.t0 = t0;
    s.annealed_iterations = annealed_iterations;
    s.validate();
    return s;
  }

  static TemperatureSchedule harmonic(double t0, int annealed_iterations) {
    TemperatureSchedule s;
    s.kind = ScheduleKind::kHarmonic;
    s.t0 = t0;
    s.annealed_iterations = annealed_iterations;
    s.validate();
    return s;
  }

  void validate() const {
    if (!(t0 >= 1.0) || !std::isfinite(t0)) {
      throw InvalidSchedule("initial temperature must be finite and >= 1, got " +
                            std::to_string(t0));
    }
    if (kind != ScheduleKind::kFixed) {
      // The geometric decay rate divides by annealed_iterations - 1.
      const int min_window = kind == ScheduleKind::kGeometric ? 2 : 1;
      if (annealed_iterations < min_window) {
        throw InvalidSchedule("annealed_iterations must be at least " +
                              std::to_string(min_window) + " for a " +
                              to_string(kind) + " schedule");
      }
    }
  }

  // Temperature at iteration i (0-based).  Decaying schedules reach exactly
  // 1.0; rounding can never leave them below 1.
  double temperature(int iteration) const {
    assert(iteration >= 0);
    switch (kind) {
      case ScheduleKind::kFixed:
        return t0;
      case ScheduleKind::kGeometric: {
        if (iteration >= annealed_iterations - 1) return 1.0;
        // t0 * alpha^i with alpha = (1/t0)^(1/(annealed_iterations-1)).
        const double alpha =
            std::pow(1.0 / t0, 1.0 / (annealed_iterations - 1));
        return std::max(t0 * std::pow(alpha, iteration), 1.0);
      }
      case ScheduleKind::kHarmonic: {
        if (iteration >= annealed_iterations) return 1.0;
        // t0 / (1 + alpha i) with alpha = (t0 - 1)/annealed_iterations.
        const double alpha = (t0 - 1.0) / annealed_iterations;
        return std::max(t0 / (1.0 + alpha * iteration), 1.0);
      }
    }
    return 1.0;
  }

  double final_temperature() const {
    return kind == ScheduleKind::kFixed ? t0 : 1.0;
  }
};

}  // namespace vbvarsel

#endif  // VBVARSEL_SCHEDULE_HPP_
