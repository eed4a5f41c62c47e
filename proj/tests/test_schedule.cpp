// vbvarsel/tests/test_schedule.cpp

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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "vbvarsel/schedule.hpp"

namespace {

void check_close(double got, double want, double tol = 1e-12) {
  CAPTURE(got, want);
  CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
}

}  // namespace

TEST_CASE("fixed schedule holds its temperature forever") {
  const auto s = vbvarsel::TemperatureSchedule::fixed(2.5);
  for (int i = 0; i < 50; ++i) CHECK(s.temperature(i) == 2.5);
  CHECK(s.final_temperature() == 2.5);
}

TEST_CASE("geometric schedule decays from t0 to exactly 1") {
  const auto s = vbvarsel::TemperatureSchedule::geometric(4.0, 5);
  CHECK(s.temperature(0) == 4.0);
  // t0 alpha^i with alpha = (1/4)^(1/4), so t(i) = 4^(1 - i/4).
  check_close(s.temperature(1), std::pow(4.0, 0.75));
  check_close(s.temperature(2), 2.0);
  check_close(s.temperature(3), std::pow(4.0, 0.25));
  // Not an approximation: the endpoint is clamped.
  CHECK(s.temperature(4) == 1.0);
  CHECK(s.temperature(5) == 1.0);
  CHECK(s.temperature(1000) == 1.0);
  CHECK(s.final_temperature() == 1.0);
}

TEST_CASE("harmonic schedule decays from t0 to exactly 1") {
  const auto s = vbvarsel::TemperatureSchedule::harmonic(4.0, 5);
  CHECK(s.temperature(0) == 4.0);
  // t0 / (1 + alpha i) with alpha = (t0 - 1)/5 = 0.6.
  check_close(s.temperature(1), 4.0 / 1.6);
  check_close(s.temperature(4), 4.0 / 3.4);
  CHECK(s.temperature(5) == 1.0);
  CHECK(s.temperature(1000) == 1.0);
  CHECK(s.final_temperature() == 1.0);
}

TEST_CASE("decaying schedules never rise and never dip below 1") {
  const auto geo = vbvarsel::TemperatureSchedule::geometric(7.3, 9);
  const auto har = vbvarsel::TemperatureSchedule::harmonic(7.3, 9);
  for (const auto& s : {geo, har}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 30; ++i) {
      const double t = s.temperature(i);
      CHECK(t >= 1.0);
      CHECK(t <= prev);
      prev = t;
    }
  }
}

TEST_CASE("a unit starting temperature makes every iteration plain") {
  const auto s = vbvarsel::TemperatureSchedule::geometric(1.0, 5);
  for (int i = 0; i < 10; ++i) CHECK(s.temperature(i) == 1.0);
}

TEST_CASE("schedule validation rejects bad parameters") {
  using vbvarsel::InvalidSchedule;
  using vbvarsel::TemperatureSchedule;
  CHECK_THROWS_AS(TemperatureSchedule::fixed(0.5), InvalidSchedule);
  CHECK_THROWS_AS(
      TemperatureSchedule::fixed(std::numeric_limits<double>::quiet_NaN()),
      InvalidSchedule);
  CHECK_THROWS_AS(
      TemperatureSchedule::fixed(std::numeric_limits<double>::infinity()),
      InvalidSchedule);
  // The geometric decay rate divides by annealed_iterations - 1.
  CHECK_THROWS_AS(TemperatureSchedule::geometric(4.0, 1), InvalidSchedule);
  CHECK_THROWS_AS(TemperatureSchedule::harmonic(4.0, 0), InvalidSchedule);
  CHECK_NOTHROW(TemperatureSchedule::harmonic(4.0, 1));
  CHECK_NOTHROW(TemperatureSchedule::fixed(1.0));
}
