// Copyright 2026 The ehss-astw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ehss/simulation.hpp"

namespace ehss {
namespace {

Scenario short_scenario(double duration = 2.0) {
  Scenario sc;
  sc.duration = duration;
  return sc;
}

TEST(Simulation, OneRecordPerStep) {
  const SimTrace tr = run_scenario(Scenario{});
  ASSERT_EQ(tr.records.size(), 30001u);
  for (std::size_t k = 1; k < tr.records.size(); ++k) {
    ASSERT_GT(tr.records[k].t, tr.records[k - 1].t);
  }
  EXPECT_DOUBLE_EQ(tr.records.back().t, 30.0);
}

TEST(Simulation, DeterministicPerSeed) {
  Scenario sc = short_scenario();
  sc.noise_std = {1e4, 1e4, 1e4, 1e-6};
  sc.seed = 17;
  const SimTrace a = run_scenario(sc);
  const SimTrace b = run_scenario(sc);
  EXPECT_TRUE(a.records == b.records);
  sc.seed = 18;
  const SimTrace c = run_scenario(sc);
  EXPECT_FALSE(a.records == c.records);
}

TEST(Simulation, ObserverDoesNotTouchThePlant) {
  Scenario sc = short_scenario(15.0);
  sc.faults.push_back({12.0, 15.0, FaultInputs{.C_i = 1e-11}});
  sc.noise_std = {1e4, 1e4, 1e4, 1e-6};
  const SimTrace with = run_scenario(sc);
  const SimTrace without = run_scenario(sc, {.with_observer = false});
  ASSERT_EQ(with.records.size(), without.records.size());
  for (std::size_t k = 0; k < with.records.size(); ++k) {
    ASSERT_EQ(with.records[k].x, without.records[k].x) << k;
    ASSERT_EQ(with.records[k].y, without.records[k].y) << k;
    ASSERT_EQ(with.records[k].u1, without.records[k].u1) << k;
    ASSERT_EQ(with.records[k].u2, without.records[k].u2) << k;
  }
}

TEST(Simulation, FaultScheduleIsStepQuantized) {
  Scenario sc = short_scenario(20.0);
  sc.faults.push_back({12.0, 20.0, FaultInputs{.C_i = 1e-11}});
  const SimTrace tr = run_scenario(sc);
  for (const auto& r : tr.records) {
    if (r.t < 12.0 - 0.5 * sc.dt) {
      ASSERT_EQ(r.ql1, 0.0) << r.t;
      ASSERT_EQ(r.ql2, 0.0) << r.t;
    } else if (r.t > 12.0 + 0.5 * sc.dt && r.t < 20.0 - 0.5 * sc.dt) {
      ASSERT_NE(r.ql1, 0.0) << r.t;
    }
  }
  EXPECT_EQ(sc.faults_at(11.999).C_i, 0.0);
  EXPECT_EQ(sc.faults_at(12.0).C_i, 1e-11);
  EXPECT_EQ(sc.faults_at(20.0).C_i, 0.0);
}

TEST(Simulation, TracksTheReferenceSinusoid) {
  const Scenario sc;
  const SimTrace tr = run_scenario(sc);
  // Amplitude of the fundamental over the last full period.
  const double w = 2.0 * std::numbers::pi * sc.reference.frequency;
  double s = 0.0, c = 0.0;
  int n = 0;
  for (const auto& r : tr.records) {
    if (r.t < 10.0 || r.t >= 30.0) continue;
    s += (r.x.position - sc.reference.offset) * std::sin(w * r.t);
    c += (r.x.position - sc.reference.offset) * std::cos(w * r.t);
    ++n;
  }
  const double amplitude = 2.0 * std::hypot(s, c) / n;
  EXPECT_LT(std::abs(amplitude - sc.reference.amplitude) / sc.reference.amplitude, 0.2);
}

TEST(Simulation, SelfConvergesAtFirstOrder) {
  auto terminal = [](double dt) {
    Scenario sc = short_scenario(2.0);
    sc.dt = dt;
    return run_scenario(sc).records.back().x;
  };
  const PlantState a = terminal(1e-3);
  const PlantState b = terminal(5e-4);
  const PlantState c = terminal(2.5e-4);
  // Scaled difference over the pressure and position states.
  auto diff = [](const PlantState& x, const PlantState& y) {
    return std::abs(x.p1 - y.p1) / 1e6 + std::abs(x.p2 - y.p2) / 1e6 + std::abs(x.ps - y.ps) / 1e6 +
           std::abs(x.position - y.position) / 1e-2;
  };
  const double ratio = diff(a, b) / diff(b, c);
  EXPECT_GE(ratio, 1.7);
  EXPECT_LE(ratio, 2.3);
}

TEST(Simulation, NonFiniteStateAborts) {
  Scenario sc = short_scenario();
  sc.initial_state.velocity = std::numeric_limits<double>::infinity();
  try {
    run_scenario(sc);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.time(), 0.0);
  }
}

TEST(Simulation, RejectsInvalidScenarios) {
  Scenario sc = short_scenario();
  sc.dt = 0.0;
  EXPECT_THROW(Simulation{sc}, ConfigError);
  sc = short_scenario();
  sc.faults.push_back({1.0, 5.0, {}});
  EXPECT_THROW(Simulation{sc}, ConfigError);
  sc = short_scenario();
  sc.observer.kind = ObserverKind::fosmo;
  sc.filter_tau = 0.0;
  EXPECT_THROW(Simulation{sc}, ConfigError);
  sc = short_scenario();
  sc.initial_state.position = 1.0;
  EXPECT_THROW(Simulation{sc}, ConfigError);
}

TEST(PiControllers, ZeroErrorZeroIntegrator) {
  PiState st;
  const Measurement y{0.0, 0.0, 3e6, 0.1};
  const ControlInputs u = pi_controllers(y, {0.1, 3e6}, ControllerGains{}, st, 1e-3);
  EXPECT_EQ(u.u1, 0.0);
  EXPECT_EQ(u.u2, 0.0);
}

TEST(PiControllers, SaturatesAndHoldsIntegrator) {
  PiState st;
  const ControllerGains g;
  const Measurement y{0.0, 0.0, 0.0, 0.0};
  for (int k = 0; k < 1000; ++k) {
    const ControlInputs u = pi_controllers(y, {100.0, 1e9}, g, st, 1e-3);
    ASSERT_EQ(u.u1, ControlInputs::kU1Max);
    ASSERT_EQ(u.u2, ControlInputs::kU2Max);
  }
  EXPECT_EQ(st.position_integral, 0.0);
  EXPECT_EQ(st.pressure_integral, 0.0);
  const ControlInputs low = pi_controllers({0.0, 0.0, 1e9, 100.0}, {0.0, 0.0}, g, st, 1e-3);
  EXPECT_EQ(low.u1, -ControlInputs::kU1Max);
  EXPECT_EQ(low.u2, ControlInputs::kU2Min);
}

TEST(PiControllers, IntegratesInsideTheLimits) {
  PiState st;
  const ControllerGains g;
  pi_controllers({0.0, 0.0, 3e6, 0.09}, {0.1, 3e6}, g, st, 1e-3);
  EXPECT_NEAR(st.position_integral, g.position.ki * 0.01 * 1e-3, 1e-15);
}

}  // namespace
}  // namespace ehss
