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
#include <numbers>
#include <vector>

#include "ehss/fault_reconstruction.hpp"
#include "ehss/simulation.hpp"

namespace ehss {
namespace {

struct Window {
  double begin, end;
  bool contains(double t) const { return t >= begin && t < end; }
};

double mean_of(const SimTrace& tr, Window w, double TraceRecord::*field) {
  double s = 0.0;
  int n = 0;
  for (const auto& r : tr.records) {
    if (w.contains(r.t)) {
      s += r.*field;
      ++n;
    }
  }
  return s / n;
}

// RMS of (estimate - truth) relative to the mean truth magnitude.
double relative_rms(const SimTrace& tr, Window w, double TraceRecord::*est,
                    double TraceRecord::*truth) {
  double sq = 0.0, mag = 0.0;
  int n = 0;
  for (const auto& r : tr.records) {
    if (w.contains(r.t)) {
      sq += (r.*est - r.*truth) * (r.*est - r.*truth);
      mag += std::abs(r.*truth);
      ++n;
    }
  }
  return std::sqrt(sq / n) / (mag / n);
}

Scenario internal_leak(double C_i) {
  Scenario sc;
  sc.duration = 20.0;
  sc.faults.push_back({12.0, 20.0, FaultInputs{.C_i = C_i}});
  return sc;
}

TEST(LowPass, ConstantInputSettlesAtDcGain) {
  const double tau = 0.02, dt = 1e-3;
  LowPass lp(tau, dt);
  double y = 0.0;
  for (int k = 0; k < 100; ++k) y = lp.update(5.0);  // 5 tau
  EXPECT_NEAR(y, 5.0 * (1.0 - std::exp(-5.0)), 1e-9);
  for (int k = 0; k < 900; ++k) y = lp.update(5.0);
  EXPECT_NEAR(y, 5.0, 1e-12);
}

TEST(LowPass, BalancedRelayAveragesToZero) {
  LowPass lp(0.02, 1e-3);
  const double rho = 3.0;
  double y = 0.0, peak = 0.0;
  for (int k = 0; k < 2000; ++k) {
    y = lp.update(k % 2 ? -rho : rho);
    if (k > 1000) peak = std::max(peak, std::abs(y));
  }
  // Steady ripple of a first-order filter fed a period-2 square wave.
  const double g = 1.0 - std::exp(-1e-3 / 0.02);
  EXPECT_NEAR(peak, rho * g / (2.0 - g), 1e-9);
}

TEST(LowPass, DutyImbalanceShowsInTheMean) {
  LowPass lp(0.02, 1e-3);
  double sum = 0.0;
  int n = 0;
  for (int k = 0; k < 6000; ++k) {
    const double y = lp.update(k % 3 == 2 ? -3.0 : 3.0);
    if (k >= 3000) {
      sum += y;
      ++n;
    }
  }
  EXPECT_NEAR(sum / n, 1.0, 1e-3);
}

TEST(EquivalentInjection, ZeroTauIsIdentity) {
  const std::vector<double> mu{0.3, -1.0, 7.5, 2.25, 0.0};
  EXPECT_EQ(equivalent_injection(mu, 1e-3, 0.0), mu);
}

TEST(EquivalentInjection, RelayNeedsAFilter) {
  const std::vector<double> mu{1.0, -1.0};
  EXPECT_THROW(equivalent_injection(mu, 1e-3, 0.0, InjectionSource::relay), std::invalid_argument);
  EXPECT_NO_THROW(equivalent_injection(mu, 1e-3, 0.02, InjectionSource::relay));
  EXPECT_THROW(LowPass(-1.0, 1e-3), std::invalid_argument);
}

TEST(ReconstructFaults, ZeroInjectionZeroFault) {
  const LeakageEstimate f = reconstruct_faults(0.0, 0.0, 0.1, PlantParams{});
  EXPECT_EQ(f.f1_hat, 0.0);
  EXPECT_EQ(f.f2_hat, 0.0);
}

TEST(ReconstructFaults, InvertsChamberStiffness) {
  const LeakageEstimate f = reconstruct_faults(1.497e8, 0.0, 0.1, PlantParams{});
  EXPECT_NEAR(f.f1_hat, 1e-5, 1e-8);
}

TEST(SlidingDetector, LatchesStartOfFirstLongRun) {
  SlidingDetector d(1.0, 3);
  const double s[] = {2.0, 0.5, 0.5, 2.0, 0.1, 0.1, 0.1, 5.0, 0.1};
  for (int k = 0; k < 9; ++k) d.update(s[k], k);
  ASSERT_TRUE(d.valid_from().has_value());
  EXPECT_EQ(*d.valid_from(), 4.0);
  EXPECT_FALSE(d.sliding());
  EXPECT_THROW(SlidingDetector(1.0, 0), std::invalid_argument);
}

TEST(FaultReconstructor, EstimatesInvalidBeforeSliding) {
  const ObserverConfig cfg = default_observer_config();
  FaultReconstructor rec(cfg, 1e-3, 0.02, 100);
  Injections inj;
  inj.sigma = {1e6, 1e6, 1e6, 1.0};
  const FaultEstimate e = rec.update(inj, 0.1, 0.0, PlantParams{});
  EXPECT_FALSE(e.valid_1());
  EXPECT_FALSE(e.valid_2());
  EXPECT_FALSE(e.valid_4());
}

TEST(FaultReconstructor, InternalLeakTrackedEndToEnd) {
  const SimTrace tr = run_scenario(internal_leak(1e-11));
  ASSERT_TRUE(tr.sliding_from[kP1].has_value());
  EXPECT_LT(*tr.sliding_from[kP1], 12.0);
  EXPECT_LT(relative_rms(tr, {13.0, 20.0}, &TraceRecord::f1_hat, &TraceRecord::ql1), 0.05);
  EXPECT_LT(relative_rms(tr, {13.0, 20.0}, &TraceRecord::f2_hat, &TraceRecord::ql2), 0.05);
}

TEST(FaultReconstructor, ZeroMeanWithoutFaults) {
  Scenario sc;
  sc.duration = 20.0;
  const SimTrace tr = run_scenario(sc);
  // Against a 1e-11 leak the flows are of order 5e-6 m^3/s.
  EXPECT_LT(std::abs(mean_of(tr, {2.0, 20.0}, &TraceRecord::f1_hat)), 1e-8);
  EXPECT_LT(std::abs(mean_of(tr, {2.0, 20.0}, &TraceRecord::f2_hat)), 1e-8);
}

TEST(FaultReconstructor, LinearInLeakCoefficient) {
  // With the cylinder held still the chamber pressures do not depend on the
  // leak, so the true flow is exactly linear in C_i. While tracking, the loop
  // shifts the pressures and only the estimate-to-truth ratio stays fixed.
  auto held = [](double C_i) {
    Scenario sc = internal_leak(C_i);
    sc.reference.amplitude = 0.0;
    return run_scenario(sc);
  };
  const Window w{13.0, 20.0};
  const SimTrace one = held(1e-11);
  const SimTrace two = held(2e-11);
  const double ratio = mean_of(two, w, &TraceRecord::f1_hat) / mean_of(one, w, &TraceRecord::f1_hat);
  EXPECT_NEAR(ratio, 2.0, 0.04);

  const SimTrace moving = run_scenario(internal_leak(2e-11));
  EXPECT_NEAR(mean_of(moving, w, &TraceRecord::f1_hat) / mean_of(moving, w, &TraceRecord::ql1), 1.0, 0.02);
}

TEST(FaultReconstructor, ErrorFromWrongSpoolEstimateDecaysWithValveLag) {
  Scenario sc;
  sc.duration = 1.0;
  const SimTrace ref = run_scenario(sc);
  sc.observer.initial.z1 = 2e-5;
  const SimTrace off = run_scenario(sc);
  // Plant traces are identical, so the estimate difference is the error
  // caused by e_z1 alone.
  const double tau_v = sc.plant.tau_v;
  auto envelope = [&](double from, double to) {
    double m = 0.0;
    for (std::size_t k = 0; k < ref.records.size(); ++k) {
      const double t = ref.records[k].t;
      if (t >= from && t < to) m = std::max(m, std::abs(off.records[k].f1_hat - ref.records[k].f1_hat));
    }
    return m;
  };
  const double early = envelope(2.0 * tau_v, 3.0 * tau_v);
  const double late = envelope(6.0 * tau_v, 7.0 * tau_v);
  ASSERT_GT(early, 0.0);
  EXPECT_LT(late, early * std::exp(-4.0 + 1.0));
}

Scenario constant_force(double f_d) {
  Scenario sc;
  sc.duration = 10.0;
  sc.faults.push_back({0.0, 10.0, FaultInputs{.f_d = f_d}});
  return sc;
}

TEST(CylinderPerturbation, ZeroWithoutDisturbance) {
  Scenario sc;
  sc.duration = 10.0;
  const SimTrace tr = run_scenario(sc);
  EXPECT_LT(std::abs(mean_of(tr, {3.0, 10.0}, &TraceRecord::rho4_hat)), 0.1);
}

TEST(CylinderPerturbation, ConstantForce) {
  const SimTrace tr = run_scenario(constant_force(3.0));
  EXPECT_NEAR(mean_of(tr, {3.0, 10.0}, &TraceRecord::rho4_hat), 20.0, 0.2);
}

TEST(CylinderPerturbation, SinusoidalForceAtOneHertz) {
  Scenario sc;
  sc.duration = 10.0;
  sc.disturbance.f_d_amplitude = 3.0;
  sc.disturbance.f_d_frequency = 1.0;
  const SimTrace tr = run_scenario(sc);
  const double w = 2.0 * std::numbers::pi;
  double es = 0.0, ec = 0.0, ts = 0.0, tc = 0.0;
  for (const auto& r : tr.records) {
    if (r.t < 4.0) continue;
    es += r.rho4_hat * std::sin(w * r.t);
    ec += r.rho4_hat * std::cos(w * r.t);
    ts += r.f_d / sc.plant.m * std::sin(w * r.t);
    tc += r.f_d / sc.plant.m * std::cos(w * r.t);
  }
  const double gain = std::hypot(es, ec) / std::hypot(ts, tc);
  const double lag = std::atan2(tc, ts) - std::atan2(ec, es);
  const double filter_lag = std::atan(w * sc.filter_tau);
  EXPECT_GE(gain, 0.95);
  EXPECT_GT(lag, 0.0);
  // The sliding motion itself adds a few milliseconds of delay.
  EXPECT_LT(lag, filter_lag + 0.03);
}

TEST(CylinderPerturbation, OfflineMatchesOnline) {
  const SimTrace tr = run_scenario(constant_force(3.0));
  std::vector<double> mu_z, mu4;
  for (const auto& r : tr.records) {
    mu_z.push_back(r.L2[kPosition] * mu2(r.sigma[kPosition]));
    mu4.push_back(r.mu[kPosition]);
  }
  const Scenario sc = constant_force(3.0);
  const auto rho = reconstruct_cylinder_perturbation(mu_z, mu4, sc.plant, sc.dt, sc.filter_tau);
  for (std::size_t k = 0; k < rho.size(); ++k) ASSERT_DOUBLE_EQ(rho[k], tr.records[k].rho4_hat);
}

}  // namespace
}  // namespace ehss
