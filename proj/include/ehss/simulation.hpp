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

#ifndef EHSS_SIMULATION_HPP_
#define EHSS_SIMULATION_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ehss/errors.hpp"
#include "ehss/fault_reconstruction.hpp"
#include "ehss/observer.hpp"
#include "ehss/plant.hpp"

namespace ehss {

struct PiGains {
  double kp = 0.0;
  double ki = 0.0;
  friend bool operator==(const PiGains&, const PiGains&) = default;
};

/// Substitute position / supply-pressure controllers. Integrator states are
/// kept in output units (volts), so `*_integrator_init` is a voltage.
struct ControllerGains {
  PiGains position{60.0, 30.0};     // [V/m], [V/(m s)]
  PiGains pressure{1.0e-6, 2.0e-5};  // [V/Pa], [V/(Pa s)]
  double position_integrator_init = 0.0;
  double pressure_integrator_init = 3.0;
  friend bool operator==(const ControllerGains&, const ControllerGains&) = default;
};

/// Desired position x_d(t) = offset + amplitude sin(2 pi frequency t) and a
/// constant supply-pressure setpoint.
struct Reference {
  double offset = 0.1;
  double amplitude = 0.05;
  double frequency = 0.05;
  double supply_pressure = 30.0e5;

  double position_at(double t) const {
    return offset + amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
  }
  friend bool operator==(const Reference&, const Reference&) = default;
};

/// Additive change to the fault inputs, active on [t_start, t_end).
struct FaultEvent {
  double t_start = 0.0;
  double t_end = 0.0;
  FaultInputs delta;
  friend bool operator==(const FaultEvent&, const FaultEvent&) = default;
};

/// Sinusoidal disturbance force and supply-pressure uncertainty.
struct Disturbance {
  double f_d_amplitude = 0.0;
  double f_d_frequency = 0.0;
  double Delta_amplitude = 0.0;
  double Delta_frequency = 0.0;
  friend bool operator==(const Disturbance&, const Disturbance&) = default;
};

/// Rest state at mid-stroke: closed spool, balanced piston forces, supply at
/// the setpoint.
inline PlantState rest_state(const PlantParams& p, double position = 0.1, double ps = 30.0e5,
                             double p2 = 15.0e5) {
  return {0.0, p2 * p.A2() / p.A1(), p2, ps, position, 0.0};
}

/// Observer tuning for the shipped plant in SI units. The pressure channels
/// need gains scaled to Pa/s perturbations; the position channel works in
/// metres. The baselines are sized for worst-case perturbations: the
/// super-twisting gains follow L1 = 1.5 sqrt(C), L2 = 1.1 C with a gradient
/// bound C = 3e9 Pa/s^2, and the relay gain bounds a leakage perturbation of
/// 5e8 Pa/s.
inline ObserverConfig default_observer_config() {
  ObserverConfig cfg;
  for (std::size_t i = kP1; i <= kPs; ++i) {
    cfg.astw[i] = {.alpha1 = 2.0e6, .Gamma1 = 2.0, .epsilon = 1.0e4, .lambda1 = 3.0e4,
                   .lambda2 = 1.0, .L_floor = 1.0, .L_ramp = 3.0e6, .L1_init = 10.0};
    cfg.stw[i] = {8.2e4, 3.3e9};
    cfg.fosmo[i] = {5.0e8, 0.0};
  }
  cfg.astw[kPosition] = {.alpha1 = 10.0, .Gamma1 = 2.0, .epsilon = 2.0e-5, .lambda1 = 50.0,
                         .lambda2 = 1.0, .L_floor = 0.01, .L_ramp = 10.0, .L1_init = 0.1};
  cfg.stw[kPosition] = {0.3, 15.0};
  cfg.fosmo[kPosition] = {0.05, 2.0};
  return cfg;
}

struct Scenario {
  double duration = 30.0;
  double dt = 1.0e-3;
  int plant_substeps = 20;
  PlantParams plant;
  PlantState initial_state = rest_state(PlantParams{});
  ObserverConfig observer = default_observer_config();
  ControllerGains controller;
  Reference reference;
  std::vector<FaultEvent> faults;
  Disturbance disturbance;
  std::array<double, 4> noise_std{};
  std::uint64_t seed = 1;
  double filter_tau = 0.02;
  int sliding_dwell = 100;

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

  FaultInputs faults_at(double t) const {
    FaultInputs f;
    for (const auto& ev : faults) {
      if (t >= ev.t_start && t < ev.t_end) {
        f.C_i += ev.delta.C_i;
        f.C_e1 += ev.delta.C_e1;
        f.C_e2 += ev.delta.C_e2;
        f.f_d += ev.delta.f_d;
        f.Delta += ev.delta.Delta;
      }
    }
    const double w = 2.0 * std::numbers::pi;
    f.f_d += disturbance.f_d_amplitude * std::sin(w * disturbance.f_d_frequency * t);
    f.Delta += disturbance.Delta_amplitude * std::sin(w * disturbance.Delta_frequency * t);
    return f;
  }

  /// Throws ConfigError on the first violated invariant.
  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(duration >= dt)) throw ConfigError("duration must be at least dt");
    if (plant_substeps < 1) throw ConfigError("plant_substeps must be >= 1");
    if (!(filter_tau >= 0.0)) throw ConfigError("filter_tau must be non-negative");
    if (sliding_dwell < 1) throw ConfigError("sliding_dwell must be >= 1");
    plant.validate();
    observer.validate();
    if (observer.kind == ObserverKind::fosmo && filter_tau == 0.0) {
      throw ConfigError("filter_tau must be positive for the fosmo observer");
    }
    for (double s : noise_std) {
      if (!(s >= 0.0)) throw ConfigError("noise_std entries must be non-negative");
    }
    for (std::size_t i = 0; i < faults.size(); ++i) {
      const auto& ev = faults[i];
      const std::string where = "faults[" + std::to_string(i) + "]";
      if (!(ev.t_start >= 0.0) || !(ev.t_end <= duration) || !(ev.t_start < ev.t_end)) {
        throw ConfigError(where + ": interval must satisfy 0 <= t_start < t_end <= duration");
      }
      if (ev.delta.C_i < 0.0 || ev.delta.C_e1 < 0.0 || ev.delta.C_e2 < 0.0) {
        throw ConfigError(where + ": leakage coefficients must be non-negative");
      }
    }
    if (initial_state.position < 0.0 || initial_state.position > plant.stroke) {
      throw ConfigError("initial_state.position outside the stroke");
    }
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct PiState {
  double position_integral = 0.0;  // [V]
  double pressure_integral = 0.0;  // [V]
};

struct Setpoints {
  double position = 0.0;
  double supply_pressure = 0.0;
};

namespace detail {

// PI with integrator clamping: the integrator is frozen while the output is
// saturated and the error drives it further into saturation.
inline double pi_channel(double error, const PiGains& g, double& integral, double lo, double hi,
                         double dt) {
  const double raw = g.kp * error + integral;
  const double out = std::clamp(raw, lo, hi);
  const bool winding_up = (raw > hi && error > 0.0) || (raw < lo && error < 0.0);
  if (!winding_up) integral += g.ki * error * dt;
  return out;
}

}  // namespace detail

/// Position loop -> u1 in [-10, 10] V, supply-pressure loop -> u2 in [0, 5] V.
inline ControlInputs pi_controllers(const Measurement& y, const Setpoints& sp,
                                    const ControllerGains& g, PiState& st, double dt) {
  ControlInputs u;
  u.u1 = detail::pi_channel(sp.position - y[kPosition], g.position, st.position_integral,
                            -ControlInputs::kU1Max, ControlInputs::kU1Max, dt);
  u.u2 = detail::pi_channel(sp.supply_pressure - y[kPs], g.pressure, st.pressure_integral,
                            ControlInputs::kU2Min, ControlInputs::kU2Max, dt);
  return u;
}

/// One row of the simulation log. Estimates are the values held at time t
/// (before the observer consumes the sample); sigma = y - y_hat.
struct TraceRecord {
  double t = 0.0;
  PlantState x;
  Measurement y{};
  double z1_hat = 0.0;
  std::array<double, kChannels> y_hat{};
  double z2_hat = 0.0;
  std::array<double, kChannels> sigma{};
  std::array<double, kChannels> mu{};
  std::array<double, kChannels> L1{};
  std::array<double, kChannels> L2{};
  double ql1 = 0.0;
  double ql2 = 0.0;
  double f_d = 0.0;
  double f1_hat = 0.0;
  double f2_hat = 0.0;
  double rho4_hat = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SimTrace {
  std::vector<TraceRecord> records;
  bool has_observer = true;
  // First time sliding motion was detected on channels P1, P2, Ps, position.
  std::array<std::optional<double>, kChannels> sliding_from{};
};

struct RunOptions {
  bool with_observer = true;
};

/// Fixed-step closed loop: plant, substitute controllers, observer and fault
/// reconstruction advanced together, one record per sample.
class Simulation {
 public:
  explicit Simulation(const Scenario& sc, RunOptions opts = {})
      : sc_(validated(sc)),
        opts_(opts),
        plant_(sc.initial_state),
        rng_(sc.seed),
        reconstructor_(sc.observer, sc.dt, sc.filter_tau, sc.sliding_dwell) {
    pi_.position_integral = sc.controller.position_integrator_init;
    pi_.pressure_integral = sc.controller.pressure_integrator_init;
  }

  /// Logs the record for the current sample and advances every subsystem to
  /// the next one. Throws NumericalError on non-finite values.
  TraceRecord step() {
    const double t = static_cast<double>(k_) * sc_.dt;
    const Measurement y = measure(plant_, sc_.noise_std, rng_);
    const ControlInputs u =
        pi_controllers(y, {sc_.reference.position_at(t), sc_.reference.supply_pressure},
                       sc_.controller, pi_, sc_.dt);
    const FaultInputs f = sc_.faults_at(t);

    TraceRecord r;
    r.t = t;
    r.x = plant_;
    r.y = y;
    const LeakageFlows ql = leakage_flows(plant_.p1, plant_.p2, sc_.plant.P_T, f);
    r.ql1 = ql.ql1;
    r.ql2 = ql.ql2;
    r.f_d = f.f_d;
    r.u1 = u.u1;
    r.u2 = u.u2;

    if (opts_.with_observer) {
      if (!obs_) obs_ = initial_observer_state(sc_.observer, y);
      r.z1_hat = obs_->z1_hat;
      r.y_hat = obs_->y_hat;
      r.z2_hat = obs_->z2_hat;
      ObserverStepResult res = observer_step(*obs_, y, u, sc_.plant, sc_.observer, sc_.dt);
      const FaultEstimate est = reconstructor_.update(res.injections, y[kPosition], t, sc_.plant);
      r.sigma = res.injections.sigma;
      r.mu = res.injections.mu;
      r.L1 = res.injections.L1;
      r.L2 = res.injections.L2;
      r.f1_hat = est.f1_hat;
      r.f2_hat = est.f2_hat;
      r.rho4_hat = est.rho4_hat;
      obs_ = res.next;
    }

    if (!record_finite(r) || (obs_ && !obs_->all_finite())) {
      throw NumericalError("non-finite record", t);
    }
    plant_ = advance_plant(plant_, u, f, sc_.plant, sc_.dt, sc_.plant_substeps);
    if (!plant_.all_finite()) throw NumericalError("non-finite plant state", t);
    ++k_;
    return r;
  }

  const PlantState& plant() const { return plant_; }
  const std::optional<ObserverState>& observer() const { return obs_; }
  const FaultReconstructor& reconstructor() const { return reconstructor_; }

  static bool record_finite(const TraceRecord& r) {
    auto ok = [](double v) { return std::isfinite(v); };
    auto all = [&](const auto& a) { return std::all_of(a.begin(), a.end(), ok); };
    return ok(r.t) && r.x.all_finite() && all(r.y) && ok(r.z1_hat) && all(r.y_hat) &&
           ok(r.z2_hat) && all(r.sigma) && all(r.mu) && all(r.L1) && all(r.L2) && ok(r.ql1) &&
           ok(r.ql2) && ok(r.f_d) && ok(r.f1_hat) && ok(r.f2_hat) && ok(r.rho4_hat) && ok(r.u1) &&
           ok(r.u2);
  }

 private:
  static const Scenario& validated(const Scenario& sc) {
    sc.validate();
    return sc;
  }

  Scenario sc_;
  RunOptions opts_;
  PlantState plant_;
  std::optional<ObserverState> obs_;
  PiState pi_;
  std::mt19937_64 rng_;
  FaultReconstructor reconstructor_;
  std::size_t k_ = 0;
};

/// Runs `sc` to completion: duration/dt + 1 records at t = k dt.
inline SimTrace run_scenario(const Scenario& sc, RunOptions opts = {}) {
  Simulation sim(sc, opts);
  SimTrace trace;
  trace.has_observer = opts.with_observer;
  const std::size_t n = sc.steps();
  trace.records.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) trace.records.push_back(sim.step());
  for (std::size_t i = 0; i < kChannels; ++i) {
    trace.sliding_from[i] = sim.reconstructor().detector(i).valid_from();
  }
  return trace;
}

}  // namespace ehss

#endif  // EHSS_SIMULATION_HPP_
