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

#ifndef EHSS_OBSERVER_HPP_
#define EHSS_OBSERVER_HPP_

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ehss/errors.hpp"
#include "ehss/plant.hpp"
#include "ehss/smc_cells.hpp"

namespace ehss {

inline constexpr std::size_t kChannels = 4;

/// Channel indices: three pressure channels and the position/velocity block.
enum Channel : std::size_t { kP1 = 0, kP2 = 1, kPs = 2, kPosition = 3 };

enum class ObserverKind { astw, stw, fosmo };

inline std::string_view to_string(ObserverKind k) {
  switch (k) {
    case ObserverKind::astw: return "astw";
    case ObserverKind::stw: return "stw";
    case ObserverKind::fosmo: return "fosmo";
  }
  return "?";
}

inline ObserverKind observer_kind_from_string(std::string_view s) {
  if (s == "astw") return ObserverKind::astw;
  if (s == "stw") return ObserverKind::stw;
  if (s == "fosmo") return ObserverKind::fosmo;
  throw ConfigError("unknown observer kind '" + std::string(s) + "'");
}

struct StwGains {
  double L1 = 1.0;
  double L2 = 1.0;
  friend bool operator==(const StwGains&, const StwGains&) = default;
};

/// Relay gains. `rho_z` drives the velocity estimate of the position
/// channel and is ignored elsewhere.
struct FosmoGains {
  double rho = 1.0;
  double rho_z = 0.0;
  friend bool operator==(const FosmoGains&, const FosmoGains&) = default;
};

/// Initial estimates. Measured channels default to the first sample.
struct InitialEstimates {
  double z1 = 0.0;
  double z2 = 0.0;
  std::optional<std::array<double, kChannels>> y;
  friend bool operator==(const InitialEstimates&, const InitialEstimates&) = default;
};

struct ObserverConfig {
  ObserverKind kind = ObserverKind::astw;
  std::array<AstwCellParams, kChannels> astw{};
  std::array<StwGains, kChannels> stw{};
  std::array<FosmoGains, kChannels> fosmo{};
  InitialEstimates initial;

  /// Dead-band used for sliding detection and reach-time metrics. For
  /// non-adaptive observers the ASTW epsilon of the channel is reused.
  double epsilon(std::size_t ch) const { return astw[ch].epsilon; }

  void validate() const {
    for (std::size_t i = 0; i < kChannels; ++i) {
      const std::string where = "observer channel " + std::to_string(i + 1);
      switch (kind) {
        case ObserverKind::astw:
          if (!astw[i].valid()) throw ConfigError(where + ": invalid adaptive cell parameters");
          break;
        case ObserverKind::stw:
          if (!(stw[i].L1 > 0.0) || !(stw[i].L2 > 0.0)) {
            throw ConfigError(where + ": super-twisting gains must be positive");
          }
          break;
        case ObserverKind::fosmo:
          if (!(fosmo[i].rho > 0.0) || fosmo[i].rho_z < 0.0) {
            throw ConfigError(where + ": relay gain must be positive");
          }
          break;
      }
      if (!(astw[i].epsilon > 0.0)) throw ConfigError(where + ": epsilon must be positive");
    }
  }

  friend bool operator==(const ObserverConfig&, const ObserverConfig&) = default;
};

/// Estimates of the reordered state: z1 (spool), y1..y4 (measured outputs),
/// z2 (velocity), plus one injection cell per channel.
struct ObserverState {
  double z1_hat = 0.0;
  std::array<double, kChannels> y_hat{};
  double z2_hat = 0.0;
  std::array<AstwCellState, kChannels> cells{};

  bool all_finite() const {
    if (!std::isfinite(z1_hat) || !std::isfinite(z2_hat)) return false;
    for (std::size_t i = 0; i < kChannels; ++i) {
      if (!std::isfinite(y_hat[i]) || !std::isfinite(cells[i].L1) || !std::isfinite(cells[i].nu)) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const ObserverState&, const ObserverState&) = default;
};

/// Per-channel record of one observer step.
struct Injections {
  std::array<double, kChannels> sigma{};
  std::array<double, kChannels> mu{};  // injection into the y_hat equations
  std::array<double, kChannels> L1{};
  std::array<double, kChannels> L2{};
  double mu_z = 0.0;  // injection into the z2_hat equation
};

/// sigma_i = y_i - y_hat_i.
inline std::array<double, kChannels> sliding_errors(const Measurement& y,
                                                    const ObserverState& obs) {
  std::array<double, kChannels> s{};
  for (std::size_t i = 0; i < kChannels; ++i) s[i] = y[i] - obs.y_hat[i];
  return s;
}

inline ObserverState initial_observer_state(const ObserverConfig& cfg, const Measurement& y0) {
  ObserverState obs;
  obs.z1_hat = cfg.initial.z1;
  obs.z2_hat = cfg.initial.z2;
  obs.y_hat = cfg.initial.y.value_or(y0);
  for (std::size_t i = 0; i < kChannels; ++i) {
    switch (cfg.kind) {
      case ObserverKind::astw: obs.cells[i] = AstwCellState::initial(cfg.astw[i]); break;
      case ObserverKind::stw: obs.cells[i] = {cfg.stw[i].L1, cfg.stw[i].L2, 0.0, 0.0}; break;
      case ObserverKind::fosmo: obs.cells[i] = {cfg.fosmo[i].rho, cfg.fosmo[i].rho_z, 0.0, 0.0}; break;
    }
  }
  return obs;
}

/// Continuous-time observer right-hand side for given injections, in the
/// layout (z1, y1, y2, y3, y4, z2). The unknown disturbance force is not
/// part of the velocity model; it is left to the position-channel injection.
inline std::array<double, 6> observer_derivative(const ObserverState& obs, const Measurement& y,
                                                 const ControlInputs& u, const PlantParams& p,
                                                 const Injections& inj) {
  const auto [phi1, phi2] = phi_coeffs(y[kPosition], p);
  const auto [q1, q2] = pdv_flows(obs.z1_hat, y[kP1], y[kP2], y[kPs], p.P_T, p);
  const double a1 = p.A1();
  const double a2 = p.A2();
  return {
      (-obs.z1_hat + p.K_v * u.u1) / p.tau_v,
      phi1 * (q1 - a1 * obs.z2_hat) + inj.mu[kP1],
      phi2 * (-q2 + a2 * obs.z2_hat) + inj.mu[kP2],
      (-y[kPs] + p.K_r * u.u2) / p.tau_s + inj.mu[kPs],
      obs.z2_hat + inj.mu[kPosition],
      (-p.c * obs.z2_hat + a1 * y[kP1] - a2 * y[kP2]) / p.m + inj.mu_z,
  };
}

/// Computes the injections for the current sample and updates the cells.
inline Injections compute_injections(ObserverState& obs, const Measurement& y,
                                     const ObserverConfig& cfg, double dt) {
  Injections inj;
  inj.sigma = sliding_errors(y, obs);
  for (std::size_t i = 0; i < kChannels; ++i) {
    const double s = inj.sigma[i];
    AstwCellState& cell = obs.cells[i];
    switch (cfg.kind) {
      case ObserverKind::astw:
        if (i == kPosition) {
          // Second-order block: L1*mu1 drives y4_hat, L2*mu2 drives z2_hat.
          cell.L1 = adapt_gain(cell.L1, s, cfg.astw[i], dt);
          cell.L2 = cfg.astw[i].lambda1 * cell.L1;
          cell.nu += dt * cell.L2 * mu2(s);
          cell.last_mu = cell.L1 * mu1(s);
          inj.mu_z = cell.L2 * mu2(s);
        } else {
          cell = astw_step(cell, s, cfg.astw[i], dt).cell;
        }
        break;
      case ObserverKind::stw:
        if (i == kPosition) {
          cell.L1 = cfg.stw[i].L1;
          cell.L2 = cfg.stw[i].L2;
          cell.nu += dt * cell.L2 * mu2(s);
          cell.last_mu = cell.L1 * mu1(s);
          inj.mu_z = cell.L2 * mu2(s);
        } else {
          cell = stw_step(cell, s, cfg.stw[i].L1, cfg.stw[i].L2, dt).cell;
        }
        break;
      case ObserverKind::fosmo:
        cell.L1 = cfg.fosmo[i].rho;
        cell.L2 = i == kPosition ? cfg.fosmo[i].rho_z : 0.0;
        cell.last_mu = fosmo_step(s, cfg.fosmo[i].rho);
        if (i == kPosition) inj.mu_z = fosmo_step(s, cfg.fosmo[i].rho_z);
        break;
    }
    inj.mu[i] = cell.last_mu;
    inj.L1[i] = cell.L1;
    inj.L2[i] = cell.L2;
  }
  return inj;
}

struct ObserverStepResult {
  ObserverState next;
  Injections injections;
};

/// Advances the observer by one sample of length `dt` using measurement `y`
/// and the input `u` applied over the sample. Injection terms are held over
/// the sample (explicit Euler). The spool copy and the linear velocity
/// damping are integrated exactly under zero-order hold; the damping time
/// constant m/c is below a millisecond, where explicit Euler is unstable.
inline ObserverStepResult observer_step(const ObserverState& obs, const Measurement& y,
                                        const ControlInputs& u, const PlantParams& p,
                                        const ObserverConfig& cfg, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("observer_step: dt must be positive");
  ObserverState next = obs;
  const Injections inj = compute_injections(next, y, cfg, dt);
  const auto d = observer_derivative(obs, y, u, p, inj);

  const double spool_gain = -std::expm1(-dt / p.tau_v);
  next.z1_hat = obs.z1_hat + spool_gain * (p.K_v * u.u1 - obs.z1_hat);
  for (std::size_t i = 0; i < kChannels; ++i) next.y_hat[i] = obs.y_hat[i] + dt * d[i + 1];

  const double damping_gain = -std::expm1(-dt * p.c / p.m);
  const double forcing = (p.A1() * y[kP1] - p.A2() * y[kP2]) / p.m + inj.mu_z;
  next.z2_hat = obs.z2_hat + damping_gain * ((p.m / p.c) * forcing - obs.z2_hat);
  return {next, inj};
}

}  // namespace ehss

#endif  // EHSS_OBSERVER_HPP_
