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

#ifndef EHSS_PLANT_HPP_
#define EHSS_PLANT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "ehss/errors.hpp"

/// Electro-hydraulic servo system: proportional directional valve (PDV),
/// double-acting cylinder chambers, proportional relief valve (PRV) supply
/// pressure and the cylinder's mass-damper dynamics.
namespace ehss {

/// Physical constants of the rig. Defaults are the nominal bench values.
struct PlantParams {
  double tau_v = 0.07;     // PDV time constant [s]
  double K_v = 1.13e-4;    // PDV gain [m/V]
  double tau_s = 0.05;     // PRV time constant [s]
  double K_r = 1.0e6;      // PRV gain [Pa/V]
  double beta = 1.05e9;    // bulk modulus [Pa]
  double rho = 845.0;      // fluid density [kg/m^3]
  double C_d = 0.7;        // discharge coefficient [-]
  double w = 0.01;         // orifice area gradient [m]
  double d1 = 0.016;       // piston diameter [m]
  double d2 = 0.010;       // rod diameter [m]
  double V01 = 5.0e-5;     // piston-side dead volume [m^3]
  double V02 = 5.0e-5;     // rod-side dead volume [m^3]
  double m = 0.15;         // equivalent mass [kg]
  double c = 350.0;        // equivalent damping [N s/m]
  double P_T = 0.0;        // tank pressure [Pa]
  double stroke = 0.2;     // cylinder stroke [m]
  double P_s_max = 5.0e6;  // supply-pressure ceiling [Pa]

  double A1() const { return std::numbers::pi * d1 * d1 / 4.0; }
  // Annular rod-side area.
  double A2() const { return std::numbers::pi * (d1 * d1 - d2 * d2) / 4.0; }

  /// Throws ConfigError naming the first violated constraint.
  void validate() const {
    const std::array<std::pair<const char*, double>, 16> positive = {{
        {"tau_v", tau_v}, {"K_v", K_v}, {"tau_s", tau_s}, {"K_r", K_r},
        {"beta", beta}, {"rho", rho}, {"C_d", C_d}, {"w", w},
        {"d1", d1}, {"d2", d2}, {"V01", V01}, {"V02", V02},
        {"m", m}, {"c", c}, {"stroke", stroke}, {"P_s_max", P_s_max},
    }};
    for (const auto& [name, value] : positive) {
      if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(std::string("plant.") + name + " must be positive and finite");
      }
    }
    if (!(P_T >= 0.0)) throw ConfigError("plant.P_T must be non-negative");
    if (!(d2 < d1)) throw ConfigError("plant.d2 must be smaller than plant.d1");
    if (!(V02 - A2() * stroke > 0.0)) {
      throw ConfigError("plant.V02 too small: rod-side volume vanishes within the stroke");
    }
  }

  friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

/// x1..x6 of the state-space model.
struct PlantState {
  double spool = 0.0;     // x1, spool position [m]
  double p1 = 0.0;        // x2, piston-side pressure [Pa]
  double p2 = 0.0;        // x3, rod-side pressure [Pa]
  double ps = 0.0;        // x4, supply pressure [Pa]
  double position = 0.0;  // x5, cylinder position [m]
  double velocity = 0.0;  // x6, cylinder velocity [m/s]

  std::array<double, 6> as_array() const { return {spool, p1, p2, ps, position, velocity}; }

  bool all_finite() const {
    const auto a = as_array();
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const PlantState&, const PlantState&) = default;
};

/// Time derivative of PlantState, same component layout.
using PlantDerivative = std::array<double, 6>;

/// Leakage coefficients and the unknown inputs acting on the plant.
struct FaultInputs {
  double C_i = 0.0;    // internal leakage [m^3/(s Pa)]
  double C_e1 = 0.0;   // piston-side external leakage [m^3/(s Pa)]
  double C_e2 = 0.0;   // rod-side external leakage [m^3/(s Pa)]
  double f_d = 0.0;    // disturbance / friction force [N]
  double Delta = 0.0;  // supply-pressure uncertainty [Pa/s]

  friend bool operator==(const FaultInputs&, const FaultInputs&) = default;
};

/// Valve command voltages.
struct ControlInputs {
  double u1 = 0.0;  // PDV [V], admissible range [-10, 10]
  double u2 = 0.0;  // PRV [V], admissible range [0, 5]

  static constexpr double kU1Max = 10.0;
  static constexpr double kU2Min = 0.0;
  static constexpr double kU2Max = 5.0;

  friend bool operator==(const ControlInputs&, const ControlInputs&) = default;
};

struct PdvFlows {
  double q1 = 0.0;  // into the piston-side chamber [m^3/s]
  double q2 = 0.0;  // out of the rod-side chamber [m^3/s]
};

struct LeakageFlows {
  double ql1 = 0.0;
  double ql2 = 0.0;
};

struct ChamberStiffness {
  double phi1 = 0.0;  // beta / (V01 + A1 x_c) [Pa/m^3]
  double phi2 = 0.0;  // beta / (V02 - A2 x_c) [Pa/m^3]
};

/// Orifice flows of the PDV. The flow path is selected by the sign of the
/// spool; square-root arguments are clamped at zero (no reverse flow).
inline PdvFlows pdv_flows(double spool, double p1, double p2, double ps, double pt,
                          const PlantParams& p) {
  const double k = p.C_d * p.w * spool;
  const double scale = 2.0 / p.rho;
  double dp1;
  double dp2;
  if (spool >= 0.0) {
    dp1 = ps - p1;
    dp2 = p2 - pt;
  } else {
    dp1 = p1 - pt;
    dp2 = ps - p2;
  }
  return {k * std::sqrt(scale * std::max(dp1, 0.0)), k * std::sqrt(scale * std::max(dp2, 0.0))};
}

/// Internal (C_i) and external (C_e1, C_e2) leakage flows.
inline LeakageFlows leakage_flows(double p1, double p2, double pt, const FaultInputs& f) {
  const double internal = f.C_i * (p2 - p1);
  return {internal - f.C_e1 * (p1 - pt), -internal - f.C_e2 * (p2 - pt)};
}

/// Chamber stiffness coefficients at cylinder position `position`.
/// Throws DomainError if either chamber volume is non-positive.
inline ChamberStiffness phi_coeffs(double position, const PlantParams& p) {
  const double v1 = p.V01 + p.A1() * position;
  const double v2 = p.V02 - p.A2() * position;
  if (!(v1 > 0.0) || !(v2 > 0.0)) {
    throw DomainError("chamber volume non-positive at cylinder position " +
                      std::to_string(position));
  }
  return {p.beta / v1, p.beta / v2};
}

/// Right-hand side of the nonlinear plant model.
inline PlantDerivative plant_derivative(const PlantState& s, const ControlInputs& u,
                                        const FaultInputs& f, const PlantParams& p) {
  const auto [phi1, phi2] = phi_coeffs(s.position, p);
  const auto [q1, q2] = pdv_flows(s.spool, s.p1, s.p2, s.ps, p.P_T, p);
  const auto [ql1, ql2] = leakage_flows(s.p1, s.p2, p.P_T, f);
  const double a1 = p.A1();
  const double a2 = p.A2();
  return {
      (-s.spool + p.K_v * u.u1) / p.tau_v,
      phi1 * (q1 - a1 * s.velocity + ql1),
      phi2 * (-q2 + a2 * s.velocity + ql2),
      (-s.ps + p.K_r * u.u2) / p.tau_s + f.Delta,
      s.velocity,
      (-p.c * s.velocity + a1 * s.p1 - a2 * s.p2 + f.f_d) / p.m,
  };
}

/// Advances the plant by `dt` with inputs held constant. The interval is
/// split into `substeps` explicit-Euler steps; the two first-order valve
/// lags use their exact zero-order-hold update. After each substep
/// pressures are clamped at zero, the supply pressure at P_s_max, and the
/// cylinder at its hard stops.
inline PlantState advance_plant(const PlantState& s, const ControlInputs& u, const FaultInputs& f,
                                const PlantParams& p, double dt, int substeps) {
  const double h = dt / substeps;
  const double spool_gain = -std::expm1(-h / p.tau_v);
  const double supply_gain = -std::expm1(-h / p.tau_s);
  PlantState x = s;
  for (int i = 0; i < substeps; ++i) {
    const PlantDerivative d = plant_derivative(x, u, f, p);
    PlantState n;
    n.spool = x.spool + spool_gain * (p.K_v * u.u1 - x.spool);
    n.p1 = x.p1 + h * d[1];
    n.p2 = x.p2 + h * d[2];
    n.ps = x.ps + supply_gain * (p.K_r * u.u2 + p.tau_s * f.Delta - x.ps);
    n.position = x.position + h * d[4];
    n.velocity = x.velocity + h * d[5];

    n.p1 = std::max(n.p1, 0.0);
    n.p2 = std::max(n.p2, 0.0);
    n.ps = std::clamp(n.ps, 0.0, p.P_s_max);
    if (n.position < 0.0) {
      n.position = 0.0;
      n.velocity = 0.0;
    } else if (n.position > p.stroke) {
      n.position = p.stroke;
      n.velocity = 0.0;
    }
    x = n;
  }
  return x;
}

/// Measured outputs y = (P1, P2, Ps, x_c).
using Measurement = std::array<double, 4>;

/// Measurement with additive zero-mean Gaussian noise drawn from `rng`.
template <class Engine>
Measurement measure(const PlantState& s, const std::array<double, 4>& noise_std, Engine& rng) {
  Measurement y = {s.p1, s.p2, s.ps, s.position};
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (noise_std[i] > 0.0) {
      std::normal_distribution<double> n(0.0, noise_std[i]);
      y[i] += n(rng);
    }
  }
  return y;
}

/// Deterministic single-shot measurement for a given seed.
inline Measurement measure(const PlantState& s, const std::array<double, 4>& noise_std,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return measure(s, noise_std, rng);
}

}  // namespace ehss

#endif  // EHSS_PLANT_HPP_
