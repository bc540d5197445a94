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

#ifndef EHSS_SMC_CELLS_HPP_
#define EHSS_SMC_CELLS_HPP_

#include <algorithm>
#include <cmath>

/// Output-injection channels for sliding-mode observers. Each cell maps a
/// scalar sliding variable sigma (output estimation error) to an injection
/// term; the cells know nothing about the system they are attached to.
namespace ehss {

/// sign(x) with sign(0) = 0.
inline double sign(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

/// |sigma|^(1/2) sign(sigma).
inline double mu1(double sigma) { return std::sqrt(std::abs(sigma)) * sign(sigma); }

/// sign(sigma).
inline double mu2(double sigma) { return sign(sigma); }

/// Tuning of one adaptive super-twisting channel.
///
/// The gain L1 grows at rate alpha1*sqrt(Gamma1/2) while |sigma| > epsilon and
/// shrinks at the same rate inside the band. Once it falls to L_floor it is
/// pushed back up at L_ramp per second. L2 is slaved to L1 through lambda1.
struct AstwCellParams {
  double alpha1 = 100.0;
  double Gamma1 = 2.0;
  double epsilon = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;  // only used by the Lyapunov checks
  double L_floor = 0.1;
  double L_ramp = 100.0;
  double L1_init = 1.0;

  double adaptation_rate() const { return alpha1 * std::sqrt(Gamma1 / 2.0); }

  bool valid() const {
    return alpha1 > 0.0 && Gamma1 > 0.0 && epsilon > 0.0 && lambda1 > 0.0 && lambda2 > 0.0 &&
           L_floor > 0.0 && L_ramp > 0.0 && L1_init > L_floor;
  }

  friend bool operator==(const AstwCellParams&, const AstwCellParams&) = default;
};

/// Running state of an injection cell. `nu` is the integral of L2*sign(sigma).
struct AstwCellState {
  double L1 = 1.0;
  double L2 = 1.0;
  double nu = 0.0;
  double last_mu = 0.0;

  static AstwCellState initial(const AstwCellParams& p) {
    return {p.L1_init, p.lambda1 * p.L1_init, 0.0, 0.0};
  }

  friend bool operator==(const AstwCellState&, const AstwCellState&) = default;
};

/// Perturbation bounds of one channel: first-order bound and bound on the
/// derivative of the perturbation entering the integral term.
struct BoundSet {
  double delta1 = 0.0;
  double delta2 = 0.0;
};

struct CellOutput {
  double mu = 0.0;
  AstwCellState cell;
};

/// One explicit-Euler step of the gain adaptation law; returns the new L1.
inline double adapt_gain(double L1, double sigma, const AstwCellParams& p, double dt) {
  double next;
  if (L1 > p.L_floor) {
    next = L1 + dt * p.adaptation_rate() * sign(std::abs(sigma) - p.epsilon);
  } else {
    next = L1 + dt * p.L_ramp;
  }
  return std::max(next, p.L_floor);
}

/// Adaptive super-twisting injection:
///   mu = L1 |sigma|^(1/2) sign(sigma) + nu,  nu' = L2 sign(sigma),  L2 = lambda1 L1.
/// Gains are updated first and the new gains drive the injection.
inline CellOutput astw_step(const AstwCellState& cell, double sigma, const AstwCellParams& p,
                            double dt) {
  AstwCellState next;
  next.L1 = adapt_gain(cell.L1, sigma, p, dt);
  next.L2 = p.lambda1 * next.L1;
  next.nu = cell.nu + dt * next.L2 * mu2(sigma);
  next.last_mu = next.L1 * mu1(sigma) + next.nu;
  return {next.last_mu, next};
}

/// Super-twisting injection with frozen gains.
inline CellOutput stw_step(const AstwCellState& cell, double sigma, double L1_fixed,
                           double L2_fixed, double dt) {
  AstwCellState next;
  next.L1 = L1_fixed;
  next.L2 = L2_fixed;
  next.nu = cell.nu + dt * L2_fixed * mu2(sigma);
  next.last_mu = L1_fixed * mu1(sigma) + next.nu;
  return {next.last_mu, next};
}

/// First-order (relay) sliding-mode injection.
inline double fosmo_step(double sigma, double rho_gain) { return rho_gain * sign(sigma); }

struct GainCondition {
  bool satisfied = false;
  double threshold = 0.0;  // right-hand side of the strict inequality
  double margin = 0.0;     // L1 - threshold
};

/// Sufficient gain condition for finite-time convergence of a channel with
/// L2 = lambda1 * L1 and perturbation bounds (delta1, delta2).
inline GainCondition check_gain_condition(double L1, double lambda1, double lambda2,
                                          double delta1, double delta2) {
  const double a = 2.0 * lambda1 * (lambda1 - delta1) + (lambda2 + delta2);
  const double threshold = a * a / (4.0 * lambda1 * lambda2) +
                           (4.0 * lambda1 * (2.0 * lambda1 - delta2) + lambda2 * delta1) /
                               (2.0 * lambda2);
  return {L1 > threshold, threshold, L1 - threshold};
}

}  // namespace ehss

#endif  // EHSS_SMC_CELLS_HPP_
