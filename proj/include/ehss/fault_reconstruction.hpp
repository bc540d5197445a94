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

#ifndef EHSS_FAULT_RECONSTRUCTION_HPP_
#define EHSS_FAULT_RECONSTRUCTION_HPP_

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ehss/observer.hpp"
#include "ehss/plant.hpp"
#include "ehss/smc_cells.hpp"

namespace ehss {

/// First-order low-pass with zero-order-hold discretization,
///   y_k = y_{k-1} + (1 - exp(-dt/tau)) (x_k - y_{k-1}),  y_{-1} = 0.
/// tau = 0 passes the input through.
class LowPass {
 public:
  LowPass() = default;
  LowPass(double tau, double dt) : gain_(tau > 0.0 ? 1.0 - std::exp(-dt / tau) : 1.0) {
    if (tau < 0.0) throw std::invalid_argument("LowPass: tau must be non-negative");
    if (!(dt > 0.0)) throw std::invalid_argument("LowPass: dt must be positive");
  }

  double update(double x) {
    y_ += gain_ * (x - y_);
    return y_;
  }
  double value() const { return y_; }

 private:
  double gain_ = 1.0;
  double y_ = 0.0;
};

/// Whether an injection signal is continuous (super-twisting family) or a
/// relay (first-order sliding mode).
enum class InjectionSource { continuous, relay };

/// Equivalent output injection of one channel: the injection trace passed
/// through LowPass(filter_tau). Relay injections must be filtered.
inline std::vector<double> equivalent_injection(std::span<const double> mu_trace, double dt,
                                                double filter_tau,
                                                InjectionSource source = InjectionSource::continuous) {
  if (filter_tau < 0.0) throw std::invalid_argument("equivalent_injection: negative filter_tau");
  if (source == InjectionSource::relay && filter_tau == 0.0) {
    throw std::invalid_argument("equivalent_injection: relay injection requires filter_tau > 0");
  }
  LowPass lp(filter_tau, dt);
  std::vector<double> out;
  out.reserve(mu_trace.size());
  for (double mu : mu_trace) out.push_back(lp.update(mu));
  return out;
}

struct LeakageEstimate {
  double f1_hat = 0.0;  // [m^3/s]
  double f2_hat = 0.0;  // [m^3/s]
};

/// Maps equivalent injections [Pa/s] of the two chamber channels to leakage
/// flows: f_i = mu_eq_i / phi_i(y4).
inline LeakageEstimate reconstruct_faults(double mu_eq_1, double mu_eq_2, double y4,
                                          const PlantParams& p) {
  const auto [phi1, phi2] = phi_coeffs(y4, p);
  return {mu_eq_1 / phi1, mu_eq_2 / phi2};
}

/// Unfiltered cylinder perturbation [m/s^2] of one sample. The velocity
/// injection mu_z recovers f_d/m - (c/m) e_z2; in sliding motion e_z2 equals
/// the equivalent value of the position injection mu4 (since e_y4' = e_z2 -
/// mu4 averages to zero), so adding (c/m) mu4 leaves f_d/m.
inline double cylinder_perturbation(double mu_z, double mu4, const PlantParams& p) {
  return mu_z + p.c / p.m * mu4;
}

/// Filtered cylinder perturbation over whole traces of mu_z and mu4.
inline std::vector<double> reconstruct_cylinder_perturbation(std::span<const double> mu_z,
                                                             std::span<const double> mu4,
                                                             const PlantParams& p, double dt,
                                                             double filter_tau) {
  if (mu_z.size() != mu4.size()) {
    throw std::invalid_argument("reconstruct_cylinder_perturbation: trace length mismatch");
  }
  LowPass lp(filter_tau, dt);
  std::vector<double> out;
  out.reserve(mu_z.size());
  for (std::size_t k = 0; k < mu_z.size(); ++k) {
    out.push_back(lp.update(cylinder_perturbation(mu_z[k], mu4[k], p)));
  }
  return out;
}

/// Declares a channel in sliding motion once |sigma| < epsilon has held for
/// `dwell` consecutive samples. Latches the first detection time.
class SlidingDetector {
 public:
  SlidingDetector() = default;
  SlidingDetector(double epsilon, int dwell) : epsilon_(epsilon), dwell_(dwell) {
    if (dwell < 1) throw std::invalid_argument("SlidingDetector: dwell must be >= 1");
  }

  bool update(double sigma, double t) {
    if (std::abs(sigma) < epsilon_) {
      if (count_ == 0) run_start_ = t;
      ++count_;
    } else {
      count_ = 0;
    }
    if (!valid_from_ && count_ >= dwell_) valid_from_ = run_start_;
    return sliding();
  }

  bool sliding() const { return count_ >= dwell_; }
  std::optional<double> valid_from() const { return valid_from_; }

 private:
  double epsilon_ = 0.0;
  int dwell_ = 1;
  int count_ = 0;
  double run_start_ = 0.0;
  std::optional<double> valid_from_;
};

struct FaultEstimate {
  double f1_hat = 0.0;
  double f2_hat = 0.0;
  double rho4_hat = 0.0;
  // Time sliding motion was first established on the channel feeding each
  // estimate (P1, P2, position); empty until then.
  std::optional<double> valid_from_1;
  std::optional<double> valid_from_2;
  std::optional<double> valid_from_4;

  bool valid_1() const { return valid_from_1.has_value(); }
  bool valid_2() const { return valid_from_2.has_value(); }
  bool valid_4() const { return valid_from_4.has_value(); }
};

/// Online reconstruction fed with one observer step at a time.
class FaultReconstructor {
 public:
  FaultReconstructor(const ObserverConfig& cfg, double dt, double filter_tau, int dwell)
      : mu1_(filter_tau, dt), mu2_(filter_tau, dt), rho4_(filter_tau, dt) {
    if (cfg.kind == ObserverKind::fosmo && filter_tau == 0.0) {
      throw std::invalid_argument("FaultReconstructor: relay injection requires filter_tau > 0");
    }
    for (std::size_t i = 0; i < kChannels; ++i) detectors_[i] = SlidingDetector(cfg.epsilon(i), dwell);
  }

  FaultEstimate update(const Injections& inj, double y4, double t, const PlantParams& p) {
    for (std::size_t i = 0; i < kChannels; ++i) detectors_[i].update(inj.sigma[i], t);
    const double eq1 = mu1_.update(inj.mu[kP1]);
    const double eq2 = mu2_.update(inj.mu[kP2]);
    const LeakageEstimate f = reconstruct_faults(eq1, eq2, y4, p);
    FaultEstimate e;
    e.f1_hat = f.f1_hat;
    e.f2_hat = f.f2_hat;
    e.rho4_hat = rho4_.update(cylinder_perturbation(inj.mu_z, inj.mu[kPosition], p));
    e.valid_from_1 = detectors_[kP1].valid_from();
    e.valid_from_2 = detectors_[kP2].valid_from();
    e.valid_from_4 = detectors_[kPosition].valid_from();
    return e;
  }

  const SlidingDetector& detector(std::size_t ch) const { return detectors_[ch]; }

 private:
  LowPass mu1_;
  LowPass mu2_;
  LowPass rho4_;
  std::array<SlidingDetector, kChannels> detectors_{};
};

}  // namespace ehss

#endif  // EHSS_FAULT_RECONSTRUCTION_HPP_
