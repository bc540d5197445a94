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

#ifndef EHSS_ANALYSIS_HPP_
#define EHSS_ANALYSIS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>

/// Stability certificates for a super-twisting channel and the error
/// metrics used to compare observers.
namespace ehss {

/// Symmetric 2x2 matrix [[a, b], [b, d]].
struct Sym2 {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;

  double det() const { return a * d - b * b; }
  double trace() const { return a + d; }

  /// Closed-form eigenvalues, ascending.
  std::array<double, 2> eigenvalues() const {
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), b);
    return {mean - radius, mean + radius};
  }

  bool positive_definite() const { return a > 0.0 && det() > 0.0; }

  /// x^T M x.
  double quadratic(double x0, double x1) const { return a * x0 * x0 + 2.0 * b * x0 * x1 + d * x1 * x1; }
};

struct LyapunovCheck {
  Sym2 P;
  Sym2 Omega;
  double lambda_min_P = 0.0;
  double lambda_max_P = 0.0;
  double lambda_min_Omega = 0.0;
  double c1 = 0.0;
  double gamma = 0.0;
  double T_r_bound = std::numeric_limits<double>::infinity();
};

struct LyapunovInputs {
  double L1 = 0.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  // Adaptation rates entering gamma = min{c1, alpha1, alpha2}. Infinite for
  // frozen gains, where only c1 matters.
  double alpha1 = std::numeric_limits<double>::infinity();
  double alpha2 = std::numeric_limits<double>::infinity();
  double V0 = 0.0;
};

/// Builds the quadratic Lyapunov weight P and the decay matrix Omega of a
/// super-twisting channel with L2 = lambda1 * L1, together with the
/// resulting reaching-time bound T_r <= 2 sqrt(V0) / gamma. The bound is
/// infinite when Omega is not positive definite.
inline LyapunovCheck lyapunov_matrices(const LyapunovInputs& in) {
  if (!(in.lambda1 > 0.0) || !(in.lambda2 > 0.0)) {
    throw std::invalid_argument("lyapunov_matrices: lambda1 and lambda2 must be positive");
  }
  const double l1 = in.lambda1;
  const double l2 = in.lambda2;
  const double L2 = l1 * in.L1;
  const double p11 = 4.0 * l1 * l1 + 2.0 * l2;

  LyapunovCheck out;
  out.P = {p11, -2.0 * l1, 1.0};
  const double half_l1 = 0.5 * in.L1 - in.delta1;
  out.Omega = {2.0 * p11 * half_l1 - 4.0 * l1 * (L2 - in.delta2),
               L2 - l2 - in.delta2 - 2.0 * l1 * half_l1 - 2.0 * l1 * l1, 2.0 * l1};

  const auto ep = out.P.eigenvalues();
  out.lambda_min_P = ep[0];
  out.lambda_max_P = ep[1];
  out.lambda_min_Omega = out.Omega.eigenvalues()[0];
  out.c1 = std::sqrt(out.lambda_min_P) / out.lambda_max_P * out.lambda_min_Omega;
  out.gamma = std::min({out.c1, in.alpha1, in.alpha2});
  if (out.gamma > 0.0) out.T_r_bound = 2.0 * std::sqrt(std::max(in.V0, 0.0)) / out.gamma;
  return out;
}

/// Smallest L1 for which Omega is positive definite (L2 = lambda1 * L1).
/// The off-diagonal entry of Omega does not depend on L1, so positive
/// definiteness reduces to Omega11 * Omega22 > Omega12^2, which is linear in L1.
inline double omega_gain_threshold(double lambda1, double lambda2, double delta1, double delta2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw std::invalid_argument("omega_gain_threshold: lambda1 and lambda2 must be positive");
  }
  const double b = 2.0 * lambda1 * (lambda1 - delta1) + lambda2 + delta2;
  const double p11 = 4.0 * lambda1 * lambda1 + 2.0 * lambda2;
  return b * b / (4.0 * lambda1 * lambda2) + (p11 * delta1 - 2.0 * lambda1 * delta2) / lambda2;
}

/// Convenience overload for the T_r formula alone.
inline double reaching_time_bound(double V0, double gamma) {
  if (!(gamma > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * std::sqrt(V0) / gamma;
}

struct ErrorNorms {
  double l1 = 0.0;    // integral of |e|
  double l2 = 0.0;    // sqrt of integral of |e| (tabulated definition)
  double linf = 0.0;  // sup |e| over the window
  double rms = 0.0;   // sqrt(mean e^2), conventional L2-type summary
};

struct TimeWindow {
  double begin = 10.0;
  double end = 30.0;
};

/// Error norms of a uniformly sampled trace. Integrals use the trapezoidal
/// rule over the whole trace; the sup norm is restricted to `window`.
/// Throws std::invalid_argument if no sample falls inside the window.
inline ErrorNorms norms(std::span<const double> t, std::span<const double> e, TimeWindow window) {
  if (t.size() != e.size()) throw std::invalid_argument("norms: trace length mismatch");
  if (t.empty()) throw std::invalid_argument("norms: empty trace");
  ErrorNorms out;
  double sq = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double h = t[k] - t[k - 1];
    out.l1 += 0.5 * h * (std::abs(e[k]) + std::abs(e[k - 1]));
    sq += 0.5 * h * (e[k] * e[k] + e[k - 1] * e[k - 1]);
  }
  out.l2 = std::sqrt(out.l1);
  const double span = t.back() - t.front();
  out.rms = span > 0.0 ? std::sqrt(sq / span) : std::abs(e.front());

  bool any = false;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= window.begin && t[k] <= window.end) {
      out.linf = std::max(out.linf, std::abs(e[k]));
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("norms: no samples inside the sup-norm window");
  return out;
}

/// Total variation per unit time: sum |e_{k+1} - e_k| / (t_N - t_0).
inline double chattering_index(std::span<const double> t, std::span<const double> e) {
  if (t.size() != e.size()) throw std::invalid_argument("chattering_index: trace length mismatch");
  if (t.size() < 2) return 0.0;
  double tv = 0.0;
  for (std::size_t k = 1; k < e.size(); ++k) tv += std::abs(e[k] - e[k - 1]);
  const double duration = t.back() - t.front();
  return duration > 0.0 ? tv / duration : 0.0;
}

/// First time at which |sigma| < epsilon starts to hold for `dwell`
/// consecutive samples; empty if that never happens.
inline std::optional<double> reach_time(std::span<const double> t, std::span<const double> sigma,
                                        double epsilon, int dwell) {
  if (dwell < 1) throw std::invalid_argument("reach_time: dwell must be >= 1");
  if (t.size() != sigma.size()) throw std::invalid_argument("reach_time: trace length mismatch");
  int count = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    count = std::abs(sigma[k]) < epsilon ? count + 1 : 0;
    if (count == dwell) return t[k + 1 - static_cast<std::size_t>(dwell)];
  }
  return std::nullopt;
}

}  // namespace ehss

#endif  // EHSS_ANALYSIS_HPP_
