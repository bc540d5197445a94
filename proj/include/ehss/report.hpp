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

#ifndef EHSS_REPORT_HPP_
#define EHSS_REPORT_HPP_

#include <array>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehss/analysis.hpp"
#include "ehss/simulation.hpp"

namespace ehss {

inline constexpr std::array<const char*, kChannels> kChannelNames = {"P1", "P2", "Ps", "position"};

struct ChannelMetrics {
  ErrorNorms norms;
  double chattering = 0.0;
  std::optional<double> reach_time;  // only when an epsilon is known
};

struct TraceMetrics {
  std::string label;
  TimeWindow window;
  std::array<ChannelMetrics, kChannels> channels{};
};

/// Error metrics of sigma on every channel. `epsilon` enables reach times.
inline TraceMetrics compute_metrics(const std::vector<TraceRecord>& records, TimeWindow window,
                                    const std::optional<std::array<double, kChannels>>& epsilon = {},
                                    int dwell = 1, std::string label = {}) {
  TraceMetrics m;
  m.label = std::move(label);
  m.window = window;
  std::vector<double> t;
  std::vector<double> e;
  t.reserve(records.size());
  e.reserve(records.size());
  for (const auto& r : records) t.push_back(r.t);
  for (std::size_t c = 0; c < kChannels; ++c) {
    e.clear();
    for (const auto& r : records) e.push_back(r.sigma[c]);
    ChannelMetrics& cm = m.channels[c];
    cm.norms = norms(t, e, window);
    cm.chattering = chattering_index(t, e);
    if (epsilon) cm.reach_time = reach_time(t, e, (*epsilon)[c], dwell);
  }
  return m;
}

inline nlohmann::json metrics_to_json(const TraceMetrics& m) {
  nlohmann::json channels = nlohmann::json::object();
  for (std::size_t c = 0; c < kChannels; ++c) {
    const ChannelMetrics& cm = m.channels[c];
    nlohmann::json reach = nullptr;
    if (cm.reach_time) reach = *cm.reach_time;
    channels[kChannelNames[c]] = {{"l1", cm.norms.l1},
                                  {"l2", cm.norms.l2},
                                  {"linf", cm.norms.linf},
                                  {"rms", cm.norms.rms},
                                  {"chattering_index", cm.chattering},
                                  {"reach_time", reach}};
  }
  nlohmann::json j = {{"window", {m.window.begin, m.window.end}}, {"channels", channels}};
  if (!m.label.empty()) j["observer"] = m.label;
  return j;
}

/// Plain-text table of one channel, one row per run:
///   observer | ||e||_1 | ||e||_2 | ||e||_inf | rms | chattering
inline std::string format_channel_table(const std::vector<TraceMetrics>& runs, std::size_t channel) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "Observation error of %s (sup over [%g, %g] s)\n",
                kChannelNames[channel], runs.empty() ? 0.0 : runs.front().window.begin,
                runs.empty() ? 0.0 : runs.front().window.end);
  out += line;
  std::snprintf(line, sizeof line, "%-10s %14s %14s %14s %14s %14s\n", "observer", "||e||_1",
                "||e||_2", "||e||_inf", "rms", "chattering");
  out += line;
  for (const auto& m : runs) {
    const ChannelMetrics& cm = m.channels[channel];
    std::snprintf(line, sizeof line, "%-10s %14.6g %14.6g %14.6g %14.6g %14.6g\n",
                  m.label.empty() ? "-" : m.label.c_str(), cm.norms.l1, cm.norms.l2,
                  cm.norms.linf, cm.norms.rms, cm.chattering);
    out += line;
  }
  return out;
}

}  // namespace ehss

#endif  // EHSS_REPORT_HPP_
