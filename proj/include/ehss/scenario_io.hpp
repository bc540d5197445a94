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

#ifndef EHSS_SCENARIO_IO_HPP_
#define EHSS_SCENARIO_IO_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ehss/errors.hpp"
#include "ehss/simulation.hpp"

// Scenario files are JSON objects. Every key is optional and falls back to
// the built-in default; unknown keys are rejected with their dotted path.
namespace ehss {

namespace detail {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  std::string child(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    auto it = j_.find(std::string(key));
    if (it == j_.end()) return nullptr;
    seen_.insert(std::string(key));
    return &*it;
  }

  void number(std::string_view key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(child(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  void integer(std::string_view key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(child(key) + ": expected an integer");
      out = v->get<int>();
    }
  }

  void unsigned_integer(std::string_view key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) {
        throw ConfigError(child(key) + ": expected a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  template <std::size_t N>
  void numbers(std::string_view key, std::array<double, N>& out) {
    if (const json* v = find(key)) out = number_array<N>(*v, child(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + child(key) + "'");
    }
  }

  template <std::size_t N>
  static std::array<double, N> number_array(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != N) {
      throw ConfigError(path + ": expected an array of " + std::to_string(N) + " numbers");
    }
    std::array<double, N> a{};
    for (std::size_t i = 0; i < N; ++i) {
      if (!v[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]: expected a number");
      a[i] = v[i].get<double>();
    }
    return a;
  }

 private:
  std::string where() const { return path_.empty() ? "scenario" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void read_plant(const json& j, const std::string& path, PlantParams& p) {
  StrictObject o(j, path);
  o.number("tau_v", p.tau_v);
  o.number("K_v", p.K_v);
  o.number("tau_s", p.tau_s);
  o.number("K_r", p.K_r);
  o.number("beta", p.beta);
  o.number("rho", p.rho);
  o.number("C_d", p.C_d);
  o.number("w", p.w);
  o.number("d1", p.d1);
  o.number("d2", p.d2);
  o.number("V01", p.V01);
  o.number("V02", p.V02);
  o.number("m", p.m);
  o.number("c", p.c);
  o.number("P_T", p.P_T);
  o.number("stroke", p.stroke);
  o.number("P_s_max", p.P_s_max);
  o.finish();
}

inline ordered write_plant(const PlantParams& p) {
  return {{"tau_v", p.tau_v}, {"K_v", p.K_v},   {"tau_s", p.tau_s},   {"K_r", p.K_r},
          {"beta", p.beta},   {"rho", p.rho},   {"C_d", p.C_d},       {"w", p.w},
          {"d1", p.d1},       {"d2", p.d2},     {"V01", p.V01},       {"V02", p.V02},
          {"m", p.m},         {"c", p.c},       {"P_T", p.P_T},       {"stroke", p.stroke},
          {"P_s_max", p.P_s_max}};
}

inline void read_state(const json& j, const std::string& path, PlantState& s) {
  StrictObject o(j, path);
  o.number("spool", s.spool);
  o.number("p1", s.p1);
  o.number("p2", s.p2);
  o.number("ps", s.ps);
  o.number("position", s.position);
  o.number("velocity", s.velocity);
  o.finish();
}

inline ordered write_state(const PlantState& s) {
  return {{"spool", s.spool}, {"p1", s.p1},           {"p2", s.p2},
          {"ps", s.ps},       {"position", s.position}, {"velocity", s.velocity}};
}

inline void read_astw(const json& j, const std::string& path, AstwCellParams& p) {
  StrictObject o(j, path);
  o.number("alpha1", p.alpha1);
  o.number("Gamma1", p.Gamma1);
  o.number("epsilon", p.epsilon);
  o.number("lambda1", p.lambda1);
  o.number("lambda2", p.lambda2);
  o.number("L_floor", p.L_floor);
  o.number("L_ramp", p.L_ramp);
  o.number("L1_init", p.L1_init);
  o.finish();
}

inline ordered write_astw(const AstwCellParams& p) {
  return {{"alpha1", p.alpha1},   {"Gamma1", p.Gamma1},   {"epsilon", p.epsilon},
          {"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"L_floor", p.L_floor},
          {"L_ramp", p.L_ramp},   {"L1_init", p.L1_init}};
}

inline void read_observer(const json& j, const std::string& path, ObserverConfig& cfg) {
  StrictObject o(j, path);
  if (const json* k = o.find("kind")) {
    if (!k->is_string()) throw ConfigError(o.child("kind") + ": expected a string");
    try {
      cfg.kind = observer_kind_from_string(k->get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(o.child("kind") + ": " + e.what());
    }
  }
  if (const json* ch = o.find("channels")) {
    const std::string cpath = o.child("channels");
    if (!ch->is_array() || ch->size() != kChannels) {
      throw ConfigError(cpath + ": expected an array of " + std::to_string(kChannels) + " objects");
    }
    for (std::size_t i = 0; i < kChannels; ++i) {
      const std::string ip = cpath + "[" + std::to_string(i) + "]";
      StrictObject c((*ch)[i], ip);
      if (const json* a = c.find("astw")) read_astw(*a, c.child("astw"), cfg.astw[i]);
      if (const json* s = c.find("stw")) {
        StrictObject so(*s, c.child("stw"));
        so.number("L1", cfg.stw[i].L1);
        so.number("L2", cfg.stw[i].L2);
        so.finish();
      }
      if (const json* f = c.find("fosmo")) {
        StrictObject fo(*f, c.child("fosmo"));
        fo.number("rho", cfg.fosmo[i].rho);
        fo.number("rho_z", cfg.fosmo[i].rho_z);
        fo.finish();
      }
      c.finish();
    }
  }
  if (const json* init = o.find("initial")) {
    StrictObject io(*init, o.child("initial"));
    io.number("z1", cfg.initial.z1);
    io.number("z2", cfg.initial.z2);
    if (const json* y = io.find("y")) {
      if (y->is_null()) {
        cfg.initial.y.reset();
      } else {
        cfg.initial.y = StrictObject::number_array<kChannels>(*y, io.child("y"));
      }
    }
    io.finish();
  }
  o.finish();
}

inline ordered write_observer(const ObserverConfig& cfg) {
  ordered channels = ordered::array();
  for (std::size_t i = 0; i < kChannels; ++i) {
    channels.push_back({{"astw", write_astw(cfg.astw[i])},
                        {"stw", {{"L1", cfg.stw[i].L1}, {"L2", cfg.stw[i].L2}}},
                        {"fosmo", {{"rho", cfg.fosmo[i].rho}, {"rho_z", cfg.fosmo[i].rho_z}}}});
  }
  ordered initial = {{"z1", cfg.initial.z1}, {"z2", cfg.initial.z2}, {"y", nullptr}};
  if (cfg.initial.y) initial["y"] = *cfg.initial.y;
  return {{"kind", std::string(to_string(cfg.kind))}, {"channels", channels}, {"initial", initial}};
}

inline void read_pi(const json& j, const std::string& path, PiGains& g) {
  StrictObject o(j, path);
  o.number("kp", g.kp);
  o.number("ki", g.ki);
  o.finish();
}

inline void read_controller(const json& j, const std::string& path, ControllerGains& g) {
  StrictObject o(j, path);
  if (const json* v = o.find("position")) read_pi(*v, o.child("position"), g.position);
  if (const json* v = o.find("pressure")) read_pi(*v, o.child("pressure"), g.pressure);
  o.number("position_integrator_init", g.position_integrator_init);
  o.number("pressure_integrator_init", g.pressure_integrator_init);
  o.finish();
}

inline ordered write_controller(const ControllerGains& g) {
  return {{"position", {{"kp", g.position.kp}, {"ki", g.position.ki}}},
          {"pressure", {{"kp", g.pressure.kp}, {"ki", g.pressure.ki}}},
          {"position_integrator_init", g.position_integrator_init},
          {"pressure_integrator_init", g.pressure_integrator_init}};
}

inline void read_reference(const json& j, const std::string& path, Reference& r) {
  StrictObject o(j, path);
  o.number("offset", r.offset);
  o.number("amplitude", r.amplitude);
  o.number("frequency", r.frequency);
  o.number("supply_pressure", r.supply_pressure);
  o.finish();
}

inline ordered write_reference(const Reference& r) {
  return {{"offset", r.offset},
          {"amplitude", r.amplitude},
          {"frequency", r.frequency},
          {"supply_pressure", r.supply_pressure}};
}

inline void read_fault(const json& j, const std::string& path, FaultEvent& ev) {
  StrictObject o(j, path);
  o.number("t_start", ev.t_start);
  o.number("t_end", ev.t_end);
  o.number("C_i", ev.delta.C_i);
  o.number("C_e1", ev.delta.C_e1);
  o.number("C_e2", ev.delta.C_e2);
  o.number("f_d", ev.delta.f_d);
  o.number("Delta", ev.delta.Delta);
  o.finish();
}

inline ordered write_fault(const FaultEvent& ev) {
  return {{"t_start", ev.t_start},   {"t_end", ev.t_end}, {"C_i", ev.delta.C_i},
          {"C_e1", ev.delta.C_e1},   {"C_e2", ev.delta.C_e2}, {"f_d", ev.delta.f_d},
          {"Delta", ev.delta.Delta}};
}

inline void read_disturbance(const json& j, const std::string& path, Disturbance& d) {
  StrictObject o(j, path);
  o.number("f_d_amplitude", d.f_d_amplitude);
  o.number("f_d_frequency", d.f_d_frequency);
  o.number("Delta_amplitude", d.Delta_amplitude);
  o.number("Delta_frequency", d.Delta_frequency);
  o.finish();
}

inline ordered write_disturbance(const Disturbance& d) {
  return {{"f_d_amplitude", d.f_d_amplitude},
          {"f_d_frequency", d.f_d_frequency},
          {"Delta_amplitude", d.Delta_amplitude},
          {"Delta_frequency", d.Delta_frequency}};
}

}  // namespace detail

/// Builds a scenario from a parsed JSON document. Does not validate.
inline Scenario scenario_from_json(const nlohmann::json& j) {
  using detail::json;
  Scenario sc;
  detail::StrictObject o(j, "");
  o.number("duration", sc.duration);
  o.number("dt", sc.dt);
  o.integer("plant_substeps", sc.plant_substeps);
  o.unsigned_integer("seed", sc.seed);
  o.number("filter_tau", sc.filter_tau);
  o.integer("sliding_dwell", sc.sliding_dwell);
  o.numbers("noise_std", sc.noise_std);
  if (const json* v = o.find("plant")) detail::read_plant(*v, "plant", sc.plant);
  // Without an explicit initial state the rig starts at rest for the
  // (possibly overridden) plant parameters.
  sc.initial_state = rest_state(sc.plant);
  if (const json* v = o.find("initial_state")) detail::read_state(*v, "initial_state", sc.initial_state);
  if (const json* v = o.find("observer")) detail::read_observer(*v, "observer", sc.observer);
  if (const json* v = o.find("controller")) detail::read_controller(*v, "controller", sc.controller);
  if (const json* v = o.find("reference")) detail::read_reference(*v, "reference", sc.reference);
  if (const json* v = o.find("disturbance")) detail::read_disturbance(*v, "disturbance", sc.disturbance);
  if (const json* v = o.find("faults")) {
    if (!v->is_array()) throw ConfigError("faults: expected an array");
    sc.faults.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      FaultEvent ev;
      detail::read_fault((*v)[i], "faults[" + std::to_string(i) + "]", ev);
      sc.faults.push_back(ev);
    }
  }
  o.finish();
  return sc;
}

/// Complete JSON form of a scenario; every field is written.
inline nlohmann::ordered_json scenario_to_json(const Scenario& sc) {
  nlohmann::ordered_json faults = nlohmann::ordered_json::array();
  for (const auto& ev : sc.faults) faults.push_back(detail::write_fault(ev));
  return {{"duration", sc.duration},
          {"dt", sc.dt},
          {"plant_substeps", sc.plant_substeps},
          {"seed", sc.seed},
          {"filter_tau", sc.filter_tau},
          {"sliding_dwell", sc.sliding_dwell},
          {"noise_std", sc.noise_std},
          {"plant", detail::write_plant(sc.plant)},
          {"initial_state", detail::write_state(sc.initial_state)},
          {"observer", detail::write_observer(sc.observer)},
          {"controller", detail::write_controller(sc.controller)},
          {"reference", detail::write_reference(sc.reference)},
          {"faults", faults},
          {"disturbance", detail::write_disturbance(sc.disturbance)}};
}

/// Parses and validates scenario text. Syntax errors report line and column.
inline Scenario parse_scenario(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
  Scenario sc = scenario_from_json(j);
  sc.validate();
  return sc;
}

inline std::string dump_scenario(const Scenario& sc) { return scenario_to_json(sc).dump(2) + "\n"; }

inline Scenario read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline void write_scenario(const std::filesystem::path& path, const Scenario& sc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write scenario file '" + path.string() + "'");
  out << dump_scenario(sc);
}

}  // namespace ehss

#endif  // EHSS_SCENARIO_IO_HPP_
