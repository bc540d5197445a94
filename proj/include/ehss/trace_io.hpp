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

#ifndef EHSS_TRACE_IO_HPP_
#define EHSS_TRACE_IO_HPP_

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ehss/errors.hpp"
#include "ehss/simulation.hpp"

namespace ehss {

/// Calls f(name, field) for every scalar of a TraceRecord, in declaration
/// order. Works for const and mutable records.
template <class Record, class F>
void visit_trace_fields(Record& r, F&& f) {
  static constexpr const char* kIdx[] = {"1", "2", "3", "4"};
  auto each = [&](const char* stem, const char* suffix, auto& arr) {
    for (std::size_t i = 0; i < arr.size(); ++i) f(std::string(stem) + kIdx[i] + suffix, arr[i]);
  };
  f(std::string("t"), r.t);
  f(std::string("x_spool"), r.x.spool);
  f(std::string("x_p1"), r.x.p1);
  f(std::string("x_p2"), r.x.p2);
  f(std::string("x_ps"), r.x.ps);
  f(std::string("x_position"), r.x.position);
  f(std::string("x_velocity"), r.x.velocity);
  each("y", "", r.y);
  f(std::string("z1_hat"), r.z1_hat);
  each("y", "_hat", r.y_hat);
  f(std::string("z2_hat"), r.z2_hat);
  each("sigma", "", r.sigma);
  each("mu", "", r.mu);
  each("L1_", "", r.L1);
  each("L2_", "", r.L2);
  f(std::string("ql1"), r.ql1);
  f(std::string("ql2"), r.ql2);
  f(std::string("f_d"), r.f_d);
  f(std::string("f1_hat"), r.f1_hat);
  f(std::string("f2_hat"), r.f2_hat);
  f(std::string("rho4_hat"), r.rho4_hat);
  f(std::string("u1"), r.u1);
  f(std::string("u2"), r.u2);
}

inline std::vector<std::string> trace_columns() {
  std::vector<std::string> names;
  const TraceRecord r;
  visit_trace_fields(r, [&](const std::string& n, const double&) { names.push_back(n); });
  return names;
}

inline std::string trace_header() {
  std::string h;
  for (const auto& n : trace_columns()) h += (h.empty() ? "" : ",") + n;
  return h;
}

/// Writes a header row and one row per record, 17 significant digits.
inline void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
  out << trace_header() << '\n';
  char buf[32];
  std::string line;
  for (const auto& r : records) {
    line.clear();
    visit_trace_fields(r, [&](const std::string&, const double& v) {
      if (!line.empty()) line += ',';
      std::snprintf(buf, sizeof buf, "%.17g", v);
      line += buf;
    });
    out << line << '\n';
  }
  if (!out) throw ConfigError("write_trace: output stream failure");
}

inline void write_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write trace file '" + path.string() + "'");
  write_trace(out, records);
}

/// Reads a trace written by write_trace. The header must match exactly.
inline std::vector<TraceRecord> read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != trace_header()) throw ConfigError("trace line 1: header does not match the trace schema");

  std::vector<TraceRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    TraceRecord r;
    std::size_t pos = 0;
    bool first = true;
    visit_trace_fields(r, [&](const std::string& name, double& v) {
      if (!first) {
        if (pos >= line.size() || line[pos] != ',') {
          throw ConfigError("trace line " + std::to_string(lineno) + ": missing column '" + name + "'");
        }
        ++pos;
      }
      first = false;
      const char* begin = line.data() + pos;
      const char* end = line.data() + line.size();
      const auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc()) {
        throw ConfigError("trace line " + std::to_string(lineno) + ": bad value in column '" + name + "'");
      }
      pos = static_cast<std::size_t>(ptr - line.data());
    });
    if (pos != line.size()) {
      throw ConfigError("trace line " + std::to_string(lineno) + ": trailing columns");
    }
    records.push_back(r);
  }
  return records;
}

inline std::vector<TraceRecord> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file '" + path.string() + "'");
  try {
    return read_trace(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace ehss

#endif  // EHSS_TRACE_IO_HPP_
