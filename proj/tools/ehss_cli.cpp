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

// Command-line front end: run, compare, check-gains, report.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical abort.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ehss/ehss.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::array<double, ehss::kChannels> epsilons(const ehss::Scenario& sc) {
  std::array<double, ehss::kChannels> e{};
  for (std::size_t i = 0; i < ehss::kChannels; ++i) e[i] = sc.observer.epsilon(i);
  return e;
}

ehss::TimeWindow parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ehss::ConfigError("--window expects BEGIN:END, got '" + s + "'");
  try {
    ehss::TimeWindow w{std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    if (!(w.begin <= w.end)) throw ehss::ConfigError("--window: BEGIN must not exceed END");
    return w;
  } catch (const std::logic_error&) {
    throw ehss::ConfigError("--window expects numbers, got '" + s + "'");
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ehss::ConfigError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ehss::ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

ehss::TraceMetrics simulate_to(const ehss::Scenario& sc, const fs::path& trace_path,
                               ehss::TimeWindow window) {
  const ehss::SimTrace trace = ehss::run_scenario(sc);
  ehss::write_trace(trace_path, trace.records);
  return ehss::compute_metrics(trace.records, window, epsilons(sc), sc.sliding_dwell,
                               std::string(ehss::to_string(sc.observer.kind)));
}

struct RunArgs {
  std::string scenario;
  std::string out;
  std::optional<std::string> observer;
  std::optional<std::uint64_t> seed;
  std::string window = "10:30";
};

int cmd_run(const RunArgs& a) {
  ehss::Scenario sc = ehss::read_scenario(a.scenario);
  if (a.observer) sc.observer.kind = ehss::observer_kind_from_string(*a.observer);
  if (a.seed) sc.seed = *a.seed;
  sc.validate();
  const fs::path out(a.out);
  ensure_dir(out);
  ehss::write_scenario(out / "scenario.json", sc);
  const auto m = simulate_to(sc, out / "trace.csv", parse_window(a.window));
  write_json(out / "metrics.json", ehss::metrics_to_json(m));
  std::cout << ehss::format_channel_table({m}, ehss::kP1) << '\n'
            << ehss::format_channel_table({m}, ehss::kP2);
  return 0;
}

int cmd_compare(const RunArgs& a) {
  const ehss::Scenario base = ehss::read_scenario(a.scenario);
  const fs::path out(a.out);
  ensure_dir(out);
  const ehss::TimeWindow window = parse_window(a.window);
  std::vector<ehss::TraceMetrics> runs;
  nlohmann::json report = nlohmann::json::array();
  for (auto kind : {ehss::ObserverKind::fosmo, ehss::ObserverKind::stw, ehss::ObserverKind::astw}) {
    ehss::Scenario sc = base;
    sc.observer.kind = kind;
    if (a.seed) sc.seed = *a.seed;
    sc.validate();
    const std::string name(ehss::to_string(kind));
    runs.push_back(simulate_to(sc, out / ("trace_" + name + ".csv"), window));
    report.push_back(ehss::metrics_to_json(runs.back()));
  }
  write_json(out / "report.json", report);
  const std::string table = ehss::format_channel_table(runs, ehss::kP1) + "\n" +
                            ehss::format_channel_table(runs, ehss::kP2);
  std::ofstream(out / "report.txt") << table;
  std::cout << table;
  return 0;
}

struct GainArgs {
  double l1 = 0.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

int cmd_check_gains(const GainArgs& g) {
  if (!(g.lambda1 > 0.0) || !(g.lambda2 > 0.0)) {
    throw ehss::ConfigError("--lambda1 and --lambda2 must be positive");
  }
  const auto c = ehss::check_gain_condition(g.l1, g.lambda1, g.lambda2, g.delta1, g.delta2);
  const auto ly = ehss::lyapunov_matrices({.L1 = g.l1,
                                           .lambda1 = g.lambda1,
                                           .lambda2 = g.lambda2,
                                           .delta1 = g.delta1,
                                           .delta2 = g.delta2});
  const nlohmann::json j = {{"satisfied", c.satisfied},
                            {"threshold", c.threshold},
                            {"margin", c.margin},
                            {"omega_positive_definite", ly.Omega.positive_definite()},
                            {"omega_threshold", ehss::omega_gain_threshold(g.lambda1, g.lambda2,
                                                                           g.delta1, g.delta2)},
                            {"lambda_min_omega", ly.lambda_min_Omega},
                            {"lambda_min_P", ly.lambda_min_P},
                            {"lambda_max_P", ly.lambda_max_P},
                            {"c1", ly.c1}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct ReportArgs {
  std::string trace;
  std::string window = "10:30";
  std::optional<std::string> scenario;
  std::vector<double> epsilon;
  int dwell = 1;
  std::optional<std::string> out;
};

int cmd_report(const ReportArgs& a) {
  const auto records = ehss::read_trace(a.trace);
  std::optional<std::array<double, ehss::kChannels>> eps;
  int dwell = a.dwell;
  if (a.scenario) {
    const ehss::Scenario sc = ehss::read_scenario(*a.scenario);
    eps = epsilons(sc);
    dwell = sc.sliding_dwell;
  }
  if (!a.epsilon.empty()) {
    if (a.epsilon.size() != ehss::kChannels) throw ehss::ConfigError("--epsilon expects 4 values");
    eps.emplace();
    std::copy(a.epsilon.begin(), a.epsilon.end(), eps->begin());
  }
  const auto m = ehss::compute_metrics(records, parse_window(a.window), eps, dwell);
  const nlohmann::json j = ehss::metrics_to_json(m);
  if (a.out) {
    write_json(*a.out, j);
  } else {
    std::cout << j.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electro-hydraulic servo simulator with sliding-mode observers"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write trace and metrics");
  run->add_option("--scenario", run_args.scenario, "Scenario JSON file")->required();
  run->add_option("--out", run_args.out, "Output directory")->required();
  run->add_option("--observer", run_args.observer, "astw, stw or fosmo (overrides the scenario)");
  run->add_option("--seed", run_args.seed, "Noise seed (overrides the scenario)");
  run->add_option("--window", run_args.window, "Sup-norm window BEGIN:END in seconds");

  RunArgs cmp_args;
  auto* compare = app.add_subcommand("compare", "Run all three observers on one scenario");
  compare->add_option("--scenario", cmp_args.scenario, "Scenario JSON file")->required();
  compare->add_option("--out", cmp_args.out, "Output directory")->required();
  compare->add_option("--seed", cmp_args.seed, "Noise seed (overrides the scenario)");
  compare->add_option("--window", cmp_args.window, "Sup-norm window BEGIN:END in seconds");

  GainArgs gain_args;
  auto* gains = app.add_subcommand("check-gains", "Evaluate the gain condition and Lyapunov margins");
  gains->add_option("--l1", gain_args.l1, "Gain L1")->required();
  gains->add_option("--lambda1", gain_args.lambda1, "lambda1 > 0")->required();
  gains->add_option("--lambda2", gain_args.lambda2, "lambda2 > 0")->required();
  gains->add_option("--delta1", gain_args.delta1, "First perturbation bound")->required();
  gains->add_option("--delta2", gain_args.delta2, "Second perturbation bound")->required();

  ReportArgs rep_args;
  auto* report = app.add_subcommand("report", "Compute error metrics of a trace CSV");
  report->add_option("--trace", rep_args.trace, "Trace CSV file")->required();
  report->add_option("--window", rep_args.window, "Sup-norm window BEGIN:END in seconds");
  report->add_option("--scenario", rep_args.scenario,
                     "Scenario JSON supplying epsilon and dwell for reach times");
  report->add_option("--epsilon", rep_args.epsilon, "Per-channel epsilon (4 values) for reach times")
      ->expected(4);
  report->add_option("--dwell", rep_args.dwell, "Samples |sigma| < epsilon must hold")
      ->check(CLI::PositiveNumber);
  report->add_option("--out", rep_args.out, "Metrics JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*compare) return cmd_compare(cmp_args);
    if (*gains) return cmd_check_gains(gain_args);
    if (*report) return cmd_report(rep_args);
  } catch (const ehss::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ehss::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ehss::DomainError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
