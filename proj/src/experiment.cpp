// Copyright 2026 The FDRA Authors
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

#include "fdra/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fdra/baselines.hpp"
#include "fdra/mapping3d.hpp"
#include "fdra/parallel.hpp"
#include "fdra/rates.hpp"

namespace fdra {

namespace {

using nlohmann::json;

// Seed offset for the random-mapping scheme so its draws are decoupled from
// the channel draws of the same trial.
constexpr std::uint64_t kRandomSchemeSalt = 0x517cc1b727220a95ULL;
constexpr int kExhaustiveCap = 6;

std::string shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

[[noreturn]] void config_error(const std::string& field,
                               const std::string& what) {
  throw std::invalid_argument("config: field `" + field + "` " + what);
}

const json& require(const json& j, const std::string& path,
                    const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) config_error(path + key, "is missing");
  return *it;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) config_error(field, "must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) config_error(field, "must be an integer");
  return j.get<int>();
}

std::uint64_t as_u64(const json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !j.is_number_integer()) {
    config_error(field, "must be a nonnegative integer");
  }
  if (j.is_number_integer() && j.get<std::int64_t>() < 0) {
    config_error(field, "must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* name : known) ok = ok || it.key() == name;
    if (!ok) config_error(path + it.key(), "is not a recognized field");
  }
}

CellConfig parse_cell(const json& j) {
  if (!j.is_object()) config_error("cell", "must be an object");
  reject_unknown(j, "cell.",
                 {"radius_m", "m_count", "n_count", "k_count", "bandwidth_hz",
                  "noise_psd_dbm_hz", "si_over_noise_db", "p_bs_dbm",
                  "uue_offset_db", "seed", "pathloss_const_db",
                  "pathloss_slope_db", "min_link_distance_m"});
  CellConfig cell;
  cell.radius_m = as_number(require(j, "cell.", "radius_m"), "cell.radius_m");
  cell.m_count = as_int(require(j, "cell.", "m_count"), "cell.m_count");
  cell.n_count = as_int(require(j, "cell.", "n_count"), "cell.n_count");
  cell.k_count = as_int(require(j, "cell.", "k_count"), "cell.k_count");
  cell.bandwidth_hz =
      as_number(require(j, "cell.", "bandwidth_hz"), "cell.bandwidth_hz");
  cell.noise_psd_dbm_hz = as_number(require(j, "cell.", "noise_psd_dbm_hz"),
                                    "cell.noise_psd_dbm_hz");
  cell.si_over_noise_db = as_number(require(j, "cell.", "si_over_noise_db"),
                                    "cell.si_over_noise_db");
  cell.p_bs_dbm = as_number(require(j, "cell.", "p_bs_dbm"), "cell.p_bs_dbm");
  cell.uue_offset_db =
      as_number(require(j, "cell.", "uue_offset_db"), "cell.uue_offset_db");
  cell.seed = as_u64(require(j, "cell.", "seed"), "cell.seed");
  if (j.contains("pathloss_const_db")) {
    cell.pathloss_const_db =
        as_number(j["pathloss_const_db"], "cell.pathloss_const_db");
  }
  if (j.contains("pathloss_slope_db")) {
    cell.pathloss_slope_db =
        as_number(j["pathloss_slope_db"], "cell.pathloss_slope_db");
  }
  if (j.contains("min_link_distance_m")) {
    cell.min_link_distance_m =
        as_number(j["min_link_distance_m"], "cell.min_link_distance_m");
  }
  try {
    cell.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cell;
}

SweepSettings parse_sweep(const json& j) {
  if (!j.is_object()) config_error("sweep", "must be an object");
  reject_unknown(j, "sweep.", {"pb_dbm", "trials", "base_seed"});
  SweepSettings sweep;
  const json& grid = require(j, "sweep.", "pb_dbm");
  if (!grid.is_array() || grid.empty()) {
    config_error("sweep.pb_dbm", "must be a non-empty array of numbers");
  }
  for (const json& v : grid) {
    sweep.pb_dbm.push_back(as_number(v, "sweep.pb_dbm"));
  }
  sweep.trials = as_int(require(j, "sweep.", "trials"), "sweep.trials");
  if (sweep.trials < 1) config_error("sweep.trials", "must be >= 1");
  sweep.base_seed =
      as_u64(require(j, "sweep.", "base_seed"), "sweep.base_seed");
  return sweep;
}

DualOptions parse_dual(const json& j) {
  if (!j.is_object()) config_error("dual", "must be an object");
  reject_unknown(j, "dual.", {"max_iters", "tol", "step0", "mapping_mode"});
  DualOptions dual;
  if (j.contains("max_iters")) {
    dual.max_iters = as_int(j["max_iters"], "dual.max_iters");
    if (dual.max_iters < 1) config_error("dual.max_iters", "must be >= 1");
  }
  if (j.contains("tol")) {
    dual.tolerance = as_number(j["tol"], "dual.tol");
    if (!(dual.tolerance > 0.0)) config_error("dual.tol", "must be > 0");
  }
  if (j.contains("step0") && !j["step0"].is_null()) {
    dual.step0 = as_number(j["step0"], "dual.step0");
    if (!(*dual.step0 > 0.0)) config_error("dual.step0", "must be > 0");
  }
  if (j.contains("mapping_mode")) {
    const json& mode = j["mapping_mode"];
    if (!mode.is_string()) config_error("dual.mapping_mode", "must be a string");
    const std::string name = mode.get<std::string>();
    if (name == "heuristic") {
      dual.mapping = MappingMode::heuristic;
    } else if (name == "exhaustive") {
      dual.mapping = MappingMode::exhaustive;
    } else {
      config_error("dual.mapping_mode",
                   "must be \"heuristic\" or \"exhaustive\"");
    }
  }
  return dual;
}

}  // namespace

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::proposed_joint: return "proposed_joint";
    case Scheme::proposed_mapping_equal_power:
      return "proposed_mapping_equal_power";
    case Scheme::exhaustive: return "exhaustive";
    case Scheme::random: return "random";
    case Scheme::greedy: return "greedy";
  }
  throw std::logic_error("scheme_name: unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
  for (Scheme s : {Scheme::proposed_joint, Scheme::proposed_mapping_equal_power,
                   Scheme::exhaustive, Scheme::random, Scheme::greedy}) {
    if (scheme_name(s) == name) return s;
  }
  throw std::invalid_argument("config: unknown scheme `" + name + "`");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }
  reject_unknown(j, "", {"cell", "sweep", "schemes", "dual"});

  ExperimentConfig config;
  config.cell = parse_cell(require(j, "", "cell"));
  config.sweep = parse_sweep(require(j, "", "sweep"));

  const json& schemes = require(j, "", "schemes");
  if (!schemes.is_array() || schemes.empty()) {
    config_error("schemes", "must be a non-empty array of scheme names");
  }
  for (const json& s : schemes) {
    if (!s.is_string()) config_error("schemes", "entries must be strings");
    config.schemes.push_back(scheme_from_name(s.get<std::string>()));
  }

  if (j.contains("dual")) {
    config.dual = parse_dual(j["dual"]);
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

TrialResult run_trial(const ExperimentConfig& config, Scheme scheme,
                      double pb_dbm, int trial, bool timing) {
  const auto start = std::chrono::steady_clock::now();

  CellConfig cell = config.cell;
  cell.p_bs_dbm = pb_dbm;
  cell.seed = config.sweep.base_seed + static_cast<std::uint64_t>(trial);
  const Scenario scenario = generate_scenario(cell).scenario;

  TrialResult row;
  row.scheme = scheme;
  row.pb_dbm = pb_dbm;
  row.trial = trial;
  row.seed = cell.seed;

  switch (scheme) {
    case Scheme::proposed_joint: {
      const AllocationResult result = solve_joint(scenario, config.dual);
      row.sum_rate = result.sum_rate;
      row.assigned_pairs = result.assignment.size();
      row.dual_iterations = result.diagnostics.iterations;
      row.dual_gap = result.diagnostics.dual_gap;
      break;
    }
    case Scheme::proposed_mapping_equal_power: {
      const Assignment3D mapping =
          optimize_3d(equal_power_rate_tensor(scenario));
      row.sum_rate =
          total_rate(scenario, mapping, equal_power(scenario, mapping));
      row.assigned_pairs = mapping.size();
      break;
    }
    case Scheme::exhaustive: {
      const AllocationResult result = exhaustive_search(scenario, equal_power);
      row.sum_rate = result.sum_rate;
      row.assigned_pairs = result.assignment.size();
      break;
    }
    case Scheme::random: {
      const Assignment3D mapping =
          random_mapping(scenario, cell.seed ^ kRandomSchemeSalt);
      row.sum_rate =
          total_rate(scenario, mapping, equal_power(scenario, mapping));
      row.assigned_pairs = mapping.size();
      break;
    }
    case Scheme::greedy: {
      const Assignment3D mapping =
          greedy_mapping(scenario, equal_power_rule());
      row.sum_rate =
          total_rate(scenario, mapping, equal_power(scenario, mapping));
      row.assigned_pairs = mapping.size();
      break;
    }
  }

  if (timing) {
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  }
  return row;
}

std::string results_to_csv(const ExperimentConfig& config,
                           const std::vector<TrialResult>& rows,
                           bool note_exhaustive_skipped) {
  std::ostringstream out;
  out << "scheme,pb_dbm,trial,seed,sum_rate_bits_per_s_per_hz,assigned_pairs,"
         "dual_iterations,dual_gap,runtime_ms\n";
  if (note_exhaustive_skipped) {
    out << "# exhaustive skipped: min(M,N,K) = "
        << std::min(config.cell.m_count,
                    std::min(config.cell.n_count, config.cell.k_count))
        << " exceeds the cap of " << kExhaustiveCap << "\n";
  }
  for (const TrialResult& r : rows) {
    out << scheme_name(r.scheme) << ',' << shortest(r.pb_dbm) << ',' << r.trial
        << ',' << r.seed << ',' << shortest(r.sum_rate) << ','
        << r.assigned_pairs << ',' << r.dual_iterations << ','
        << shortest(r.dual_gap) << ',' << shortest(r.runtime_ms) << '\n';
  }
  return out.str();
}

void run_sweep(const ExperimentConfig& config,
               const std::filesystem::path& out_path, int threads,
               bool timing) {
  const int min_dim = std::min(config.cell.m_count,
                               std::min(config.cell.n_count,
                                        config.cell.k_count));
  const bool skip_exhaustive = min_dim > kExhaustiveCap;

  std::vector<Scheme> schemes;
  bool exhaustive_requested = false;
  for (Scheme s : config.schemes) {
    if (s == Scheme::exhaustive && skip_exhaustive) {
      exhaustive_requested = true;
      continue;
    }
    schemes.push_back(s);
  }

  struct Task {
    Scheme scheme;
    double pb_dbm;
    int trial;
  };
  std::vector<Task> tasks;
  for (Scheme scheme : schemes) {
    for (double pb : config.sweep.pb_dbm) {
      for (int trial = 0; trial < config.sweep.trials; ++trial) {
        tasks.push_back({scheme, pb, trial});
      }
    }
  }

  std::vector<TrialResult> rows(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), threads, [&](int i) {
    rows[i] = run_trial(config, tasks[i].scheme, tasks[i].pb_dbm,
                        tasks[i].trial, timing);
  });

  const std::string csv =
      results_to_csv(config, rows, exhaustive_requested && skip_exhaustive);

  std::filesystem::path tmp = out_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("run_sweep: cannot open " + tmp.string());
    }
    out << csv;
    if (!out) {
      throw std::runtime_error("run_sweep: write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, out_path);
}

void run_single(const ExperimentConfig& config,
                std::optional<Scheme> scheme_override,
                std::optional<std::uint64_t> seed_override,
                std::optional<MappingMode> mapping_override,
                std::ostream& out) {
  if (config.schemes.empty() && !scheme_override) {
    throw std::invalid_argument("config: field `schemes` is empty");
  }
  const Scheme scheme = scheme_override.value_or(config.schemes.front());

  CellConfig cell = config.cell;
  if (seed_override) cell.seed = *seed_override;
  const Scenario scenario = generate_scenario(cell).scenario;

  DualOptions dual = config.dual;
  if (mapping_override) dual.mapping = *mapping_override;

  AllocationResult result;
  switch (scheme) {
    case Scheme::proposed_joint:
      result = solve_joint(scenario, dual);
      break;
    case Scheme::proposed_mapping_equal_power: {
      result.assignment = optimize_3d(equal_power_rate_tensor(scenario));
      result.powers = equal_power(scenario, result.assignment);
      break;
    }
    case Scheme::exhaustive:
      result = exhaustive_search(scenario, equal_power);
      break;
    case Scheme::random:
      result.assignment = random_mapping(scenario, cell.seed ^ kRandomSchemeSalt);
      result.powers = equal_power(scenario, result.assignment);
      break;
    case Scheme::greedy:
      result.assignment = greedy_mapping(scenario, equal_power_rule());
      result.powers = equal_power(scenario, result.assignment);
      break;
  }
  if (result.per_pair_rate.empty()) {
    result.sum_rate = 0.0;
    for (const Triple& t : result.assignment.triples()) {
      result.per_pair_rate[t] = pair_rate(scenario, t, result.powers.at(t));
      result.sum_rate += result.per_pair_rate[t];
    }
  }

  out << "scenario: M=" << scenario.m_count << " N=" << scenario.n_count
      << " K=" << scenario.k_count << " seed=" << cell.seed
      << " P_b=" << shortest(cell.p_bs_dbm) << " dBm\n";
  out << "scheme: " << scheme_name(scheme) << "\n\n";
  out << "   m    n    k        p_up (W)      p_down (W)   rate (b/s/Hz)\n";
  for (const Triple& t : result.assignment.triples()) {
    const PairPowers p = result.powers.at(t);
    out << std::setw(4) << t.m << ' ' << std::setw(4) << t.n << ' '
        << std::setw(4) << t.k << "  " << std::setw(14)
        << shortest(p.p_up) << "  " << std::setw(14) << shortest(p.p_down)
        << "  " << std::setw(14) << shortest(result.per_pair_rate.at(t))
        << '\n';
  }
  out << "\nsum rate: " << shortest(result.sum_rate) << " bits/s/Hz\n";

  const BudgetReport budgets =
      check_budgets(scenario, result.assignment, result.powers);
  out << "BS power: " << shortest(budgets.bs.consumed) << " / "
      << shortest(budgets.bs.budget) << " W"
      << (budgets.bs.satisfied ? "" : "  (EXCEEDED)") << '\n';
  for (int m = 0; m < scenario.m_count; ++m) {
    out << "UUE " << m << " power: " << shortest(budgets.uue[m].consumed)
        << " / " << shortest(budgets.uue[m].budget) << " W"
        << (budgets.uue[m].satisfied ? "" : "  (EXCEEDED)") << '\n';
  }
  if (scheme == Scheme::proposed_joint) {
    out << "dual: iterations=" << result.diagnostics.iterations
        << " gap=" << shortest(result.diagnostics.dual_gap) << " bits/s/Hz\n";
  }
}

int thread_cap_from_env() {
  if (const char* env = std::getenv("FDRA_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace fdra
