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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fdra/channel.hpp"
#include "fdra/dual_opt.hpp"
#include "fdra/types.hpp"

namespace fdra {

enum class Scheme {
  proposed_joint,
  proposed_mapping_equal_power,
  exhaustive,
  random,
  greedy,
};

std::string scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

struct SweepSettings {
  std::vector<double> pb_dbm;
  int trials = 100;
  std::uint64_t base_seed = 1;
};

struct ExperimentConfig {
  CellConfig cell;
  SweepSettings sweep;
  std::vector<Scheme> schemes;
  DualOptions dual;
};

/// Parses and validates a JSON experiment config. Throws
/// std::invalid_argument naming the offending field.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json_text(const std::string& text);

/// One CSV row: a single scheme on a single generated scenario.
struct TrialResult {
  Scheme scheme = Scheme::random;
  double pb_dbm = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double sum_rate = 0.0;
  int assigned_pairs = 0;
  int dual_iterations = 0;
  double dual_gap = 0.0;
  double runtime_ms = 0.0;
};

/// Runs one (scheme, budget, trial) cell. The scenario seed is
/// base_seed + trial so all schemes and budget points see the same channel
/// draws of that trial. Measures runtime only when `timing` is set,
/// otherwise reports 0 so outputs are byte-reproducible.
TrialResult run_trial(const ExperimentConfig& config, Scheme scheme,
                      double pb_dbm, int trial, bool timing);

/// Full sweep: every (scheme, budget, trial) cell, written as CSV to
/// out_path via a temp file + atomic rename. Rows are ordered by (scheme
/// position in the config, budget position, trial) regardless of the worker
/// schedule. The exhaustive scheme is skipped with a note line when
/// min(M, N, K) exceeds its cap.
void run_sweep(const ExperimentConfig& config,
               const std::filesystem::path& out_path, int threads,
               bool timing = false);

/// One scenario, one scheme, human-readable report.
void run_single(const ExperimentConfig& config,
                std::optional<Scheme> scheme_override,
                std::optional<std::uint64_t> seed_override,
                std::optional<MappingMode> mapping_override, std::ostream& out);

/// CSV serialization of results (header + rows, LF endings, shortest
/// round-trip decimals).
std::string results_to_csv(const ExperimentConfig& config,
                           const std::vector<TrialResult>& rows,
                           bool note_exhaustive_skipped);

/// Worker cap: FDRA_THREADS when set and positive, else hardware threads.
int thread_cap_from_env();

}  // namespace fdra
