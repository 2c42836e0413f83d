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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fdra/experiment.hpp"

using namespace fdra;

namespace {

const char* kSmallConfig = R"({
  "cell": {
    "radius_m": 200, "m_count": 2, "n_count": 2, "k_count": 3,
    "bandwidth_hz": 180000, "noise_psd_dbm_hz": -126,
    "si_over_noise_db": 3, "p_bs_dbm": 20, "uue_offset_db": -5, "seed": 1
  },
  "sweep": { "pb_dbm": [15, 20], "trials": 3, "base_seed": 7 },
  "schemes": ["proposed_mapping_equal_power", "greedy"],
  "dual": { "max_iters": 40, "tol": 1e-4, "mapping_mode": "heuristic" }
})";

std::filesystem::path temp_path(const std::string& stem) {
  return std::filesystem::temp_directory_path() /
         (stem + "-" + std::to_string(::getpid()));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char ch : text) n += ch == '\n';
  return n;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = config_from_json_text(kSmallConfig);
  CHECK(c.cell.m_count == 2);
  CHECK(c.cell.k_count == 3);
  CHECK(c.sweep.pb_dbm == std::vector<double>{15.0, 20.0});
  CHECK(c.sweep.trials == 3);
  CHECK(c.sweep.base_seed == 7);
  REQUIRE(c.schemes.size() == 2);
  CHECK(c.schemes[0] == Scheme::proposed_mapping_equal_power);
  CHECK(c.schemes[1] == Scheme::greedy);
  CHECK(c.dual.max_iters == 40);
  CHECK(c.dual.mapping == MappingMode::heuristic);
  CHECK_FALSE(c.dual.step0.has_value());
}

TEST_CASE("config errors name the field") {
  CHECK_THROWS_WITH_AS(config_from_json_text("{}"), doctest::Contains("cell"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      config_from_json_text(R"({"cell": {"radius_m": "wide"}})"),
      doctest::Contains("radius_m"), std::invalid_argument);

  std::string bad = kSmallConfig;
  bad.replace(bad.find("\"trials\": 3"), 11, "\"trials\": 0");
  CHECK_THROWS_WITH_AS(config_from_json_text(bad),
                       doctest::Contains("sweep.trials"),
                       std::invalid_argument);

  std::string unknown_scheme = kSmallConfig;
  unknown_scheme.replace(unknown_scheme.find("\"greedy\""), 8, "\"magic\"");
  CHECK_THROWS_WITH_AS(config_from_json_text(unknown_scheme),
                       doctest::Contains("magic"), std::invalid_argument);

  std::string typo = kSmallConfig;
  typo.replace(typo.find("\"tol\""), 5, "\"tolerance\"");
  CHECK_THROWS_WITH_AS(config_from_json_text(typo),
                       doctest::Contains("tolerance"), std::invalid_argument);

  CHECK_THROWS_AS(config_from_json_text("{]"), std::invalid_argument);
}

TEST_CASE("scheme names round trip") {
  for (Scheme s : {Scheme::proposed_joint, Scheme::proposed_mapping_equal_power,
                   Scheme::exhaustive, Scheme::random, Scheme::greedy}) {
    CHECK(scheme_from_name(scheme_name(s)) == s);
  }
  CHECK_THROWS_AS(scheme_from_name("nope"), std::invalid_argument);
}

TEST_CASE("sweep emits one row per (scheme, budget, trial)") {
  const ExperimentConfig c = config_from_json_text(kSmallConfig);
  const auto out = temp_path("fdra-sweep-small");
  run_sweep(c, out, 1);
  const std::string csv = slurp(out);
  // 2 schemes x 2 budgets x 3 trials = 12 data rows + 1 header.
  CHECK(count_lines(csv) == 13);
  CHECK(csv.starts_with(
      "scheme,pb_dbm,trial,seed,sum_rate_bits_per_s_per_hz,assigned_pairs,"
      "dual_iterations,dual_gap,runtime_ms\n"));
  CHECK(csv.find("proposed_mapping_equal_power,15,0,7,") != std::string::npos);
  CHECK(csv.find("greedy,20,2,9,") != std::string::npos);
  std::filesystem::remove(out);
}

TEST_CASE("sweep output is byte-identical across reruns") {
  const ExperimentConfig c = config_from_json_text(kSmallConfig);
  const auto out1 = temp_path("fdra-sweep-a");
  const auto out2 = temp_path("fdra-sweep-b");
  run_sweep(c, out1, 1);
  run_sweep(c, out2, 2);  // a different worker count must not matter
  CHECK(slurp(out1) == slurp(out2));
  std::filesystem::remove(out1);
  std::filesystem::remove(out2);
}

TEST_CASE("every row is re-derivable from (scheme, seed, pb) alone") {
  const ExperimentConfig c = config_from_json_text(kSmallConfig);
  const TrialResult row =
      run_trial(c, Scheme::proposed_mapping_equal_power, 20.0, 2, false);
  const TrialResult again =
      run_trial(c, Scheme::proposed_mapping_equal_power, 20.0, 2, false);
  CHECK(row.sum_rate == again.sum_rate);
  CHECK(row.seed == again.seed);
  CHECK(row.seed == c.sweep.base_seed + 2);
  CHECK(row.assigned_pairs == 2);
  CHECK(row.runtime_ms == 0.0);
}

TEST_CASE("timing mode fills runtime_ms") {
  const ExperimentConfig c = config_from_json_text(kSmallConfig);
  const TrialResult row = run_trial(c, Scheme::greedy, 20.0, 0, true);
  CHECK(row.runtime_ms > 0.0);
}

TEST_CASE("exhaustive is skipped with a note when the instance is too big") {
  std::string big = kSmallConfig;
  big.replace(big.find("\"m_count\": 2"), 12, "\"m_count\": 8");
  big.replace(big.find("\"n_count\": 2"), 12, "\"n_count\": 8");
  big.replace(big.find("\"k_count\": 3"), 12, "\"k_count\": 8");
  big.replace(big.find("\"schemes\": [\"proposed_mapping_equal_power\", \"greedy\"]"),
              std::string("\"schemes\": [\"proposed_mapping_equal_power\", \"greedy\"]").size(),
              "\"schemes\": [\"exhaustive\", \"greedy\"]");
  const ExperimentConfig c = config_from_json_text(big);
  const auto out = temp_path("fdra-sweep-skip");
  run_sweep(c, out, 1);
  const std::string csv = slurp(out);
  CHECK(csv.find("# exhaustive skipped") != std::string::npos);
  // Only greedy rows remain: 2 budgets x 3 trials + header + note.
  CHECK(count_lines(csv) == 8);
  std::filesystem::remove(out);
}

TEST_CASE("single report prints the allocation and budgets") {
  const ExperimentConfig c = config_from_json_text(kSmallConfig);
  std::ostringstream out;
  run_single(c, Scheme::proposed_joint, std::nullopt, std::nullopt, out);
  const std::string text = out.str();
  CHECK(text.find("scheme: proposed_joint") != std::string::npos);
  CHECK(text.find("sum rate:") != std::string::npos);
  CHECK(text.find("BS power:") != std::string::npos);
  CHECK(text.find("dual: iterations=") != std::string::npos);
  CHECK(text.find("EXCEEDED") == std::string::npos);
}

TEST_CASE("single with exhaustive mapping dominates the heuristic") {
  std::string cfg = kSmallConfig;
  cfg.replace(cfg.find("\"k_count\": 3"), 12, "\"k_count\": 3");
  const ExperimentConfig c = config_from_json_text(cfg);
  auto sum_rate_of = [&](MappingMode mode) {
    std::ostringstream out;
    run_single(c, Scheme::proposed_joint, std::nullopt, mode, out);
    const std::string text = out.str();
    const auto pos = text.find("sum rate: ");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + 10));
  };
  CHECK(sum_rate_of(MappingMode::exhaustive) >=
        sum_rate_of(MappingMode::heuristic) - 1e-9);
}

TEST_CASE("cli binary end to end") {
  const char* cli = std::getenv("FDRA_CLI");
  REQUIRE(cli != nullptr);

  const auto cfg_path = temp_path("fdra-cli-config");
  {
    std::ofstream out(cfg_path);
    out << kSmallConfig;
  }
  const auto csv_path = temp_path("fdra-cli-out");

  std::ostringstream cmd;
  cmd << '"' << cli << '"' << " sweep --config " << cfg_path << " --out "
      << csv_path << " --quiet";
  CHECK(std::system(cmd.str().c_str()) == 0);
  CHECK(count_lines(slurp(csv_path)) == 13);

  std::ostringstream single;
  single << '"' << cli << '"' << " single --config " << cfg_path
         << " --scheme greedy --seed 99 > " << csv_path;
  CHECK(std::system(single.str().c_str()) == 0);
  CHECK(slurp(csv_path).find("seed=99") != std::string::npos);

  std::ostringstream bad;
  bad << '"' << cli << '"' << " sweep --config /nonexistent.json --out "
      << csv_path << " 2>/dev/null";
  CHECK(std::system(bad.str().c_str()) != 0);

  std::filesystem::remove(cfg_path);
  std::filesystem::remove(csv_path);
}
