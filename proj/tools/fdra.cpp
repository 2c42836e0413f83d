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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fdra/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string scheme;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex OFDMA resource-allocation experiments"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string out_path;
  bool timing = false;
  std::string mapping;

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run every configured (scheme, budget, trial) cell to a CSV");
  sweep->add_option("--config", args.config_path, "Experiment config JSON")
      ->required();
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep->add_option("--scheme", args.scheme,
                    "Run only this scheme (overrides the config list)");
  sweep->add_flag("--timing", timing,
                  "Record wall-clock runtime_ms per row (off by default so "
                  "reruns are byte-identical)");
  sweep->add_flag("--quiet", args.quiet, "Suppress progress output");

  CLI::App* single = app.add_subcommand(
      "single", "Solve one scenario with one scheme and print a report");
  single->add_option("--config", args.config_path, "Experiment config JSON")
      ->required();
  single->add_option("--scheme", args.scheme,
                     "Scheme to run (default: first configured)");
  single
      ->add_option("--seed", args.seed, "Scenario seed (default: cell.seed)")
      ->each([&](const std::string&) { args.seed_set = true; });
  single->add_option("--mapping", mapping,
                     "Mapping mode inside the dual loop: heuristic|exhaustive");
  single->add_flag("--quiet", args.quiet, "Suppress progress output");

  CLI11_PARSE(app, argc, argv);

  try {
    fdra::ExperimentConfig config = fdra::load_config(args.config_path);

    std::optional<fdra::Scheme> scheme_override;
    if (!args.scheme.empty()) {
      scheme_override = fdra::scheme_from_name(args.scheme);
    }

    if (sweep->parsed()) {
      if (scheme_override) {
        config.schemes = {*scheme_override};
      }
      const int threads = fdra::thread_cap_from_env();
      if (!args.quiet) {
        std::cerr << "sweep: " << config.schemes.size() << " scheme(s) x "
                  << config.sweep.pb_dbm.size() << " budget(s) x "
                  << config.sweep.trials << " trial(s), " << threads
                  << " worker(s)\n";
      }
      fdra::run_sweep(config, out_path, threads, timing);
      if (!args.quiet) {
        std::cerr << "sweep: wrote " << out_path << "\n";
      }
    } else {
      std::optional<fdra::MappingMode> mapping_override;
      if (!mapping.empty()) {
        if (mapping == "heuristic") {
          mapping_override = fdra::MappingMode::heuristic;
        } else if (mapping == "exhaustive") {
          mapping_override = fdra::MappingMode::exhaustive;
        } else {
          throw std::invalid_argument(
              "--mapping must be `heuristic` or `exhaustive`");
        }
      }
      std::optional<std::uint64_t> seed_override;
      if (args.seed_set) seed_override = args.seed;
      fdra::run_single(config, scheme_override, seed_override,
                       mapping_override, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
