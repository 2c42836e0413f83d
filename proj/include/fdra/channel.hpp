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

#include "fdra/types.hpp"

namespace fdra {

/// Cell-level generation parameters. Budgets and noise are configured in dB
/// units here and converted to linear watts when the Scenario is built.
struct CellConfig {
  double radius_m = 200.0;
  int m_count = 8;
  int n_count = 8;
  int k_count = 64;
  double bandwidth_hz = 180e3;
  double noise_psd_dbm_hz = -126.0;
  double si_over_noise_db = 3.0;   ///< self-interference power over noise
  double p_bs_dbm = 20.0;          ///< BS budget
  double uue_offset_db = -5.0;     ///< per-UUE budget relative to BS budget
  std::uint64_t seed = 1;

  // Distance-dependent loss in dB: pathloss_const_db +
  // pathloss_slope_db * log10(d_km), with d floored at min_link_distance_m.
  double pathloss_const_db = 128.1;
  double pathloss_slope_db = 37.6;
  double min_link_distance_m = 10.0;

  void validate() const;
};

/// Planar user positions in meters, base station at the origin.
struct UserLayout {
  Eigen::MatrixX2d uue_pos;
  Eigen::MatrixX2d due_pos;
};

struct GeneratedScenario {
  Scenario scenario;
  UserLayout layout;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Thermal noise in one subchannel of width bandwidth_hz / k_count, watts.
double noise_power_per_subchannel(const CellConfig& config);

/// Linear power gain of a link of the given length under the configured
/// distance law (no fading).
double pathloss_gain(const CellConfig& config, double distance_m);

/// Draws a random problem instance. Users are placed uniformly in the disk;
/// each link gain is the path-loss gain times an i.i.d. unit-mean exponential
/// per-subchannel fade (Rayleigh amplitude). Deterministic in config.seed;
/// draw order is: UUE positions, DUE positions, then fades for gain_up
/// (m-major, then k), gain_down (n-major), gain_cross (m, n, k).
GeneratedScenario generate_scenario(const CellConfig& config);

/// JSON scenario files round-trip exactly: load(save(s)) == s.
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

/// Parses the scenario fields from an already-loaded JSON text.
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& scenario);

}  // namespace fdra
