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

#include "fdra/channel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "fdra/rng.hpp"

namespace fdra {

namespace {

using nlohmann::json;

Eigen::Vector2d draw_disk_point(SeededRng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform01());
  const double theta = 2.0 * std::numbers::pi * rng.uniform01();
  return {r * std::cos(theta), r * std::sin(theta)};
}

double link_gain(const CellConfig& config, const Eigen::Vector2d& a,
                 const Eigen::Vector2d& b, SeededRng& rng) {
  return pathloss_gain(config, (a - b).norm()) * rng.exponential();
}

const json& require_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw std::invalid_argument(std::string("scenario file: missing field `") +
                                name + "`");
  }
  return *it;
}

double require_number(const json& j, const char* name) {
  const json& f = require_field(j, name);
  if (!f.is_number()) {
    throw std::invalid_argument(std::string("scenario file: field `") + name +
                                "` must be a number");
  }
  return f.get<double>();
}

int require_int(const json& j, const char* name) {
  const json& f = require_field(j, name);
  if (!f.is_number_integer()) {
    throw std::invalid_argument(std::string("scenario file: field `") + name +
                                "` must be an integer");
  }
  return f.get<int>();
}

}  // namespace

void CellConfig::validate() const {
  if (!(radius_m > 0.0)) {
    throw std::invalid_argument("CellConfig: radius_m must be > 0");
  }
  if (m_count < 1 || n_count < 1 || k_count < 1) {
    throw std::invalid_argument("CellConfig: user/subchannel counts must be >= 1");
  }
  if (!(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("CellConfig: bandwidth_hz must be > 0");
  }
  if (!(min_link_distance_m > 0.0)) {
    throw std::invalid_argument("CellConfig: min_link_distance_m must be > 0");
  }
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double noise_power_per_subchannel(const CellConfig& config) {
  if (config.k_count < 1) {
    throw std::invalid_argument("CellConfig: k_count must be >= 1");
  }
  const double subchannel_hz = config.bandwidth_hz / config.k_count;
  return dbm_to_watts(config.noise_psd_dbm_hz + 10.0 * std::log10(subchannel_hz));
}

double pathloss_gain(const CellConfig& config, double distance_m) {
  const double d_km =
      std::max(distance_m, config.min_link_distance_m) / 1000.0;
  const double loss_db =
      config.pathloss_const_db + config.pathloss_slope_db * std::log10(d_km);
  return std::pow(10.0, -loss_db / 10.0);
}

GeneratedScenario generate_scenario(const CellConfig& config) {
  config.validate();
  SeededRng rng(config.seed);

  UserLayout layout;
  layout.uue_pos.resize(config.m_count, 2);
  layout.due_pos.resize(config.n_count, 2);
  for (int m = 0; m < config.m_count; ++m) {
    layout.uue_pos.row(m) = draw_disk_point(rng, config.radius_m);
  }
  for (int n = 0; n < config.n_count; ++n) {
    layout.due_pos.row(n) = draw_disk_point(rng, config.radius_m);
  }

  Scenario s;
  s.m_count = config.m_count;
  s.n_count = config.n_count;
  s.k_count = config.k_count;
  s.gain_up.resize(config.m_count, config.k_count);
  s.gain_down.resize(config.n_count, config.k_count);
  s.gain_cross = Tensor3d(config.m_count, config.n_count, config.k_count);

  const Eigen::Vector2d bs = Eigen::Vector2d::Zero();
  for (int m = 0; m < config.m_count; ++m) {
    for (int k = 0; k < config.k_count; ++k) {
      s.gain_up(m, k) = link_gain(config, layout.uue_pos.row(m), bs, rng);
    }
  }
  for (int n = 0; n < config.n_count; ++n) {
    for (int k = 0; k < config.k_count; ++k) {
      s.gain_down(n, k) = link_gain(config, bs, layout.due_pos.row(n), rng);
    }
  }
  for (int m = 0; m < config.m_count; ++m) {
    for (int n = 0; n < config.n_count; ++n) {
      for (int k = 0; k < config.k_count; ++k) {
        s.gain_cross(m, n, k) =
            link_gain(config, layout.uue_pos.row(m), layout.due_pos.row(n), rng);
      }
    }
  }

  const double noise = noise_power_per_subchannel(config);
  s.sigma_bs_sq = noise;
  s.sigma_due_sq = noise;
  s.sigma_si_sq = noise * std::pow(10.0, config.si_over_noise_db / 10.0);
  s.p_bs_max = dbm_to_watts(config.p_bs_dbm);
  s.p_uue_max = Eigen::VectorXd::Constant(
      config.m_count, dbm_to_watts(config.p_bs_dbm + config.uue_offset_db));

  s.validate();
  return {std::move(s), std::move(layout)};
}

std::string scenario_to_json_text(const Scenario& scenario) {
  json j;
  j["m_count"] = scenario.m_count;
  j["n_count"] = scenario.n_count;
  j["k_count"] = scenario.k_count;

  json up = json::array();
  for (int m = 0; m < scenario.m_count; ++m) {
    json row = json::array();
    for (int k = 0; k < scenario.k_count; ++k) row.push_back(scenario.gain_up(m, k));
    up.push_back(std::move(row));
  }
  j["gain_up"] = std::move(up);

  json down = json::array();
  for (int n = 0; n < scenario.n_count; ++n) {
    json row = json::array();
    for (int k = 0; k < scenario.k_count; ++k) row.push_back(scenario.gain_down(n, k));
    down.push_back(std::move(row));
  }
  j["gain_down"] = std::move(down);

  json cross = json::array();
  for (int m = 0; m < scenario.m_count; ++m) {
    json plane = json::array();
    for (int n = 0; n < scenario.n_count; ++n) {
      json row = json::array();
      for (int k = 0; k < scenario.k_count; ++k) {
        row.push_back(scenario.gain_cross(m, n, k));
      }
      plane.push_back(std::move(row));
    }
    cross.push_back(std::move(plane));
  }
  j["gain_cross"] = std::move(cross);

  j["sigma_si_sq"] = scenario.sigma_si_sq;
  j["sigma_bs_sq"] = scenario.sigma_bs_sq;
  j["sigma_due_sq"] = scenario.sigma_due_sq;
  j["p_bs_max"] = scenario.p_bs_max;
  json uue = json::array();
  for (int m = 0; m < scenario.m_count; ++m) uue.push_back(scenario.p_uue_max[m]);
  j["p_uue_max"] = std::move(uue);

  return j.dump(2);
}

Scenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario file: invalid JSON: ") +
                                e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("scenario file: top level must be an object");
  }

  static const char* known[] = {"m_count",     "n_count",      "k_count",
                                "gain_up",     "gain_down",    "gain_cross",
                                "sigma_si_sq", "sigma_bs_sq",  "sigma_due_sq",
                                "p_bs_max",    "p_uue_max"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* name : known) ok = ok || it.key() == name;
    if (!ok) {
      throw std::invalid_argument("scenario file: unknown field `" + it.key() +
                                  "`");
    }
  }

  Scenario s;
  s.m_count = require_int(j, "m_count");
  s.n_count = require_int(j, "n_count");
  s.k_count = require_int(j, "k_count");
  if (s.m_count < 1 || s.n_count < 1 || s.k_count < 1) {
    throw std::invalid_argument("scenario file: counts must be >= 1");
  }

  auto read_matrix = [&](const char* name, int rows, int cols) {
    const json& arr = require_field(j, name);
    if (!arr.is_array() || static_cast<int>(arr.size()) != rows) {
      throw std::invalid_argument(std::string("scenario file: field `") + name +
                                  "` must be an array of " +
                                  std::to_string(rows) + " rows");
    }
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      const json& row = arr[r];
      if (!row.is_array() || static_cast<int>(row.size()) != cols) {
        throw std::invalid_argument(std::string("scenario file: field `") +
                                    name + "` row " + std::to_string(r) +
                                    " must have " + std::to_string(cols) +
                                    " numbers");
      }
      for (int c = 0; c < cols; ++c) {
        if (!row[c].is_number()) {
          throw std::invalid_argument(std::string("scenario file: field `") +
                                      name + "` has a non-numeric entry");
        }
        m(r, c) = row[c].get<double>();
      }
    }
    return m;
  };

  s.gain_up = read_matrix("gain_up", s.m_count, s.k_count);
  s.gain_down = read_matrix("gain_down", s.n_count, s.k_count);

  const json& cross = require_field(j, "gain_cross");
  if (!cross.is_array() || static_cast<int>(cross.size()) != s.m_count) {
    throw std::invalid_argument(
        "scenario file: field `gain_cross` must have m_count planes");
  }
  s.gain_cross = Tensor3d(s.m_count, s.n_count, s.k_count);
  for (int m = 0; m < s.m_count; ++m) {
    const json& plane = cross[m];
    if (!plane.is_array() || static_cast<int>(plane.size()) != s.n_count) {
      throw std::invalid_argument(
          "scenario file: field `gain_cross` plane " + std::to_string(m) +
          " must have n_count rows");
    }
    for (int n = 0; n < s.n_count; ++n) {
      const json& row = plane[n];
      if (!row.is_array() || static_cast<int>(row.size()) != s.k_count) {
        throw std::invalid_argument(
            "scenario file: field `gain_cross` row (" + std::to_string(m) +
            ", " + std::to_string(n) + ") must have k_count numbers");
      }
      for (int k = 0; k < s.k_count; ++k) {
        if (!row[k].is_number()) {
          throw std::invalid_argument(
              "scenario file: field `gain_cross` has a non-numeric entry");
        }
        s.gain_cross(m, n, k) = row[k].get<double>();
      }
    }
  }

  s.sigma_si_sq = require_number(j, "sigma_si_sq");
  s.sigma_bs_sq = require_number(j, "sigma_bs_sq");
  s.sigma_due_sq = require_number(j, "sigma_due_sq");
  s.p_bs_max = require_number(j, "p_bs_max");

  const json& uue = require_field(j, "p_uue_max");
  if (!uue.is_array() || static_cast<int>(uue.size()) != s.m_count) {
    throw std::invalid_argument(
        "scenario file: field `p_uue_max` must have m_count numbers");
  }
  s.p_uue_max.resize(s.m_count);
  for (int m = 0; m < s.m_count; ++m) {
    if (!uue[m].is_number()) {
      throw std::invalid_argument(
          "scenario file: field `p_uue_max` has a non-numeric entry");
    }
    s.p_uue_max[m] = uue[m].get<double>();
  }

  s.validate();
  return s;
}

void save_scenario(const Scenario& scenario,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_scenario: cannot open " + path.string());
  }
  out << scenario_to_json_text(scenario) << "\n";
  if (!out) {
    throw std::runtime_error("save_scenario: write failed for " +
                             path.string());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_scenario: cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

}  // namespace fdra
