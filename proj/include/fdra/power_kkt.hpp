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

#include <optional>
#include <vector>

#include "fdra/types.hpp"

namespace fdra {

/// Normalized per-triple coefficients for the price-based power subproblem:
///   a_mb = gain_up / (sigma_si_sq + sigma_bs_sq)
///   a_bn = gain_down / sigma_due_sq
///   a_mn = gain_cross / sigma_due_sq
/// together with the current dual prices. All of the power algebra in this
/// module is carried out in natural-log (nat) units, matching the closed
/// forms; conversion to bits happens at reporting boundaries.
struct PairCoefficients {
  double a_mb = 0.0;      ///< > 0
  double a_bn = 0.0;      ///< > 0
  double a_mn = 0.0;      ///< >= 0
  double lambda_m = 0.0;  ///< >= 0, uplink-user price (nats per watt)
  double lambda_b = 0.0;  ///< >= 0, base-station price (nats per watt)
};

/// Dual prices below this floor are clamped before the closed forms, which
/// are singular at zero price.
inline constexpr double kDualPriceFloor = 1e-12;

enum class KktCase { origin, uplink_only, downlink_only, interior };

struct PairSolution {
  PairPowers powers;
  double objective = 0.0;  ///< nats; always >= 0 (the origin scores 0)
  KktCase active_case = KktCase::origin;
};

/// Price-adjusted utility of one triple, in nats:
///   ln(1 + p_up a_mb) + ln(1 + p_down a_bn / (p_up a_mn + 1))
///   - lambda_m p_up - lambda_b p_down.
/// Throws std::domain_error on negative powers.
double dual_objective(const PairCoefficients& coef, const PairPowers& powers);

/// Stationary point with the downlink power at zero: water-filling
/// p_up = 1/lambda_m - 1/a_mb. Empty when that is not positive.
std::optional<PairPowers> solve_uplink_only(const PairCoefficients& coef);

/// Stationary point with the uplink power at zero: p_down = 1/lambda_b -
/// 1/a_bn. Empty when that is not positive.
std::optional<PairPowers> solve_downlink_only(const PairCoefficients& coef);

/// Interior stationary points (both powers > 0): roots of the quadratic in
/// p_down obtained by eliminating p_up from the two stationarity equations,
/// refined by a Newton pass on the 2x2 system. Requires a_mn > 0. May be
/// empty.
std::vector<PairPowers> solve_interior(const PairCoefficients& coef);

/// Best of all boundary and interior candidates plus the origin. Ties keep
/// the earlier candidate in the order origin, uplink-only, downlink-only,
/// interior.
PairSolution solve_pair(const PairCoefficients& coef);

}  // namespace fdra
