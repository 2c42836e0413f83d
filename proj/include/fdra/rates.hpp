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

#include <cmath>
#include <stdexcept>

#include "fdra/types.hpp"

namespace fdra {

/// Uplink spectral efficiency in bits/s/Hz:
///   log2(1 + p_up * gain_up / (sigma_si_sq + sigma_bs_sq)).
/// The base-station receiver sees residual self-interference plus thermal
/// noise regardless of the downlink power on the same subchannel.
template <class Scalar>
Scalar uplink_rate(Scalar p_up, Scalar gain_up, Scalar sigma_si_sq,
                   Scalar sigma_bs_sq) {
  if (!(p_up >= Scalar(0))) {
    throw std::domain_error("uplink_rate: p_up must be >= 0");
  }
  if (!(gain_up >= Scalar(0))) {
    throw std::domain_error("uplink_rate: gain_up must be >= 0");
  }
  if (!(sigma_si_sq > Scalar(0)) || !(sigma_bs_sq > Scalar(0))) {
    throw std::domain_error("uplink_rate: variances must be > 0");
  }
  return std::log2(Scalar(1) + p_up * gain_up / (sigma_si_sq + sigma_bs_sq));
}

/// Downlink spectral efficiency in bits/s/Hz:
///   log2(1 + p_down * gain_down / (p_up * gain_cross + sigma_due_sq)).
/// The paired uplink user's transmission interferes at the downlink receiver.
template <class Scalar>
Scalar downlink_rate(Scalar p_down, Scalar p_up, Scalar gain_down,
                     Scalar gain_cross, Scalar sigma_due_sq) {
  if (!(p_down >= Scalar(0)) || !(p_up >= Scalar(0))) {
    throw std::domain_error("downlink_rate: powers must be >= 0");
  }
  if (!(gain_down >= Scalar(0)) || !(gain_cross >= Scalar(0))) {
    throw std::domain_error("downlink_rate: gains must be >= 0");
  }
  if (!(sigma_due_sq > Scalar(0))) {
    throw std::domain_error("downlink_rate: sigma_due_sq must be > 0");
  }
  return std::log2(Scalar(1) +
                   p_down * gain_down / (p_up * gain_cross + sigma_due_sq));
}

/// Sum rate of one assigned triple, bits/s/Hz. Throws std::out_of_range on
/// bad indices.
double pair_rate(const Scenario& scenario, const Triple& triple,
                 const PairPowers& powers);

/// Objective value of an allocation: sum of pair_rate over assigned triples.
/// Throws std::invalid_argument naming any assigned triple without powers.
double total_rate(const Scenario& scenario, const Assignment3D& assignment,
                  const PowerMap& powers);

/// Consumed-vs-budget report for the base station and every uplink user.
/// Satisfied means consumed <= budget * (1 + 1e-6).
BudgetReport check_budgets(const Scenario& scenario,
                           const Assignment3D& assignment,
                           const PowerMap& powers);

}  // namespace fdra
