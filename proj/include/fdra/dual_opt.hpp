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

#include "fdra/types.hpp"

namespace fdra {

/// Multiplier vector and step-size schedule of the subgradient loop. All
/// prices are in nats per watt, consistent with the closed-form power solver.
struct DualState {
  Eigen::VectorXd lambda_uue;  ///< one price per uplink user, >= 0
  double lambda_bs = 0.0;      ///< base-station price, >= 0
  double step0 = 0.0;          ///< initial step size; step(l) = step0 / sqrt(l)
  int iteration = 1;           ///< l, starting at 1
};

/// One evaluation of the dual function at fixed prices: the maximizing
/// assignment and powers, the dual value, and the consumed budgets over
/// assigned triples only.
struct DualEvaluation {
  Assignment3D assignment;
  PowerMap powers;
  double dual_value_nats = 0.0;
  double consumed_bs_power = 0.0;
  Eigen::VectorXd consumed_uue_power;
};

/// How the per-price assignment is chosen inside the dual loop.
enum class MappingMode { heuristic, exhaustive };

struct DualOptions {
  int max_iters = 500;
  double tolerance = 1e-4;  ///< on the budget-scaled subgradient norm
  std::optional<double> step0;
  std::optional<double> lambda_bs0;
  std::optional<Eigen::VectorXd> lambda_uue0;
  MappingMode mapping = MappingMode::heuristic;
};

/// Scale-aware defaults: prices at which single-link water-filling would
/// spend roughly each budget (count of assigned triples over the budget);
/// step0 moves each price by about a tenth of its own scale on a
/// budget-sized subgradient, max(lambda_i / (10 * budget_i)). Overridable
/// via options.
DualState initial_dual_state(const Scenario& scenario,
                             const DualOptions& options = {});

/// Maximizes the priced Lagrangian at the given prices: solves the per-triple
/// power problem in closed form for every (m, n, k), runs the 3D mapping on
/// the resulting value tensor, and adds the price-times-budget constant.
DualEvaluation evaluate_dual(const Scenario& scenario, const DualState& state,
                             MappingMode mapping = MappingMode::heuristic);

/// Projected subgradient step on all prices with step0 / sqrt(l), then
/// advances the iteration counter. Prices never go negative.
DualState update_duals(const Scenario& scenario, const DualState& state,
                       const DualEvaluation& evaluation);

/// Scales an evaluation's powers onto the budgets (base-station down-powers
/// by min(1, budget/consumed), each user's up-power likewise) and prices the
/// result in bits/s/Hz. Always feasible.
AllocationResult recover_feasible(const Scenario& scenario,
                                  const DualEvaluation& evaluation);

/// Full joint solve: subgradient iterations with per-iteration feasible
/// primal recovery. The equal-power allocation on the five-step mapping
/// seeds the incumbent, and the winning assignment's powers get a final
/// exact refinement (base-station water-filling alternated with per-triple
/// closed-form uplink optima). Diagnostics carry the iteration count, the
/// gap estimate (best dual value minus returned primal, bits/s/Hz) and the
/// wall time.
AllocationResult solve_joint(const Scenario& scenario,
                             const DualOptions& options = {});

}  // namespace fdra
