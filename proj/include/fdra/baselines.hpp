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
#include <functional>

#include "fdra/mapping3d.hpp"
#include "fdra/types.hpp"

namespace fdra {

/// Assigns powers to every triple of a given assignment.
using PowerRule =
    std::function<PowerMap(const Scenario&, const Assignment3D&)>;

/// Assigns powers to a single triple, knowing how many triples the complete
/// assignment carries (budget-splitting rules need the count).
using TriplePowerRule =
    std::function<PairPowers(const Scenario&, const Triple&, int)>;

/// Each uplink user spends its full budget on its single subchannel; the
/// base station splits its budget evenly over the assigned triples. Empty
/// assignment yields an empty map.
PowerMap equal_power(const Scenario& scenario, const Assignment3D& assignment);

/// equal_power as a per-triple rule.
TriplePowerRule equal_power_rule();

/// Per-triple rates under equal power, as the reward tensor for mapping.
RateTensor equal_power_rate_tensor(const Scenario& scenario);

/// Visits every complete assignment (min(M, N, K) disjoint triples; chosen m
/// indices ascending) exactly once. Deterministic order.
void for_each_complete_assignment(
    int m_count, int n_count, int k_count,
    const std::function<void(const Assignment3D&)>& visit);

/// Enumerates all complete assignments and returns the best under the power
/// rule. Guarded to min(M, N, K) <= 6; throws std::invalid_argument above.
AllocationResult exhaustive_search(const Scenario& scenario,
                                   const PowerRule& rule);

/// Uniformly random complete assignment.
Assignment3D random_mapping(const Scenario& scenario, std::uint64_t seed);

enum class GreedyOrder { ascending, random };

/// Each uplink user in turn takes the (due, subchannel) pair of highest pair
/// rate under the rule; taken indices become unavailable. Stops after
/// min(M, N, K) picks.
Assignment3D greedy_mapping(const Scenario& scenario,
                            const TriplePowerRule& rule,
                            GreedyOrder order = GreedyOrder::ascending,
                            std::uint64_t seed = 0);

}  // namespace fdra
