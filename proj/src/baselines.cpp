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

#include "fdra/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "fdra/rates.hpp"
#include "fdra/rng.hpp"

namespace fdra {

namespace {

constexpr int kExhaustiveCap = 6;

void enumerate_recursive(int m_count, int n_count, int k_count, int depth,
                         int total, int next_m, std::vector<Triple>& chosen,
                         std::vector<char>& n_used, std::vector<char>& k_used,
                         const std::function<void(const Assignment3D&)>& visit) {
  if (depth == total) {
    visit(Assignment3D(chosen));
    return;
  }
  // Chosen m indices ascend across levels, so each triple set appears once.
  for (int m = next_m; m <= m_count - (total - depth); ++m) {
    for (int n = 0; n < n_count; ++n) {
      if (n_used[n]) continue;
      n_used[n] = 1;
      for (int k = 0; k < k_count; ++k) {
        if (k_used[k]) continue;
        k_used[k] = 1;
        chosen.push_back({m, n, k});
        enumerate_recursive(m_count, n_count, k_count, depth + 1, total, m + 1,
                            chosen, n_used, k_used, visit);
        chosen.pop_back();
        k_used[k] = 0;
      }
      n_used[n] = 0;
    }
  }
}

}  // namespace

PowerMap equal_power(const Scenario& scenario, const Assignment3D& assignment) {
  PowerMap powers;
  if (assignment.empty()) return powers;
  const double p_down = scenario.p_bs_max / assignment.size();
  for (const Triple& t : assignment.triples()) {
    powers[t] = {scenario.p_uue_max[t.m], p_down};
  }
  return powers;
}

TriplePowerRule equal_power_rule() {
  return [](const Scenario& scenario, const Triple& t, int total_triples) {
    return PairPowers{scenario.p_uue_max[t.m],
                      scenario.p_bs_max / total_triples};
  };
}

RateTensor equal_power_rate_tensor(const Scenario& scenario) {
  const int total = scenario.assignable_triples();
  const double p_down = scenario.p_bs_max / total;
  RateTensor tensor(scenario.m_count, scenario.n_count, scenario.k_count);
  for (int m = 0; m < scenario.m_count; ++m) {
    for (int n = 0; n < scenario.n_count; ++n) {
      for (int k = 0; k < scenario.k_count; ++k) {
        tensor(m, n, k) = pair_rate(scenario, {m, n, k},
                                    {scenario.p_uue_max[m], p_down});
      }
    }
  }
  return tensor;
}

void for_each_complete_assignment(
    int m_count, int n_count, int k_count,
    const std::function<void(const Assignment3D&)>& visit) {
  const int total = std::min(m_count, std::min(n_count, k_count));
  std::vector<Triple> chosen;
  chosen.reserve(total);
  std::vector<char> n_used(n_count, 0), k_used(k_count, 0);
  enumerate_recursive(m_count, n_count, k_count, 0, total, 0, chosen, n_used,
                      k_used, visit);
}

AllocationResult exhaustive_search(const Scenario& scenario,
                                   const PowerRule& rule) {
  const int total = scenario.assignable_triples();
  if (total > kExhaustiveCap) {
    throw std::invalid_argument(
        "exhaustive_search: min(M, N, K) = " + std::to_string(total) +
        " exceeds the cap of " + std::to_string(kExhaustiveCap));
  }

  AllocationResult best;
  best.sum_rate = -1.0;
  for_each_complete_assignment(
      scenario.m_count, scenario.n_count, scenario.k_count,
      [&](const Assignment3D& assignment) {
        PowerMap powers = rule(scenario, assignment);
        const double rate = total_rate(scenario, assignment, powers);
        if (rate > best.sum_rate) {
          best.assignment = assignment;
          best.powers = std::move(powers);
          best.sum_rate = rate;
        }
      });

  best.per_pair_rate.clear();
  for (const Triple& t : best.assignment.triples()) {
    best.per_pair_rate[t] = pair_rate(scenario, t, best.powers.at(t));
  }
  return best;
}

Assignment3D random_mapping(const Scenario& scenario, std::uint64_t seed) {
  return random_complete_assignment(scenario.m_count, scenario.n_count,
                                    scenario.k_count, seed);
}

Assignment3D greedy_mapping(const Scenario& scenario,
                            const TriplePowerRule& rule, GreedyOrder order,
                            std::uint64_t seed) {
  const int total = scenario.assignable_triples();

  std::vector<int> uue_order(scenario.m_count);
  for (int m = 0; m < scenario.m_count; ++m) uue_order[m] = m;
  if (order == GreedyOrder::random) {
    SeededRng rng(seed);
    rng.shuffle(uue_order);
  }

  std::vector<char> n_used(scenario.n_count, 0), k_used(scenario.k_count, 0);
  std::vector<Triple> picked;
  picked.reserve(total);
  for (int m : uue_order) {
    if (static_cast<int>(picked.size()) == total) break;
    double best_rate = -1.0;
    Triple best_triple{};
    for (int n = 0; n < scenario.n_count; ++n) {
      if (n_used[n]) continue;
      for (int k = 0; k < scenario.k_count; ++k) {
        if (k_used[k]) continue;
        const Triple t{m, n, k};
        const double rate = pair_rate(scenario, t, rule(scenario, t, total));
        if (rate > best_rate) {
          best_rate = rate;
          best_triple = t;
        }
      }
    }
    picked.push_back(best_triple);
    n_used[best_triple.n] = 1;
    k_used[best_triple.k] = 1;
  }
  return Assignment3D(std::move(picked));
}

}  // namespace fdra
