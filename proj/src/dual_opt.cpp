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

#include "fdra/dual_opt.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fdra/baselines.hpp"
#include "fdra/hungarian.hpp"
#include "fdra/mapping3d.hpp"
#include "fdra/power_kkt.hpp"
#include "fdra/rates.hpp"

namespace fdra {

namespace {

// Largest pair-matching count for which the exact dual bound is computed.
constexpr long kExactBoundMatchingCap = 1000;

long matching_count(int m_count, int n_count, int k_count) {
  const int t = std::min(m_count, std::min(n_count, k_count));
  // C(M, t) * C(N, t) * t!, capped to avoid overflow.
  long count = 1;
  auto choose = [](int n, int r) {
    long c = 1;
    for (int i = 1; i <= r; ++i) {
      c = c * (n - r + i) / i;
      if (c > kExactBoundMatchingCap) return kExactBoundMatchingCap + 1;
    }
    return c;
  };
  count *= choose(m_count, t);
  for (int i = 2; i <= t && count <= kExactBoundMatchingCap; ++i) count *= i;
  count *= choose(n_count, t);
  return count;
}

// Exact maximum of the assigned-value sum over complete assignments:
// enumerate which uplink users pair with which downlink users, and solve
// the pairs-to-subchannels side exactly. Affordable only while the number
// of pair matchings stays small.
struct ExactMapping {
  double value = -std::numeric_limits<double>::infinity();
  Assignment3D assignment;
};

ExactMapping exact_assignment(const Tensor3d& value) {
  const int m_count = static_cast<int>(value.dim0());
  const int n_count = static_cast<int>(value.dim1());
  const int k_count = static_cast<int>(value.dim2());
  const int t = std::min(m_count, std::min(n_count, k_count));

  ExactMapping best;
  std::vector<std::pair<int, int>> pairs;
  std::vector<char> n_used(n_count, 0);
  RewardMatrix rewards(t, k_count);

  std::function<void(int, int)> recurse = [&](int depth, int next_m) {
    if (depth == t) {
      for (int r = 0; r < t; ++r) {
        for (int k = 0; k < k_count; ++k) {
          rewards(r, k) = value(pairs[r].first, pairs[r].second, k);
        }
      }
      const auto matching = solve_assignment(rewards);
      const double total = assignment_reward(rewards, matching);
      if (total > best.value) {
        std::vector<Triple> triples;
        triples.reserve(t);
        for (const auto& [row, col] : matching) {
          triples.push_back({pairs[row].first, pairs[row].second,
                             static_cast<int>(col)});
        }
        best.value = total;
        best.assignment = Assignment3D(std::move(triples));
      }
      return;
    }
    for (int m = next_m; m <= m_count - (t - depth); ++m) {
      for (int n = 0; n < n_count; ++n) {
        if (n_used[n]) continue;
        n_used[n] = 1;
        pairs.emplace_back(m, n);
        recurse(depth + 1, m + 1);
        pairs.pop_back();
        n_used[n] = 0;
      }
    }
  };
  recurse(0, 0);
  return best;
}

PairCoefficients triple_coefficients(const Scenario& s, const Triple& t,
                                     double lambda_m, double lambda_b) {
  PairCoefficients c;
  c.a_mb = s.gain_up(t.m, t.k) / (s.sigma_si_sq + s.sigma_bs_sq);
  c.a_bn = s.gain_down(t.n, t.k) / s.sigma_due_sq;
  c.a_mn = s.gain_cross(t.m, t.n, t.k) / s.sigma_due_sq;
  c.lambda_m = lambda_m;
  c.lambda_b = lambda_b;
  return c;
}

// Budget-scaled subgradient norm used by the stopping rule.
double scaled_subgradient_norm(const Scenario& s, const DualEvaluation& e) {
  double sq = 0.0;
  const double d_bs = (s.p_bs_max - e.consumed_bs_power) / s.p_bs_max;
  sq += d_bs * d_bs;
  for (int m = 0; m < s.m_count; ++m) {
    const double d = (s.p_uue_max[m] - e.consumed_uue_power[m]) / s.p_uue_max[m];
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace

DualState initial_dual_state(const Scenario& scenario,
                             const DualOptions& options) {
  const int total = scenario.assignable_triples();
  DualState state;
  state.lambda_bs = options.lambda_bs0.value_or(total / scenario.p_bs_max);
  if (options.lambda_uue0) {
    if (options.lambda_uue0->size() != scenario.m_count) {
      throw std::invalid_argument(
          "initial_dual_state: lambda_uue0 must have m_count entries");
    }
    state.lambda_uue = *options.lambda_uue0;
  } else {
    state.lambda_uue = scenario.p_uue_max.cwiseInverse();
  }
  if (options.step0) {
    state.step0 = *options.step0;
  } else {
    // Subgradients are in watts, so the step that moves each price by about
    // a tenth of its own scale on a budget-sized subgradient is
    // lambda / (10 * budget), taken over all components.
    state.step0 = state.lambda_bs / (10.0 * scenario.p_bs_max);
    for (int m = 0; m < scenario.m_count; ++m) {
      state.step0 = std::max(
          state.step0, state.lambda_uue[m] / (10.0 * scenario.p_uue_max[m]));
    }
  }
  state.iteration = 1;
  return state;
}

namespace {

struct TripleSolves {
  Tensor3d value;
  Tensor3d p_up;
  Tensor3d p_down;
};

TripleSolves solve_all_triples(const Scenario& scenario,
                               const DualState& state) {
  TripleSolves out{
      Tensor3d(scenario.m_count, scenario.n_count, scenario.k_count),
      Tensor3d(scenario.m_count, scenario.n_count, scenario.k_count),
      Tensor3d(scenario.m_count, scenario.n_count, scenario.k_count)};
  for (int m = 0; m < scenario.m_count; ++m) {
    for (int n = 0; n < scenario.n_count; ++n) {
      for (int k = 0; k < scenario.k_count; ++k) {
        const PairSolution sol = solve_pair(triple_coefficients(
            scenario, {m, n, k}, state.lambda_uue[m], state.lambda_bs));
        out.value(m, n, k) = sol.objective;
        out.p_up(m, n, k) = sol.powers.p_up;
        out.p_down(m, n, k) = sol.powers.p_down;
      }
    }
  }
  return out;
}

double budget_price_constant(const Scenario& scenario,
                             const DualState& state) {
  return scenario.p_bs_max * state.lambda_bs +
         scenario.p_uue_max.dot(state.lambda_uue);
}

}  // namespace

DualEvaluation evaluate_dual(const Scenario& scenario, const DualState& state,
                             MappingMode mapping) {
  if (state.lambda_bs < 0.0 || (state.lambda_uue.array() < 0.0).any()) {
    throw std::invalid_argument("evaluate_dual: prices must be >= 0");
  }
  if (state.lambda_uue.size() != scenario.m_count) {
    throw std::invalid_argument(
        "evaluate_dual: lambda_uue must have m_count entries");
  }

  const TripleSolves solves = solve_all_triples(scenario, state);
  const Tensor3d& value = solves.value;
  const Tensor3d& p_up = solves.p_up;
  const Tensor3d& p_down = solves.p_down;

  DualEvaluation eval;
  if (mapping == MappingMode::heuristic) {
    eval.assignment = optimize_3d(value);
  } else {
    eval.assignment = exact_assignment(value).assignment;
  }

  eval.consumed_uue_power = Eigen::VectorXd::Zero(scenario.m_count);
  eval.dual_value_nats = budget_price_constant(scenario, state);
  for (const Triple& t : eval.assignment.triples()) {
    eval.powers[t] = {p_up(t.m, t.n, t.k), p_down(t.m, t.n, t.k)};
    eval.dual_value_nats += value(t.m, t.n, t.k);
    eval.consumed_bs_power += p_down(t.m, t.n, t.k);
    eval.consumed_uue_power[t.m] += p_up(t.m, t.n, t.k);
  }
  return eval;
}

DualState update_duals(const Scenario& scenario, const DualState& state,
                       const DualEvaluation& evaluation) {
  const double step = state.step0 / std::sqrt(static_cast<double>(state.iteration));
  DualState next = state;
  next.lambda_bs = std::max(
      0.0, state.lambda_bs -
               step * (scenario.p_bs_max - evaluation.consumed_bs_power));
  for (int m = 0; m < scenario.m_count; ++m) {
    next.lambda_uue[m] = std::max(
        0.0, state.lambda_uue[m] -
                 step * (scenario.p_uue_max[m] -
                         evaluation.consumed_uue_power[m]));
  }
  next.iteration = state.iteration + 1;
  return next;
}

namespace {

// Water-filling over the assigned downlinks: maximizes sum log(1 + p_i b_i)
// with sum p_i = budget, p_i >= 0, by bisecting the water level.
std::vector<double> waterfill_downlink(const std::vector<double>& b,
                                       double budget) {
  std::vector<double> p(b.size(), 0.0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool any = false;
  for (double bi : b) {
    if (bi <= 0.0) continue;
    any = true;
    lo = std::min(lo, 1.0 / bi);
    hi = std::max(hi, 1.0 / bi);
  }
  if (!any) return p;
  hi += budget;
  auto spent = [&](double level) {
    double total = 0.0;
    for (double bi : b) {
      if (bi > 0.0) total += std::max(0.0, level - 1.0 / bi);
    }
    return total;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (spent(mid) < budget ? lo : hi) = mid;
  }
  // The lower end never overspends the budget.
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] > 0.0) p[i] = std::max(0.0, lo - 1.0 / b[i]);
  }
  return p;
}

// Exact maximizer of one pair's rate in its uplink power, p in [0, cap],
// with the downlink power held fixed. Stationary points solve
//   a g^2 p^2 + 2 a g s p + (a s^2 + a B s - B g) = 0
// where a, g are the uplink/cross gains over their noise, s the downlink
// noise variance and B = p_down * gain_down; endpoints complete the
// candidate set.
double best_uplink_power(const Scenario& s, const Triple& t, double p_down,
                         double cap) {
  const double a = s.gain_up(t.m, t.k) / (s.sigma_si_sq + s.sigma_bs_sq);
  const double g = s.gain_cross(t.m, t.n, t.k);
  const double sn = s.sigma_due_sq;
  const double big_b = p_down * s.gain_down(t.n, t.k);

  std::vector<double> candidates{0.0, cap};
  const double qa = a * g * g;
  if (qa > 0.0) {
    const double qb = 2.0 * a * g * sn;
    const double qc = a * sn * sn + a * big_b * sn - big_b * g;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double root : {(-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa)}) {
        if (root > 0.0 && root < cap) candidates.push_back(root);
      }
    }
  }
  double best_p = 0.0, best_rate = -1.0;
  for (double p : candidates) {
    const double rate = pair_rate(s, t, {p, p_down});
    if (rate > best_rate) {
      best_rate = rate;
      best_p = p;
    }
  }
  return best_p;
}

// Alternating exact refinement of the powers on a fixed assignment: the
// base-station budget is re-split by water-filling, then every uplink power
// is re-optimized in closed form. Both half-steps are exact maximizations,
// so the sum rate never decreases.
void polish_powers(const Scenario& s, const Assignment3D& assignment,
                   PowerMap& powers) {
  const auto& triples = assignment.triples();
  if (triples.empty()) return;
  double previous = total_rate(s, assignment, powers);
  for (int round = 0; round < 50; ++round) {
    std::vector<double> b(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const Triple& t = triples[i];
      b[i] = s.gain_down(t.n, t.k) /
             (powers[t].p_up * s.gain_cross(t.m, t.n, t.k) + s.sigma_due_sq);
    }
    const std::vector<double> down = waterfill_downlink(b, s.p_bs_max);
    for (std::size_t i = 0; i < triples.size(); ++i) {
      powers[triples[i]].p_down = down[i];
    }
    for (const Triple& t : triples) {
      powers[t].p_up =
          best_uplink_power(s, t, powers[t].p_down, s.p_uue_max[t.m]);
    }
    const double now = total_rate(s, assignment, powers);
    if (now - previous < 1e-12 * std::max(1.0, previous)) break;
    previous = now;
  }
}

AllocationResult finalize_result(const Scenario& scenario,
                                 Assignment3D assignment, PowerMap powers) {
  polish_powers(scenario, assignment, powers);
  AllocationResult result;
  result.assignment = std::move(assignment);
  for (const auto& [triple, p] : powers) {
    result.per_pair_rate[triple] = pair_rate(scenario, triple, p);
    result.sum_rate += result.per_pair_rate[triple];
  }
  result.powers = std::move(powers);
  return result;
}

}  // namespace

AllocationResult recover_feasible(const Scenario& scenario,
                                  const DualEvaluation& evaluation) {
  double bs_scale = 1.0;
  if (evaluation.consumed_bs_power > scenario.p_bs_max) {
    bs_scale = scenario.p_bs_max / evaluation.consumed_bs_power;
  }

  AllocationResult result;
  result.assignment = evaluation.assignment;
  for (const auto& [triple, powers] : evaluation.powers) {
    double uue_scale = 1.0;
    const double consumed = evaluation.consumed_uue_power[triple.m];
    if (consumed > scenario.p_uue_max[triple.m]) {
      uue_scale = scenario.p_uue_max[triple.m] / consumed;
    }
    const PairPowers scaled{powers.p_up * uue_scale, powers.p_down * bs_scale};
    result.powers[triple] = scaled;
    result.per_pair_rate[triple] = pair_rate(scenario, triple, scaled);
    result.sum_rate += result.per_pair_rate[triple];
  }
  return result;
}

AllocationResult solve_joint(const Scenario& scenario,
                             const DualOptions& options) {
  scenario.validate();
  const auto start = std::chrono::steady_clock::now();

  // Incumbent: the five-step mapping under equal power. The dual loop must
  // end up at least this good.
  AllocationResult best;
  {
    Assignment3D mapping = optimize_3d(equal_power_rate_tensor(scenario));
    PowerMap powers = equal_power(scenario, mapping);
    best.sum_rate = total_rate(scenario, mapping, powers);
    best.assignment = std::move(mapping);
    best.powers = std::move(powers);
  }

  DualState state = initial_dual_state(scenario, options);
  DualState best_price_state = state;
  double min_dual_nats = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;

  while (iterations < options.max_iters && !converged) {
    const DualEvaluation eval = evaluate_dual(scenario, state, options.mapping);
    ++iterations;
    if (eval.dual_value_nats < min_dual_nats) {
      min_dual_nats = eval.dual_value_nats;
      best_price_state = state;
    }

    AllocationResult primal = recover_feasible(scenario, eval);
    if (primal.sum_rate > best.sum_rate) {
      best = std::move(primal);
    }

    converged = scaled_subgradient_norm(scenario, eval) < options.tolerance;
    if (!converged) {
      state = update_duals(scenario, state, eval);
    }
  }

  AllocationResult result = finalize_result(scenario, std::move(best.assignment),
                                            std::move(best.powers));

  // The heuristic mapping inside the loop under-estimates the dual value,
  // which would make the gap estimate invalid as a bound. Where the pair
  // matchings can be enumerated, recompute the inner maximum exactly at the
  // best prices visited and descend locally in log-price space to tighten
  // the bound. Every exact evaluation is a valid bound, so the refinement
  // can only improve the estimate.
  double dual_bound_nats = min_dual_nats;
  if (matching_count(scenario.m_count, scenario.n_count, scenario.k_count) <=
      kExactBoundMatchingCap) {
    auto bound_at = [&](const DualState& st) {
      return exact_assignment(solve_all_triples(scenario, st).value).value +
             budget_price_constant(scenario, st);
    };
    DualState probe = best_price_state;
    const DualState init = initial_dual_state(scenario, options);
    double current = bound_at(probe);
    int evals = 1;
    double step = 0.5;
    while (step >= 1e-3 && evals < 200) {
      bool improved = false;
      for (int d = 0; d <= scenario.m_count && evals < 200; ++d) {
        for (double sign : {1.0, -1.0}) {
          DualState candidate = probe;
          if (d == 0) {
            candidate.lambda_bs =
                std::max(candidate.lambda_bs, init.lambda_bs / 1000.0) *
                std::exp(sign * step);
          } else {
            candidate.lambda_uue[d - 1] =
                std::max(candidate.lambda_uue[d - 1],
                         init.lambda_uue[d - 1] / 1000.0) *
                std::exp(sign * step);
          }
          const double value = bound_at(candidate);
          ++evals;
          if (value < current) {
            current = value;
            probe = candidate;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    dual_bound_nats = current;

    // The tightest bound's own maximizing assignment is a strong primal
    // candidate; score it like any other recovered iterate.
    const TripleSolves solves = solve_all_triples(scenario, probe);
    DualEvaluation exact_eval;
    exact_eval.assignment = exact_assignment(solves.value).assignment;
    exact_eval.consumed_uue_power = Eigen::VectorXd::Zero(scenario.m_count);
    for (const Triple& t : exact_eval.assignment.triples()) {
      exact_eval.powers[t] = {solves.p_up(t.m, t.n, t.k),
                              solves.p_down(t.m, t.n, t.k)};
      exact_eval.consumed_bs_power += solves.p_down(t.m, t.n, t.k);
      exact_eval.consumed_uue_power[t.m] += solves.p_up(t.m, t.n, t.k);
    }
    AllocationResult exact_primal = recover_feasible(scenario, exact_eval);
    AllocationResult polished = finalize_result(
        scenario, std::move(exact_primal.assignment),
        std::move(exact_primal.powers));
    if (polished.sum_rate > result.sum_rate) {
      result = std::move(polished);
    }
  }

  result.diagnostics.iterations = iterations;
  result.diagnostics.dual_gap =
      dual_bound_nats / std::numbers::ln2 - result.sum_rate;
  result.diagnostics.wall_time_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace fdra
