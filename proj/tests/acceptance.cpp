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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "fdra/baselines.hpp"
#include "fdra/channel.hpp"
#include "fdra/dual_opt.hpp"
#include "fdra/experiment.hpp"
#include "fdra/hungarian.hpp"
#include "fdra/mapping3d.hpp"
#include "fdra/power_kkt.hpp"
#include "fdra/rates.hpp"
#include "fdra/rng.hpp"
#include "support/oracles.hpp"

using namespace fdra;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", index,
              name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Scenario cell_scenario(int m, int n, int k, std::uint64_t seed,
                       double pb_dbm = 20.0) {
  CellConfig c;
  c.m_count = m;
  c.n_count = n;
  c.k_count = k;
  c.p_bs_dbm = pb_dbm;
  c.seed = seed;
  return generate_scenario(c).scenario;
}

// ---------------------------------------------------------------------------
// 1. Hungarian exactness against the permutation brute force.
void criterion_hungarian() {
  SeededRng rng(1001);
  int checked = 0;
  double worst = 0.0;
  bool pass = true;
  const auto start = std::chrono::steady_clock::now();
  for (int it = 0; it < 1000 && pass; ++it) {
    const int rows = 1 + static_cast<int>(rng.uniform_index(7));
    const int cols = 1 + static_cast<int>(rng.uniform_index(7));
    const bool integer = (it % 2) == 0;
    RewardMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        m(r, c) = integer ? static_cast<double>(
                                static_cast<int>(rng.uniform_index(201)) - 100)
                          : rng.uniform(-50.0, 50.0);
      }
    }
    const double got = assignment_reward(m, solve_assignment(m));
    const double want = fdra::testing::brute_force_max_reward(m);
    const double err = std::abs(got - want);
    worst = std::max(worst, err);
    if (integer ? (err != 0.0) : (err > 1e-9)) pass = false;
    ++checked;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  report(1, "hungarian exactness", pass,
         fmt("%d matrices up to 7x7, worst |error| %.3g, %.2f s", checked,
             worst, secs));
}

// ---------------------------------------------------------------------------
// 2 & 3. Mapping near-optimality and per-step monotonicity on the same
// instances.
void criterion_mapping() {
  int instances = 0, good_ratio = 0, above = 0, monotone_violations = 0;
  double worst_ratio = 1.0;

  auto run_block = [&](int dim, int count, std::uint64_t seed_base) {
    for (int i = 0; i < count; ++i) {
      const Scenario s = cell_scenario(dim, dim, dim, seed_base + i);
      const RateTensor tensor = equal_power_rate_tensor(s);
      const double best = fdra::testing::brute_force_best_3d(tensor);

      Assignment3D x = initial_assignment(dim, dim, dim);
      double value = assignment_value(tensor, x);
      for (FreeDimension step :
           {FreeDimension::subchannel, FreeDimension::due, FreeDimension::uue,
            FreeDimension::subchannel, FreeDimension::due}) {
        x = reassign_one_dimension(tensor, x, step);
        const double next = assignment_value(tensor, x);
        if (next < value - 1e-9) ++monotone_violations;
        value = next;
      }

      ++instances;
      if (value > best + 1e-9) ++above;
      const double ratio = value / best;
      worst_ratio = std::min(worst_ratio, ratio);
      if (ratio >= 0.95) ++good_ratio;
    }
  };
  run_block(3, 200, 2001);
  run_block(4, 100, 3001);

  const double frac = static_cast<double>(good_ratio) / instances;
  report(2, "3D mapping near-optimality", frac >= 0.90 && above == 0,
         fmt("%d/%d instances >= 95%% of exhaustive (%.1f%%), worst ratio "
             "%.4f, %d above optimum",
             good_ratio, instances, 100.0 * frac, worst_ratio, above));
  report(3, "mapping objective monotone over the five solves",
         monotone_violations == 0,
         fmt("%d violations over %d instances x 5 steps", monotone_violations,
             instances));
}

// ---------------------------------------------------------------------------
// 4. Closed-form power solutions against a 400x400 geometric grid.
void criterion_kkt() {
  SeededRng rng(4001);
  int oracle_ok = 0, residual_bad = 0, formula_bad = 0, interior_seen = 0;
  double worst_gap = 0.0;
  const int cases = 1000;
  const auto start = std::chrono::steady_clock::now();

  for (int it = 0; it < cases; ++it) {
    PairCoefficients c;
    c.a_mb = std::pow(10.0, rng.uniform(-2.0, 3.0));
    c.a_bn = std::pow(10.0, rng.uniform(-2.0, 3.0));
    c.a_mn = std::pow(10.0, rng.uniform(-3.0, 2.0));
    c.lambda_m = std::pow(10.0, rng.uniform(-3.0, 1.5));
    c.lambda_b = std::pow(10.0, rng.uniform(-3.0, 1.5));

    // Water-filling forms, recomputed verbatim.
    const auto up = solve_uplink_only(c);
    const double up_formula = 1.0 / c.lambda_m - 1.0 / c.a_mb;
    if (up_formula > 0.0) {
      if (!up || up->p_up != up_formula || up->p_down != 0.0) ++formula_bad;
    } else if (up) {
      ++formula_bad;
    }
    const auto down = solve_downlink_only(c);
    const double down_formula = 1.0 / c.lambda_b - 1.0 / c.a_bn;
    if (down_formula > 0.0) {
      if (!down || down->p_down != down_formula || down->p_up != 0.0) {
        ++formula_bad;
      }
    } else if (down) {
      ++formula_bad;
    }

    for (const PairPowers& p : solve_interior(c)) {
      ++interior_seen;
      const double r_down =
          1.0 + c.a_mn * p.p_up + p.p_down * c.a_bn - c.a_bn / c.lambda_b;
      const double d1 = p.p_up * c.a_mn + 1.0;
      const double r_up =
          c.a_mb / (p.p_up * c.a_mb + 1.0) - c.lambda_m -
          p.p_down * c.a_bn * c.a_mn / (d1 * (d1 + p.p_down * c.a_bn));
      if (std::abs(r_down) >= 1e-8 || std::abs(r_up) >= 1e-8) ++residual_bad;
    }

    const PairSolution sol = solve_pair(c);
    double grid_best = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double pu = std::pow(10.0, -6.0 + 9.0 * i / 399.0);
      for (int j = 0; j < 400; ++j) {
        const double pd = std::pow(10.0, -6.0 + 9.0 * j / 399.0);
        grid_best = std::max(grid_best, dual_objective(c, {pu, pd}));
      }
    }
    worst_gap = std::max(worst_gap, grid_best - sol.objective);
    if (sol.objective >= grid_best - 1e-4) ++oracle_ok;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  report(4, "closed-form power control",
         oracle_ok == cases && residual_bad == 0 && formula_bad == 0,
         fmt("%d/%d dominate the grid (worst gap %.2g), %d interior "
             "candidates (all residuals < 1e-8: %s), formula mismatches %d, "
             "%.1f s",
             oracle_ok, cases, worst_gap, interior_seen,
             residual_bad == 0 ? "yes" : "NO", formula_bad, secs));
}

// ---------------------------------------------------------------------------
// 5. Price-update fixtures.
void criterion_updates() {
  bool pass = true;
  std::string why = "all fixtures exact";

  Scenario s = cell_scenario(2, 2, 2, 5001);
  s.p_bs_max = 2.0;
  s.p_uue_max = Eigen::VectorXd::Constant(2, 1.0);

  DualState st;
  st.lambda_bs = 1.0;
  st.lambda_uue = Eigen::VectorXd::Constant(2, 0.5);
  st.step0 = 0.1;
  st.iteration = 1;

  DualEvaluation eval;
  eval.consumed_bs_power = 5.0;
  eval.consumed_uue_power = Eigen::VectorXd::Constant(2, 1.0);

  // One hand-computed step: 1 - 0.1*(2-5) = 1.3; matched consumption keeps
  // the per-user prices.
  const DualState one = update_duals(s, st, eval);
  if (one.lambda_bs != 1.3) { pass = false; why = "hand-computed step"; }
  if (one.lambda_uue[0] != 0.5) { pass = false; why = "zero subgradient"; }
  if (one.iteration != 2) { pass = false; why = "iteration counter"; }

  // Projection to zero under slack consumption and a big step.
  DualState low = st;
  low.lambda_bs = 1e-3;
  low.lambda_uue.setConstant(1e-3);
  low.step0 = 1.0;
  DualEvaluation idle;
  idle.consumed_bs_power = 0.0;
  idle.consumed_uue_power = Eigen::VectorXd::Zero(2);
  const DualState clamped = update_duals(s, low, idle);
  if (clamped.lambda_bs != 0.0 || clamped.lambda_uue[0] != 0.0) {
    pass = false;
    why = "projection at zero";
  }

  // Diminishing schedule step0 / sqrt(l), exact at every l.
  DualState walk = st;
  walk.step0 = 0.25;
  for (int l = 1; l <= 100 && pass; ++l) {
    const DualState next = update_duals(s, walk, eval);
    const double expected =
        walk.lambda_bs +
        0.25 / std::sqrt(static_cast<double>(l)) * (5.0 - 2.0);
    if (next.lambda_bs != expected) {
      pass = false;
      why = fmt("step size at l=%d", l);
    }
    walk = next;
  }

  report(5, "subgradient update fixtures", pass, why);
}

// ---------------------------------------------------------------------------
// 6 & 7. Joint-solver feasibility, and joint vs equal power at the
// paper-scale operating point.
void criterion_joint_vs_equal() {
  const int trials = 100;
  int feasible = 0, wins = 0;
  double joint_mean = 0.0, equal_mean = 0.0;
  const auto start = std::chrono::steady_clock::now();

  for (int trial = 0; trial < trials; ++trial) {
    const Scenario s = cell_scenario(8, 8, 64, 7001 + trial, 20.0);

    const AllocationResult joint = solve_joint(s);
    if (check_budgets(s, joint.assignment, joint.powers).all_satisfied()) {
      ++feasible;
    }

    const Assignment3D mapping = optimize_3d(equal_power_rate_tensor(s));
    const double equal = total_rate(s, mapping, equal_power(s, mapping));

    joint_mean += joint.sum_rate / trials;
    equal_mean += equal / trials;
    if (joint.sum_rate >= equal) ++wins;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();

  report(6, "joint allocations satisfy both budget families",
         feasible == trials, fmt("%d/%d feasible within 1e-6", feasible,
                                 trials));
  report(7, "joint power control beats equal power",
         joint_mean >= equal_mean && wins >= 95,
         fmt("mean %.2f vs %.2f bits/s/Hz, per-instance wins %d/%d, %.0f s",
             joint_mean, equal_mean, wins, trials, secs));
}

// ---------------------------------------------------------------------------
// 8. Joint solver against a grid-exhaustive oracle on 2x2x2 instances.
void criterion_joint_vs_oracle() {
  const int trials = 100;
  int good = 0;
  double worst_ratio = 1.0;
  const auto start = std::chrono::steady_clock::now();

  for (int trial = 0; trial < trials; ++trial) {
    const Scenario s = cell_scenario(2, 2, 2, 8001 + trial, 20.0);
    const AllocationResult joint = solve_joint(s);

    // Oracle: every assignment, BS budget split on a grid, each uplink
    // power on its own grid; pure rate maximization under the budgets.
    double oracle = 0.0;
    fdra::testing::enumerate_complete_assignments(
        2, 2, 2, [&](const std::vector<Triple>& triples) {
          const int grid = 200;
          for (int i = 0; i <= grid; ++i) {
            const double f = static_cast<double>(i) / grid;
            const double pd[2] = {f * s.p_bs_max, (1.0 - f) * s.p_bs_max};
            double total = 0.0;
            for (int t = 0; t < 2; ++t) {
              double best_triple = 0.0;
              for (int u = 0; u <= grid; ++u) {
                const double pu =
                    s.p_uue_max[triples[t].m] * static_cast<double>(u) / grid;
                best_triple = std::max(
                    best_triple, pair_rate(s, triples[t], {pu, pd[t]}));
              }
              total += best_triple;
            }
            oracle = std::max(oracle, total);
          }
        });

    const double ratio = joint.sum_rate / oracle;
    worst_ratio = std::min(worst_ratio, ratio);
    if (ratio >= 0.95) ++good;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  report(8, "joint solver approaches the exhaustive upper bound",
         good >= 90,
         fmt("%d/%d instances >= 95%% of the oracle, worst ratio %.4f, %.0f s",
             good, trials, worst_ratio, secs));
}

// ---------------------------------------------------------------------------
// 9. Scheme ordering across the budget sweep.
void criterion_ordering() {
  const std::vector<double> budgets{10.0, 15.0, 20.0, 25.0, 30.0};
  const int trials = 100;
  bool pass = true;
  std::ostringstream detail;

  // Paper-scale cells: proposed vs greedy vs random (exhaustive cannot run).
  for (double pb : budgets) {
    double prop = 0.0, greedy = 0.0, random_rate = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      const Scenario s = cell_scenario(8, 8, 64, 9001 + trial, pb);
      const Assignment3D p = optimize_3d(equal_power_rate_tensor(s));
      prop += total_rate(s, p, equal_power(s, p));
      const Assignment3D g = greedy_mapping(s, equal_power_rule());
      greedy += total_rate(s, g, equal_power(s, g));
      const Assignment3D r = random_mapping(s, 77000 + trial);
      random_rate += total_rate(s, r, equal_power(s, r));
    }
    if (!(prop >= greedy && prop >= random_rate)) pass = false;
    detail << fmt("%g dBm: %.1f/%.1f/%.1f ", pb, prop / trials,
                  greedy / trials, random_rate / trials);
  }

  // 4x4x4 cells where the exhaustive baseline is tractable.
  bool exhaustive_ok = true;
  for (double pb : budgets) {
    double ex = 0.0, prop = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      const Scenario s = cell_scenario(4, 4, 4, 9501 + trial, pb);
      ex += exhaustive_search(s, equal_power).sum_rate;
      const Assignment3D p = optimize_3d(equal_power_rate_tensor(s));
      prop += total_rate(s, p, equal_power(s, p));
    }
    if (!(ex >= prop)) exhaustive_ok = false;
  }

  report(9, "scheme ordering (proposed >= greedy, random; exhaustive >= "
            "proposed)",
         pass && exhaustive_ok,
         fmt("means prop/greedy/random per budget: %s; exhaustive dominates "
             "on 4x4x4: %s",
             detail.str().c_str(), exhaustive_ok ? "yes" : "NO"));
}

// ---------------------------------------------------------------------------
// 10. Duality-gap trend across the subchannel counts.
void criterion_gap_trend() {
  const std::vector<int> ks{8, 16, 32, 64};
  std::vector<double> mean_gap;
  const auto start = std::chrono::steady_clock::now();
  for (int k : ks) {
    double gap = 0.0;
    const int trials = 50;
    for (int trial = 0; trial < trials; ++trial) {
      const Scenario s = cell_scenario(4, 4, k, 10001 + trial, 20.0);
      const AllocationResult r = solve_joint(s);
      gap += r.diagnostics.dual_gap / r.sum_rate / trials;
    }
    mean_gap.push_back(gap);
  }
  bool nonincreasing = true;
  for (std::size_t i = 1; i < mean_gap.size(); ++i) {
    if (mean_gap[i] > mean_gap[i - 1]) nonincreasing = false;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  report(10, "relative duality gap shrinks with more subchannels",
         nonincreasing,
         fmt("mean relative gap over K=8,16,32,64: %.4f %.4f %.4f %.4f, %.0f s",
             mean_gap[0], mean_gap[1], mean_gap[2], mean_gap[3], secs));
}

// ---------------------------------------------------------------------------
// 11. End-to-end sweep on the shipped fixture: runtime and byte-identity.
void criterion_sweep(const std::filesystem::path& fixture) {
  const ExperimentConfig config = load_config(fixture);
  const auto out1 = std::filesystem::temp_directory_path() / "fdra-acc-1.csv";
  const auto out2 = std::filesystem::temp_directory_path() / "fdra-acc-2.csv";

  const auto start = std::chrono::steady_clock::now();
  run_sweep(config, out1, thread_cap_from_env());
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  run_sweep(config, out2, thread_cap_from_env());

  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const std::string a = slurp(out1), b = slurp(out2);
  const bool identical = !a.empty() && a == b;
  std::filesystem::remove(out1);
  std::filesystem::remove(out2);

  report(11, "fixture sweep under 10 minutes, byte-identical reruns",
         secs < 600.0 && identical,
         fmt("first run %.0f s, %zu bytes, rerun identical: %s", secs,
             a.size(), identical ? "yes" : "NO"));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: fdra_acceptance <paper_v.json>\n");
    return 2;
  }
  criterion_hungarian();
  criterion_mapping();
  criterion_kkt();
  criterion_updates();
  criterion_joint_vs_equal();
  criterion_joint_vs_oracle();
  criterion_ordering();
  criterion_gap_trend();
  criterion_sweep(argv[1]);
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", g_failures);
  }
  return g_failures;
}
