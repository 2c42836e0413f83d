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

#include "fdra/rates.hpp"
#include "fdra/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace fdra {

namespace {

constexpr double kBudgetRelTol = 1e-6;

bool all_finite_nonneg(const Eigen::MatrixXd& m) {
  return m.allFinite() && (m.array() >= 0.0).all();
}

}  // namespace

std::string to_string(const Triple& t) {
  std::ostringstream os;
  os << "(" << t.m << ", " << t.n << ", " << t.k << ")";
  return os.str();
}

void Scenario::validate() const {
  if (m_count < 1) throw std::invalid_argument("Scenario: m_count must be >= 1");
  if (n_count < 1) throw std::invalid_argument("Scenario: n_count must be >= 1");
  if (k_count < 1) throw std::invalid_argument("Scenario: k_count must be >= 1");
  if (gain_up.rows() != m_count || gain_up.cols() != k_count) {
    throw std::invalid_argument("Scenario: gain_up must be m_count x k_count");
  }
  if (gain_down.rows() != n_count || gain_down.cols() != k_count) {
    throw std::invalid_argument("Scenario: gain_down must be n_count x k_count");
  }
  if (gain_cross.dim0() != m_count || gain_cross.dim1() != n_count ||
      gain_cross.dim2() != k_count) {
    throw std::invalid_argument(
        "Scenario: gain_cross must be m_count x n_count x k_count");
  }
  if (!all_finite_nonneg(gain_up)) {
    throw std::invalid_argument("Scenario: gain_up entries must be finite and >= 0");
  }
  if (!all_finite_nonneg(gain_down)) {
    throw std::invalid_argument("Scenario: gain_down entries must be finite and >= 0");
  }
  if (!gain_cross.flat().allFinite() || (gain_cross.flat().array() < 0.0).any()) {
    throw std::invalid_argument("Scenario: gain_cross entries must be finite and >= 0");
  }
  if (!std::isfinite(sigma_si_sq) || sigma_si_sq <= 0.0) {
    throw std::invalid_argument("Scenario: sigma_si_sq must be finite and > 0");
  }
  if (!std::isfinite(sigma_bs_sq) || sigma_bs_sq <= 0.0) {
    throw std::invalid_argument("Scenario: sigma_bs_sq must be finite and > 0");
  }
  if (!std::isfinite(sigma_due_sq) || sigma_due_sq <= 0.0) {
    throw std::invalid_argument("Scenario: sigma_due_sq must be finite and > 0");
  }
  if (!std::isfinite(p_bs_max) || p_bs_max <= 0.0) {
    throw std::invalid_argument("Scenario: p_bs_max must be finite and > 0");
  }
  if (p_uue_max.size() != m_count) {
    throw std::invalid_argument("Scenario: p_uue_max must have m_count entries");
  }
  if (!p_uue_max.allFinite() || (p_uue_max.array() <= 0.0).any()) {
    throw std::invalid_argument("Scenario: p_uue_max entries must be finite and > 0");
  }
}

int Scenario::assignable_triples() const {
  return std::min(m_count, std::min(n_count, k_count));
}

bool Scenario::operator==(const Scenario& o) const {
  return m_count == o.m_count && n_count == o.n_count && k_count == o.k_count &&
         gain_up.rows() == o.gain_up.rows() &&
         (gain_up.array() == o.gain_up.array()).all() &&
         gain_down.rows() == o.gain_down.rows() &&
         (gain_down.array() == o.gain_down.array()).all() &&
         gain_cross == o.gain_cross && sigma_si_sq == o.sigma_si_sq &&
         sigma_bs_sq == o.sigma_bs_sq && sigma_due_sq == o.sigma_due_sq &&
         p_bs_max == o.p_bs_max && p_uue_max.size() == o.p_uue_max.size() &&
         (p_uue_max.array() == o.p_uue_max.array()).all();
}

Assignment3D::Assignment3D(std::vector<Triple> triples)
    : triples_(std::move(triples)) {
  std::sort(triples_.begin(), triples_.end());
  std::set<int> ms, ns, ks;
  for (const Triple& t : triples_) {
    if (t.m < 0 || t.n < 0 || t.k < 0) {
      throw std::invalid_argument("Assignment3D: negative index in " +
                                  to_string(t));
    }
    if (!ms.insert(t.m).second || !ns.insert(t.n).second ||
        !ks.insert(t.k).second) {
      throw std::invalid_argument("Assignment3D: repeated index in " +
                                  to_string(t));
    }
  }
}

void Assignment3D::validate(int m_count, int n_count, int k_count,
                            bool require_complete) const {
  for (const Triple& t : triples_) {
    if (t.m >= m_count || t.n >= n_count || t.k >= k_count) {
      throw std::out_of_range("Assignment3D: triple " + to_string(t) +
                              " out of range");
    }
  }
  const int want = std::min(m_count, std::min(n_count, k_count));
  if (require_complete && size() != want) {
    throw std::invalid_argument(
        "Assignment3D: complete assignment requires " + std::to_string(want) +
        " triples, got " + std::to_string(size()));
  }
}

bool BudgetReport::all_satisfied() const {
  if (!bs.satisfied) return false;
  return std::all_of(uue.begin(), uue.end(),
                     [](const Entry& e) { return e.satisfied; });
}

void AllocationResult::validate() const {
  double sum = 0.0;
  for (const auto& [triple, rate] : per_pair_rate) sum += rate;
  const double tol = 1e-9 * std::max(1.0, std::abs(sum));
  if (std::abs(sum - sum_rate) > tol) {
    throw std::invalid_argument(
        "AllocationResult: sum_rate does not match per-pair decomposition");
  }
  const auto& ts = assignment.triples();
  for (const auto& [triple, powers] : powers) {
    if (!std::binary_search(ts.begin(), ts.end(), triple)) {
      throw std::invalid_argument("AllocationResult: powers for unassigned " +
                                  to_string(triple));
    }
  }
}

double pair_rate(const Scenario& scenario, const Triple& triple,
                 const PairPowers& powers) {
  if (triple.m < 0 || triple.m >= scenario.m_count || triple.n < 0 ||
      triple.n >= scenario.n_count || triple.k < 0 ||
      triple.k >= scenario.k_count) {
    throw std::out_of_range("pair_rate: triple " + to_string(triple) +
                            " out of range");
  }
  const double up =
      uplink_rate(powers.p_up, scenario.gain_up(triple.m, triple.k),
                  scenario.sigma_si_sq, scenario.sigma_bs_sq);
  const double down = downlink_rate(
      powers.p_down, powers.p_up, scenario.gain_down(triple.n, triple.k),
      scenario.gain_cross(triple.m, triple.n, triple.k), scenario.sigma_due_sq);
  return up + down;
}

double total_rate(const Scenario& scenario, const Assignment3D& assignment,
                  const PowerMap& powers) {
  double sum = 0.0;
  for (const Triple& t : assignment.triples()) {
    auto it = powers.find(t);
    if (it == powers.end()) {
      throw std::invalid_argument("total_rate: missing powers for triple " +
                                  to_string(t));
    }
    sum += pair_rate(scenario, t, it->second);
  }
  return sum;
}

BudgetReport check_budgets(const Scenario& scenario,
                           const Assignment3D& assignment,
                           const PowerMap& powers) {
  BudgetReport report;
  report.bs.budget = scenario.p_bs_max;
  report.uue.resize(scenario.m_count);
  for (int m = 0; m < scenario.m_count; ++m) {
    report.uue[m].budget = scenario.p_uue_max[m];
  }
  for (const Triple& t : assignment.triples()) {
    auto it = powers.find(t);
    if (it == powers.end()) continue;
    report.bs.consumed += it->second.p_down;
    report.uue[t.m].consumed += it->second.p_up;
  }
  auto within = [](const BudgetReport::Entry& e) {
    return e.consumed <= e.budget * (1.0 + kBudgetRelTol);
  };
  report.bs.satisfied = within(report.bs);
  for (auto& e : report.uue) e.satisfied = within(e);
  return report;
}

}  // namespace fdra
