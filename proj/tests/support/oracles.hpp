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

// Brute-force reference implementations for the test suites. Everything here
// is deliberately independent of the solver code paths it is used to check:
// plain recursion and exhaustive enumeration only.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <vector>

#include "fdra/types.hpp"

namespace fdra::testing {

// Maximum total reward of any assignment matching every row (rows <= cols)
// to a distinct column. Plain recursion over all column choices.
inline double brute_force_max_reward(const Eigen::MatrixXd& rewards) {
  const int rows = static_cast<int>(rewards.rows());
  const int cols = static_cast<int>(rewards.cols());
  if (rows > cols) return brute_force_max_reward(rewards.transpose());
  std::vector<char> used(cols, 0);
  std::function<double(int)> best_from = [&](int row) -> double {
    if (row == rows) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < cols; ++c) {
      if (used[c]) continue;
      used[c] = 1;
      best = std::max(best, rewards(row, c) + best_from(row + 1));
      used[c] = 0;
    }
    return best;
  };
  return best_from(0);
}

// Visits every set of min(M, N, K) disjoint triples exactly once.
inline void enumerate_complete_assignments(
    int m_count, int n_count, int k_count,
    const std::function<void(const std::vector<Triple>&)>& visit) {
  const int total = std::min(m_count, std::min(n_count, k_count));
  std::vector<Triple> chosen;
  std::vector<char> n_used(n_count, 0), k_used(k_count, 0);
  std::function<void(int, int)> recurse = [&](int depth, int next_m) {
    if (depth == total) {
      visit(chosen);
      return;
    }
    for (int m = next_m; m <= m_count - (total - depth); ++m) {
      for (int n = 0; n < n_count; ++n) {
        if (n_used[n]) continue;
        n_used[n] = 1;
        for (int k = 0; k < k_count; ++k) {
          if (k_used[k]) continue;
          k_used[k] = 1;
          chosen.push_back({m, n, k});
          recurse(depth + 1, m + 1);
          chosen.pop_back();
          k_used[k] = 0;
        }
        n_used[n] = 0;
      }
    }
  };
  recurse(0, 0);
}

// Best total tensor value over all complete assignments.
inline double brute_force_best_3d(const Tensor3d& tensor) {
  double best = -std::numeric_limits<double>::infinity();
  enumerate_complete_assignments(
      static_cast<int>(tensor.dim0()), static_cast<int>(tensor.dim1()),
      static_cast<int>(tensor.dim2()),
      [&](const std::vector<Triple>& triples) {
        double total = 0.0;
        for (const Triple& t : triples) total += tensor(t.m, t.n, t.k);
        best = std::max(best, total);
      });
  return best;
}

// Central finite difference.
inline double finite_difference(const std::function<double(double)>& f,
                                double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace fdra::testing
