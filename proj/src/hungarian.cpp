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

#include "fdra/hungarian.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fdra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Zero-test tolerance for reduced costs, scaled by the matrix magnitude.
constexpr double kZeroEps = 1e-12;

// Kuhn-Munkres with row potentials and shortest augmenting paths on a square
// cost matrix (minimization). Returns per-column matched row in `col_match`
// and final potentials in `u`, `v`; matched edges are tight and all reduced
// costs cost(i,j) - u[i] - v[j] are >= 0 up to rounding.
void solve_square_min(const Eigen::MatrixXd& cost, std::vector<int>& col_match,
                      std::vector<double>& u, std::vector<double>& v) {
  const int n = static_cast<int>(cost.rows());
  u.assign(n, 0.0);
  v.assign(n + 1, 0.0);        // v[n] is the virtual start column
  col_match.assign(n + 1, -1); // col_match[n] holds the row being inserted

  std::vector<double> min_reduced(n);
  std::vector<int> parent_col(n);
  std::vector<char> used(n + 1);

  for (int row = 0; row < n; ++row) {
    col_match[n] = row;
    int j0 = n;
    min_reduced.assign(n, kInf);
    parent_col.assign(n, -1);
    used.assign(n + 1, 0);
    // Dijkstra over columns with potential-adjusted edge costs.
    do {
      used[j0] = 1;
      const int i0 = col_match[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < min_reduced[j]) {
          min_reduced[j] = cur;
          parent_col[j] = j0;
        }
        if (min_reduced[j] < delta) {
          delta = min_reduced[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_match[j]] += delta;
          v[j] -= delta;
        } else {
          min_reduced[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_match[j0] != -1);
    // Augment along the stored parent chain.
    while (j0 != n) {
      const int jp = parent_col[j0];
      col_match[j0] = col_match[jp];
      j0 = jp;
    }
  }
}

// DFS step of the tie-break rerouting: move `row` onto some unvisited tight
// column, displacing unlocked owners recursively. Commits on success.
bool reroute(int row, const std::vector<std::vector<int>>& tight,
             const std::vector<char>& locked, std::vector<int>& row_match,
             std::vector<int>& col_match, std::vector<char>& visited) {
  for (int c : tight[row]) {
    if (visited[c]) continue;
    visited[c] = 1;
    const int owner = col_match[c];
    if (owner == row) continue;
    if (owner == -1) {
      row_match[row] = c;
      col_match[c] = row;
      return true;
    }
    if (locked[owner]) continue;
    if (reroute(owner, tight, locked, row_match, col_match, visited)) {
      row_match[row] = c;
      col_match[c] = row;
      return true;
    }
  }
  return false;
}

// Replaces the matching with the lexicographically smallest optimal one.
// All optimal assignments use only edges that are tight under the final
// potentials, so the search is a greedy sweep over rows with reachability
// checks inside the tight-edge subgraph.
void lexicographic_tiebreak(const Eigen::MatrixXd& cost, int real_rows,
                            const std::vector<double>& u,
                            const std::vector<double>& v,
                            std::vector<int>& row_match,
                            std::vector<int>& col_match) {
  const int n = static_cast<int>(cost.rows());
  const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const double eps = kZeroEps * scale;

  std::vector<std::vector<int>> tight(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (cost(i, j) - u[i] - v[j] <= eps || row_match[i] == j) {
        tight[i].push_back(j);
      }
    }
  }

  std::vector<char> locked(n, 0);
  std::vector<char> visited(n);
  for (int r = 0; r < real_rows; ++r) {
    for (int c : tight[r]) {
      if (c >= row_match[r]) break;
      const int displaced = col_match[c];
      if (displaced != -1 && locked[displaced]) continue;
      // Tentatively take column c and try to re-home its current owner.
      const int old_col = row_match[r];
      row_match[r] = c;
      col_match[c] = r;
      col_match[old_col] = -1;
      if (displaced == -1) break;
      row_match[displaced] = -1;
      visited.assign(n, 0);
      visited[c] = 1;
      if (reroute(displaced, tight, locked, row_match, col_match, visited)) {
        break;
      }
      row_match[r] = old_col;
      col_match[old_col] = r;
      col_match[c] = displaced;
      row_match[displaced] = c;
    }
    locked[r] = 1;
  }
}

}  // namespace

std::vector<std::pair<int, int>> solve_assignment(const RewardMatrix& rewards) {
  if (rewards.rows() == 0 || rewards.cols() == 0) {
    throw std::invalid_argument("solve_assignment: empty reward matrix");
  }
  if (!rewards.allFinite()) {
    throw std::invalid_argument(
        "solve_assignment: reward matrix has non-finite entries");
  }

  const bool transposed = rewards.rows() > rewards.cols();
  Eigen::MatrixXd r = rewards;
  if (transposed) r.transposeInPlace();
  const int real_rows = static_cast<int>(r.rows());
  const int n = static_cast<int>(r.cols());

  // Maximization as minimization on a square matrix; dummy rows carry zero
  // reward so every column can be matched.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  cost.topRows(real_rows) = -r;

  std::vector<int> col_match;
  std::vector<double> u, v;
  solve_square_min(cost, col_match, u, v);

  std::vector<int> row_match(n, -1);
  for (int j = 0; j < n; ++j) {
    if (col_match[j] >= 0) row_match[col_match[j]] = j;
  }

  lexicographic_tiebreak(cost, real_rows, u, v, row_match, col_match);

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(real_rows);
  for (int i = 0; i < real_rows; ++i) {
    if (transposed) {
      pairs.emplace_back(row_match[i], i);
    } else {
      pairs.emplace_back(i, row_match[i]);
    }
  }
  if (transposed) {
    std::sort(pairs.begin(), pairs.end());
  }
  return pairs;
}

double assignment_reward(const RewardMatrix& rewards,
                         const std::vector<std::pair<int, int>>& pairs) {
  double total = 0.0;
  for (const auto& [row, col] : pairs) total += rewards(row, col);
  return total;
}

}  // namespace fdra
