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

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace fdra {

/// Rectangular reward matrix for maximum-reward 2D assignment. The solver
/// normalizes to rows <= cols by transposition at the boundary.
using RewardMatrix = Eigen::MatrixXd;

/// Exact maximum-reward assignment. With R = min(rows, cols) the result has
/// exactly R pairs covering every index of the short side once and the long
/// side at most once, in the matrix's original orientation, sorted by row.
///
/// Among equal-reward optima the lexicographically smallest (row, col)
/// sequence is returned, taken in the rows <= cols orientation.
///
/// Throws std::invalid_argument on an empty matrix or non-finite entries.
std::vector<std::pair<int, int>> solve_assignment(const RewardMatrix& rewards);

/// Total reward of a pair list against a matrix.
double assignment_reward(const RewardMatrix& rewards,
                         const std::vector<std::pair<int, int>>& pairs);

}  // namespace fdra
