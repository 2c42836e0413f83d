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

#include "fdra/types.hpp"

namespace fdra {

/// Fixed per-triple rewards driving the 3D assignment, M x N x K.
using RateTensor = Tensor3d;

/// Which axis is re-matched while the other two stay paired.
enum class FreeDimension { subchannel, due, uue };

struct Mapping3dOptions {
  enum class InitialMode { diagonal, random };
  enum class IterationMode { five_steps, converged };

  InitialMode initial = InitialMode::diagonal;
  IterationMode iteration = IterationMode::five_steps;
  std::uint64_t random_seed = 0;   ///< used by InitialMode::random
  int max_extra_cycles = 50;       ///< cap for IterationMode::converged
  double convergence_tol = 1e-9;
};

/// Deterministic starting point: the diagonal {(i, i, i) : i < min(M, N, K)}.
Assignment3D initial_assignment(int m_count, int n_count, int k_count);

/// Uniformly random complete assignment (used by the random-initial option).
Assignment3D random_complete_assignment(int m_count, int n_count, int k_count,
                                        std::uint64_t seed);

/// Total reward of an assignment under the tensor.
double assignment_value(const RateTensor& tensor,
                        const Assignment3D& assignment);

/// One exact 2D re-matching step: the two non-free dimensions keep their
/// current pairing, and the pairs are re-matched against the free dimension
/// by an exact assignment solve. The objective never decreases.
Assignment3D reassign_one_dimension(const RateTensor& tensor,
                                    const Assignment3D& current,
                                    FreeDimension free_dim);

/// Alternating 2D decomposition of the 3D assignment problem: starting from
/// the initial assignment, re-matches (subchannel, due, uue, subchannel, due)
/// — five exact 2D solves. IterationMode::converged appends full
/// (uue, subchannel, due) cycles until a cycle improves the objective by
/// less than convergence_tol.
Assignment3D optimize_3d(const RateTensor& tensor,
                         const Mapping3dOptions& options = {});

}  // namespace fdra
