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

#include "fdra/mapping3d.hpp"

#include <algorithm>
#include <stdexcept>

#include "fdra/hungarian.hpp"
#include "fdra/rng.hpp"

namespace fdra {

namespace {

void check_dims(const RateTensor& tensor, const Assignment3D& current) {
  current.validate(static_cast<int>(tensor.dim0()),
                   static_cast<int>(tensor.dim1()),
                   static_cast<int>(tensor.dim2()));
}

}  // namespace

Assignment3D initial_assignment(int m_count, int n_count, int k_count) {
  const int t = std::min(m_count, std::min(n_count, k_count));
  std::vector<Triple> triples;
  triples.reserve(t);
  for (int i = 0; i < t; ++i) triples.push_back({i, i, i});
  return Assignment3D(std::move(triples));
}

Assignment3D random_complete_assignment(int m_count, int n_count, int k_count,
                                        std::uint64_t seed) {
  const int t = std::min(m_count, std::min(n_count, k_count));
  SeededRng rng(seed);
  const std::vector<int> ms = rng.permutation(m_count);
  const std::vector<int> ns = rng.permutation(n_count);
  const std::vector<int> ks = rng.permutation(k_count);
  std::vector<Triple> triples;
  triples.reserve(t);
  for (int i = 0; i < t; ++i) triples.push_back({ms[i], ns[i], ks[i]});
  return Assignment3D(std::move(triples));
}

double assignment_value(const RateTensor& tensor,
                        const Assignment3D& assignment) {
  double total = 0.0;
  for (const Triple& t : assignment.triples()) {
    total += tensor(t.m, t.n, t.k);
  }
  return total;
}

Assignment3D reassign_one_dimension(const RateTensor& tensor,
                                    const Assignment3D& current,
                                    FreeDimension free_dim) {
  check_dims(tensor, current);
  const auto& triples = current.triples();
  const int pairs = static_cast<int>(triples.size());

  Eigen::Index free_size = 0;
  switch (free_dim) {
    case FreeDimension::subchannel: free_size = tensor.dim2(); break;
    case FreeDimension::due:        free_size = tensor.dim1(); break;
    case FreeDimension::uue:        free_size = tensor.dim0(); break;
  }

  // Rows are the locked pairs in the sorted order of `triples`; columns are
  // the free dimension's indices.
  RewardMatrix rewards(pairs, free_size);
  for (int r = 0; r < pairs; ++r) {
    const Triple& t = triples[r];
    for (Eigen::Index f = 0; f < free_size; ++f) {
      switch (free_dim) {
        case FreeDimension::subchannel:
          rewards(r, f) = tensor(t.m, t.n, f);
          break;
        case FreeDimension::due:
          rewards(r, f) = tensor(t.m, f, t.k);
          break;
        case FreeDimension::uue:
          rewards(r, f) = tensor(f, t.n, t.k);
          break;
      }
    }
  }

  const auto matching = solve_assignment(rewards);
  std::vector<Triple> reassigned;
  reassigned.reserve(pairs);
  for (const auto& [row, col] : matching) {
    Triple t = triples[row];
    switch (free_dim) {
      case FreeDimension::subchannel: t.k = static_cast<int>(col); break;
      case FreeDimension::due:        t.n = static_cast<int>(col); break;
      case FreeDimension::uue:        t.m = static_cast<int>(col); break;
    }
    reassigned.push_back(t);
  }
  return Assignment3D(std::move(reassigned));
}

Assignment3D optimize_3d(const RateTensor& tensor,
                         const Mapping3dOptions& options) {
  if (!tensor.flat().allFinite()) {
    throw std::invalid_argument("optimize_3d: tensor has non-finite entries");
  }
  const int m = static_cast<int>(tensor.dim0());
  const int n = static_cast<int>(tensor.dim1());
  const int k = static_cast<int>(tensor.dim2());

  Assignment3D x = options.initial == Mapping3dOptions::InitialMode::diagonal
                       ? initial_assignment(m, n, k)
                       : random_complete_assignment(m, n, k,
                                                    options.random_seed);

  const FreeDimension steps[5] = {
      FreeDimension::subchannel, FreeDimension::due, FreeDimension::uue,
      FreeDimension::subchannel, FreeDimension::due};
  for (FreeDimension step : steps) {
    x = reassign_one_dimension(tensor, x, step);
  }

  if (options.iteration == Mapping3dOptions::IterationMode::converged) {
    for (int cycle = 0; cycle < options.max_extra_cycles; ++cycle) {
      const double before = assignment_value(tensor, x);
      x = reassign_one_dimension(tensor, x, FreeDimension::uue);
      x = reassign_one_dimension(tensor, x, FreeDimension::subchannel);
      x = reassign_one_dimension(tensor, x, FreeDimension::due);
      if (assignment_value(tensor, x) - before < options.convergence_tol) {
        break;
      }
    }
  }
  return x;
}

}  // namespace fdra
