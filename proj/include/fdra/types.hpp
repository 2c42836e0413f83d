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

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdra {

/// One (uplink user, downlink user, subchannel) combination sharing a band.
struct Triple {
  int m = 0;  ///< uplink-user index
  int n = 0;  ///< downlink-user index
  int k = 0;  ///< subchannel index

  auto operator<=>(const Triple&) const = default;
};

std::string to_string(const Triple& t);

/// Transmit powers of one assigned triple, in watts.
struct PairPowers {
  double p_up = 0.0;
  double p_down = 0.0;

  bool operator==(const PairPowers&) const = default;
};

using PowerMap = std::map<Triple, PairPowers>;

/// Dense M x N x K array with row-major (m, n, k) layout.
template <class Scalar>
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(Eigen::Index d0, Eigen::Index d1, Eigen::Index d2)
      : d0_(d0), d1_(d1), d2_(d2),
        data_(Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(d0 * d1 * d2)) {
    if (d0 < 1 || d1 < 1 || d2 < 1) {
      throw std::invalid_argument("Tensor3: all dimensions must be >= 1");
    }
  }

  static Tensor3 constant(Eigen::Index d0, Eigen::Index d1, Eigen::Index d2,
                          Scalar value) {
    Tensor3 t(d0, d1, d2);
    t.data_.setConstant(value);
    return t;
  }

  Scalar& operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    return data_[(i * d1_ + j) * d2_ + k];
  }
  Scalar operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return data_[(i * d1_ + j) * d2_ + k];
  }

  Eigen::Index dim0() const { return d0_; }
  Eigen::Index dim1() const { return d1_; }
  Eigen::Index dim2() const { return d2_; }

  const Eigen::Vector<Scalar, Eigen::Dynamic>& flat() const { return data_; }
  Eigen::Vector<Scalar, Eigen::Dynamic>& flat() { return data_; }

  bool operator==(const Tensor3& o) const {
    return d0_ == o.d0_ && d1_ == o.d1_ && d2_ == o.d2_ &&
           (data_.array() == o.data_.array()).all();
  }

 private:
  Eigen::Index d0_ = 0, d1_ = 0, d2_ = 0;
  Eigen::Vector<Scalar, Eigen::Dynamic> data_;
};

using Tensor3d = Tensor3<double>;

/// A full problem instance: dimensions, per-link channel power gains,
/// noise/self-interference variances, and power budgets. All quantities are
/// linear (watts / dimensionless gain); dB appears only at configuration
/// boundaries.
struct Scenario {
  int m_count = 0;  ///< number of uplink users (M)
  int n_count = 0;  ///< number of downlink users (N)
  int k_count = 0;  ///< number of subchannels (K)

  Eigen::MatrixXd gain_up;    ///< M x K, uplink-user -> base-station
  Eigen::MatrixXd gain_down;  ///< N x K, base-station -> downlink-user
  Tensor3d gain_cross;        ///< M x N x K, uplink-user -> downlink-user

  double sigma_si_sq = 0.0;   ///< residual self-interference variance at BS, W
  double sigma_bs_sq = 0.0;   ///< BS receiver noise variance, W
  double sigma_due_sq = 0.0;  ///< downlink-user receiver noise variance, W

  double p_bs_max = 0.0;        ///< BS total power budget, W
  Eigen::VectorXd p_uue_max;    ///< per-uplink-user power budget, W

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Number of triples in a complete assignment: min(M, N, K).
  int assignable_triples() const;

  bool operator==(const Scenario& o) const;
};

/// Support of the binary assignment tensor: a set of (m, n, k) triples in
/// which no user or subchannel index repeats. Triples are kept sorted by m.
class Assignment3D {
 public:
  Assignment3D() = default;
  /// Throws std::invalid_argument if any coordinate repeats across triples
  /// or any index is negative.
  explicit Assignment3D(std::vector<Triple> triples);

  const std::vector<Triple>& triples() const { return triples_; }
  int size() const { return static_cast<int>(triples_.size()); }
  bool empty() const { return triples_.empty(); }

  /// Checks index ranges against the given dimensions and, when
  /// require_complete is set, that exactly min(M, N, K) triples are present.
  void validate(int m_count, int n_count, int k_count,
                bool require_complete = true) const;

  bool operator==(const Assignment3D&) const = default;

 private:
  std::vector<Triple> triples_;
};

/// Per-budget consumption report from check_budgets.
struct BudgetReport {
  struct Entry {
    double consumed = 0.0;
    double budget = 0.0;
    bool satisfied = true;
  };
  Entry bs;
  std::vector<Entry> uue;

  bool all_satisfied() const;
};

struct SolveDiagnostics {
  int iterations = 0;
  double dual_gap = 0.0;  ///< bits/s/Hz; best dual value minus best primal
  double wall_time_ms = 0.0;
};

/// A complete solver answer: assignment, powers, rate decomposition, and
/// solver diagnostics. Rates are spectral efficiencies in bits/s/Hz.
struct AllocationResult {
  Assignment3D assignment;
  PowerMap powers;
  std::map<Triple, double> per_pair_rate;
  double sum_rate = 0.0;
  SolveDiagnostics diagnostics;

  /// Consistency check: sum_rate matches the per-pair decomposition within
  /// 1e-9 relative and every powered triple is assigned. Throws on violation.
  void validate() const;
};

}  // namespace fdra
