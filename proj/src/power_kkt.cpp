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

#include "fdra/power_kkt.hpp"

#include <cmath>
#include <stdexcept>

namespace fdra {

namespace {

constexpr double kDegenerateQuadratic = 1e-14;

// Residuals of the two stationarity equations at an interior point:
//   r_down = 1 + a_mn p_up + a_bn p_down - a_bn / lambda_b
//   r_up   = a_mb / (p_up a_mb + 1) - lambda_m
//            - p_down a_bn a_mn / ((p_up a_mn + 1)(p_up a_mn + 1 + p_down a_bn))
struct Residuals {
  double r_down = 0.0;
  double r_up = 0.0;
};

Residuals stationarity_residuals(const PairCoefficients& c, double p_up,
                                 double p_down) {
  Residuals r;
  r.r_down = 1.0 + c.a_mn * p_up + c.a_bn * p_down - c.a_bn / c.lambda_b;
  const double d1 = p_up * c.a_mn + 1.0;
  const double d2 = d1 + p_down * c.a_bn;
  r.r_up = c.a_mb / (p_up * c.a_mb + 1.0) - c.lambda_m -
           p_down * c.a_bn * c.a_mn / (d1 * d2);
  return r;
}

// Worst-case residual magnitude at a point.
double residual_norm(const PairCoefficients& c, double p_up, double p_down) {
  const Residuals r = stationarity_residuals(c, p_up, p_down);
  return std::max(std::abs(r.r_down), std::abs(r.r_up));
}

// Newton refinement of an interior candidate on the 2x2 stationarity system.
// The quadratic's root is accurate in p_down, but back-substituting for p_up
// cancels catastrophically when a_mn is small; a few Newton steps restore
// full double accuracy. Keeps the best iterate seen and accepts it only if
// both residuals end below 1e-8, the module's stationarity contract.
bool polish_interior(const PairCoefficients& c, double& p_up, double& p_down) {
  double x = p_up, y = p_down;
  double best_x = x, best_y = y;
  double best = residual_norm(c, x, y);
  for (int it = 0; it < 25 && best > 1e-12; ++it) {
    const Residuals r = stationarity_residuals(c, x, y);
    const double d1 = x * c.a_mn + 1.0;
    const double d2 = d1 + y * c.a_bn;
    // Jacobian of (r_down, r_up) in (p_up, p_down).
    const double j00 = c.a_mn;
    const double j01 = c.a_bn;
    const double up1 = x * c.a_mb + 1.0;
    const double j10 = -c.a_mb * c.a_mb / (up1 * up1) +
                       y * c.a_bn * c.a_mn * c.a_mn * (d1 + d2) /
                           (d1 * d1 * d2 * d2);
    const double j11 = -c.a_bn * c.a_mn / (d2 * d2);
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det)) break;
    x -= (r.r_down * j11 - r.r_up * j01) / det;
    y -= (r.r_up * j00 - r.r_down * j10) / det;
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      break;
    }
    const double norm = residual_norm(c, x, y);
    if (norm < best) {
      best = norm;
      best_x = x;
      best_y = y;
    }
  }
  if (best >= 1e-8) return false;
  p_up = best_x;
  p_down = best_y;
  return true;
}

}  // namespace

double dual_objective(const PairCoefficients& coef, const PairPowers& powers) {
  if (!(powers.p_up >= 0.0) || !(powers.p_down >= 0.0)) {
    throw std::domain_error("dual_objective: powers must be >= 0");
  }
  const double up = std::log1p(powers.p_up * coef.a_mb);
  const double down =
      std::log1p(powers.p_down * coef.a_bn / (powers.p_up * coef.a_mn + 1.0));
  return up + down - coef.lambda_m * powers.p_up -
         coef.lambda_b * powers.p_down;
}

std::optional<PairPowers> solve_uplink_only(const PairCoefficients& coef) {
  const double p_up = 1.0 / coef.lambda_m - 1.0 / coef.a_mb;
  if (!(p_up > 0.0) || !std::isfinite(p_up)) return std::nullopt;
  return PairPowers{p_up, 0.0};
}

std::optional<PairPowers> solve_downlink_only(const PairCoefficients& coef) {
  const double p_down = 1.0 / coef.lambda_b - 1.0 / coef.a_bn;
  if (!(p_down > 0.0) || !std::isfinite(p_down)) return std::nullopt;
  return PairPowers{0.0, p_down};
}

std::vector<PairPowers> solve_interior(const PairCoefficients& coef) {
  const double g1 = coef.a_mb, g2 = coef.a_bn, g3 = coef.a_mn;
  const double lm = coef.lambda_m, lb = coef.lambda_b;
  if (!(g3 > 0.0) || !(lm > 0.0) || !(lb > 0.0)) return {};

  // Quadratic A p_down^2 + B p_down + C = 0 from eliminating p_up, with
  // denominators cleared by a_mn (same roots, better conditioning).
  const double A = g1 * g2 * (lb * g3 - lm * g2);
  const double B = -2.0 * g1 * g2 * g3 + 2.0 * lm * g1 * g2 * g2 / lb +
                   lm * g2 * g3 - lm * g1 * g2 + lb * g1 * g3 - lb * g3 * g3;
  const double C = g1 * g2 * g3 / lb - lm * g1 * g2 * g2 / (lb * lb) -
                   lm * g2 * (g3 - g1) / lb;

  std::vector<double> roots;
  if (std::abs(A) < kDegenerateQuadratic) {
    if (B != 0.0) roots.push_back(-C / B);
  } else {
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
      roots.push_back(q / A);
      if (q != 0.0) roots.push_back(C / q);
    }
  }

  std::vector<PairPowers> candidates;
  for (double p_down : roots) {
    if (!(p_down > 0.0) || !std::isfinite(p_down)) continue;
    double p_up = (g2 / lb - g2 * p_down - 1.0) / g3;
    if (!(p_up > 0.0) || !std::isfinite(p_up)) continue;
    if (!polish_interior(coef, p_up, p_down)) continue;
    candidates.push_back({p_up, p_down});
  }
  return candidates;
}

PairSolution solve_pair(const PairCoefficients& coef) {
  PairCoefficients c = coef;
  c.lambda_m = std::max(c.lambda_m, kDualPriceFloor);
  c.lambda_b = std::max(c.lambda_b, kDualPriceFloor);

  PairSolution best;  // the origin: powers (0, 0), objective 0
  auto consider = [&](const PairPowers& p, KktCase which) {
    const double value = dual_objective(c, p);
    if (value > best.objective) {
      best = {p, value, which};
    }
  };

  const auto up_only = solve_uplink_only(c);
  const auto down_only = solve_downlink_only(c);
  if (up_only) consider(*up_only, KktCase::uplink_only);
  if (down_only) consider(*down_only, KktCase::downlink_only);
  if (c.a_mn == 0.0) {
    // Decoupled objective: the interior stationary point is the two
    // water-filling solutions taken jointly.
    if (up_only && down_only) {
      consider({up_only->p_up, down_only->p_down}, KktCase::interior);
    }
  } else {
    for (const PairPowers& p : solve_interior(c)) {
      consider(p, KktCase::interior);
    }
  }
  return best;
}

}  // namespace fdra
