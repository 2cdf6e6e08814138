// Copyright 2026 the fduav authors
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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fduav/link_model.hpp"

namespace fduav {

// Per-slot source-power objective: sum_n [log2(1 + a_n p_n) - log2(1 + b_n p_n)]
// subject to sum_n p_n <= n*pbar and 0 <= p_n <= pmax. Concave on the slots
// with a_n > b_n; slots with a_n <= b_n contribute nothing at the optimum.

struct SourceCoeffs {
  std::vector<double> a; ///< legitimate-link coefficient, 1/W
  std::vector<double> b; ///< eavesdropper-link coefficient, 1/W
};

/// Coefficients at fixed jamming powers and trajectory.
/// a_n = gamma0 / ((H^2+||q[n]||^2)(p_u[n] beta0 + 1)),
/// b_n = gamma0 ||w_e||^-kappa / (gamma0 p_u[n]/(H^2+||q[n]-w_e||^2) + 1).
inline SourceCoeffs make_source_coeffs(const Trajectory& q, const std::vector<double>& p_u,
                                       const Scenario& s, const DerivedConstants& d) {
  if (q.size() != p_u.size() + 1)
    throw std::invalid_argument("make_source_coeffs: expected n+1 waypoints for n slots");
  SourceCoeffs c;
  const double h2 = s.altitude * s.altitude;
  const double we_loss = std::pow(s.eve_pos.norm(), -s.kappa);
  c.a.resize(p_u.size());
  c.b.resize(p_u.size());
  for (std::size_t n = 0; n < p_u.size(); ++n) {
    const Vec2& qn = q[n + 1];
    c.a[n] = d.gamma0 / ((h2 + qn.norm2()) * (p_u[n] * d.beta0 + 1.0));
    c.b[n] = d.gamma0 * we_loss / (d.gamma0 * p_u[n] / (h2 + (qn - s.eve_pos).norm2()) + 1.0);
  }
  return c;
}

inline double source_objective(const SourceCoeffs& c, const std::vector<double>& p) {
  double obj = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n)
    obj += detail::log2_1p(c.a[n] * p[n]) - detail::log2_1p(c.b[n] * p[n]);
  return obj;
}

/// Water-filling-style closed form for one slot at multiplier mu >= 0.
/// mu = 0 is the unconstrained limit (peak power when a > b). Ties
/// a ~= b within 1e-12 relative count as a <= b and give zero power.
inline double per_slot_power(double a, double b, double mu, double pmax) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("per_slot_power: negative coefficient");
  if (a - b <= 1e-12 * std::max(a, b)) return 0.0;
  if (mu <= 0.0) return pmax;
  const double ia = 1.0 / a, ib = 1.0 / b;
  const double half_diff = 0.5 * (ib - ia);
  const double eta =
      std::sqrt(half_diff * half_diff + (ib - ia) / (mu * std::numbers::ln2)) - 0.5 * ia - 0.5 * ib;
  return std::min(std::max(eta, 0.0), pmax);
}

struct SourcePowerResult {
  std::vector<double> p; ///< W, one per slot
  double mu = 0.0;       ///< multiplier of the sum-form average constraint
};

/// Maximizes the secrecy-rate sum over source powers. The multiplier acts on
/// sum_n p_n <= n*pbar directly; bisection stops when the bracket is below
/// 1e-12 of its upper end or the budget gap is below 1e-8 relative.
inline SourcePowerResult optimize_source_power(const SourceCoeffs& c, double pbar, double pmax) {
  if (!(pbar > 0.0) || !(pmax > 0.0) || pbar > pmax)
    throw std::invalid_argument("optimize_source_power: need 0 < pbar <= pmax");
  const std::size_t n = c.a.size();
  const double budget = pbar * static_cast<double>(n);
  auto fill = [&](double mu) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = per_slot_power(c.a[i], c.b[i], mu, pmax);
    return p;
  };
  auto total = [](const std::vector<double>& p) {
    double t = 0.0;
    for (double v : p) t += v;
    return t;
  };

  SourcePowerResult res;
  res.p = fill(0.0);
  if (total(res.p) <= budget * (1.0 + 1e-12)) return res; // average constraint slack at mu = 0

  double lo = 0.0, hi = 1.0;
  while (total(fill(hi)) > budget) {
    hi *= 2.0;
    if (hi > 1e30) throw std::runtime_error("optimize_source_power: multiplier bracket failed");
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    const double t = total(fill(mid));
    if (t > budget)
      lo = mid;
    else
      hi = mid;
    if (std::abs(t - budget) <= 1e-8 * budget) {
      hi = mid;
      break;
    }
  }
  res.mu = hi; // feasible side of the bracket
  res.p = fill(res.mu);
  return res;
}

}  // namespace fduav
