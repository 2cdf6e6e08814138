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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fduav/bcd.hpp"

namespace fduav {

// Benchmark schemes compared against the joint design:
//   njt  - no jamming: p_u fixed at zero, powers and trajectory optimized.
//   npt  - no power optimization: both powers fixed at their averages.
//   pbet - best-effort trajectory: fly toward the point above the source,
//          hover as long as time permits, then fly to the final point;
//          only the two powers are optimized.

enum class SchemeId { pt, njt, npt, pbet };

inline const char* to_string(SchemeId id) {
  switch (id) {
    case SchemeId::pt: return "pt";
    case SchemeId::njt: return "njt";
    case SchemeId::npt: return "npt";
    case SchemeId::pbet: return "pbet";
  }
  return "unknown";
}

inline std::optional<SchemeId> parse_scheme(std::string_view s) {
  if (s == "pt") return SchemeId::pt;
  if (s == "njt") return SchemeId::njt;
  if (s == "npt") return SchemeId::npt;
  if (s == "pbet") return SchemeId::pbet;
  return std::nullopt;
}

namespace detail {

/// Slots needed to cover dist at full per-slot displacement omega.
inline int slots_needed(double dist, double omega) {
  if (dist <= 0.0) return 0;
  return static_cast<int>(std::ceil(dist / omega - 1e-9));
}

}  // namespace detail

/// Three-phase path q0 -> turn -> (hover) -> qF on the slot grid, flying each
/// leg at full speed. The turn point is [0,0] (above the source) when the
/// slot budget allows reaching it and still arriving on time; otherwise it is
/// the point on the ray toward [0,0] that maximizes progress while keeping
/// the remaining direct leg slot-feasible.
inline Trajectory build_best_effort_trajectory(const Scenario& sc,
                                               std::vector<std::string>* notes = nullptr) {
  const DerivedConstants dc = derive(sc);
  const int n = sc.n_slots;
  const double omega = dc.omega;
  const Vec2 q0 = sc.q_start, qf = sc.q_final;

  Vec2 turn{0.0, 0.0};
  int n1 = detail::slots_needed(q0.norm(), omega);
  int n3 = detail::slots_needed(qf.norm(), omega);
  if (n1 + n3 > n) {
    // Not enough slots to pass over the source: pick the farthest point
    // toward [0,0] whose continuous path length q0 -> p -> qF still fits,
    // then snap the first leg down to whole slots until both legs fit.
    const double d0 = q0.norm();
    const Vec2 dir = q0 * (-1.0 / d0);
    const double budget = static_cast<double>(n) * omega * (1.0 + 1e-12);
    auto total_len = [&](double a1) { return a1 + distance(qf, q0 + dir * a1); };
    double lo = 0.0, hi = d0;
    if (total_len(hi) <= budget) {
      lo = hi;
    } else {
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (total_len(mid) <= budget)
          lo = mid;
        else
          hi = mid;
      }
    }
    double a1 = lo;
    while (true) {
      const Vec2 p = q0 + dir * a1;
      n1 = detail::slots_needed(a1, omega);
      n3 = detail::slots_needed(distance(qf, p), omega);
      if (n1 + n3 <= n || n1 == 0) break;
      a1 = static_cast<double>(n1 - 1) * omega; // drop the partial last slot
    }
    turn = q0 + dir * a1;
    if (notes && a1 < d0 - 1e-9)
      notes->push_back("best-effort path: slack time too short to reach the point above "
                       "the source; turning " +
                       std::to_string(d0 - a1) + " m short of it");
  }

  const double dist1 = distance(turn, q0);
  const double dist3 = distance(qf, turn);
  n1 = detail::slots_needed(dist1, omega);
  n3 = detail::slots_needed(dist3, omega);

  Trajectory q(static_cast<std::size_t>(n) + 1);
  q[0] = q0;
  const Vec2 dir1 = dist1 > 0.0 ? (turn - q0) / dist1 : Vec2{0.0, 0.0};
  const Vec2 dir3 = dist3 > 0.0 ? (qf - turn) / dist3 : Vec2{0.0, 0.0};
  for (int k = 1; k <= n; ++k) {
    if (k <= n1) {
      q[k] = q0 + dir1 * std::min(static_cast<double>(k) * omega, dist1);
    } else if (k <= n - n3) {
      q[k] = turn;
    } else {
      const double remaining = static_cast<double>(n - k) * omega;
      q[k] = qf - dir3 * std::min(remaining, dist3);
    }
  }
  q[n] = qf;
  return q;
}

/// No-jamming benchmark: p_u pinned to zero, source power and trajectory
/// alternate under the common stopping rule.
inline SolveResult solve_njt(const Scenario& sc, SolveOptions opt = {}) {
  opt.opt_jamming = false;
  opt.init_p_u = std::vector<double>(static_cast<std::size_t>(sc.n_slots), 0.0);
  return solve_blocks(sc, opt);
}

/// No-power-optimization benchmark: both powers pinned to their averages,
/// only the trajectory block runs.
inline SolveResult solve_npt(const Scenario& sc, SolveOptions opt = {}) {
  opt.opt_source = false;
  opt.opt_jamming = false;
  opt.init_p_s = std::vector<double>(static_cast<std::size_t>(sc.n_slots), sc.pbar_s);
  opt.init_p_u = std::vector<double>(static_cast<std::size_t>(sc.n_slots), sc.pbar_u);
  return solve_blocks(sc, opt);
}

/// Best-effort-trajectory benchmark: the path is fixed by construction and
/// the two power blocks alternate to convergence.
inline SolveResult solve_pbet(const Scenario& sc, SolveOptions opt = {}) {
  std::vector<std::string> notes;
  opt.opt_trajectory = false;
  opt.init_trajectory = build_best_effort_trajectory(sc, &notes);
  SolveResult res = solve_blocks(sc, opt);
  res.notes.insert(res.notes.begin(), notes.begin(), notes.end());
  return res;
}

inline SolveResult solve_scheme(SchemeId id, const Scenario& sc, const SolveOptions& opt = {}) {
  switch (id) {
    case SchemeId::pt: return solve_pt(sc, opt);
    case SchemeId::njt: return solve_njt(sc, opt);
    case SchemeId::npt: return solve_npt(sc, opt);
    case SchemeId::pbet: return solve_pbet(sc, opt);
  }
  throw std::invalid_argument("solve_scheme: unknown scheme");
}

}  // namespace fduav
