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

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "fduav/jamming_power.hpp"
#include "fduav/source_power.hpp"
#include "fduav/trajectory_opt.hpp"

namespace fduav {

// Outer driver: block-coordinate ascent over source power, jamming power and
// trajectory, stopping when the fractional increase of the reported energy
// efficiency drops below the scenario tolerance.

enum class SolveStatus { converged, iteration_cap, fallback_used };

inline const char* to_string(SolveStatus st) {
  switch (st) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_cap: return "iteration-cap";
    case SolveStatus::fallback_used: return "fallback-used";
  }
  return "unknown";
}

/// Per-slot reporting quantities; r_sec is clamped at zero.
struct SlotMetrics {
  double v = 0.0;     ///< m/s
  double r_u = 0.0;   ///< bps/Hz
  double r_e = 0.0;   ///< bps/Hz
  double r_sec = 0.0; ///< bps/Hz, max(r_u - r_e, 0)
  double e_p = 0.0;   ///< J
};

inline std::vector<SlotMetrics> compute_slot_metrics(const Trajectory& q,
                                                     const std::vector<double>& p_s,
                                                     const std::vector<double>& p_u,
                                                     const Scenario& sc,
                                                     const DerivedConstants& dc) {
  std::vector<SlotMetrics> out(p_s.size());
  for (std::size_t i = 0; i < p_s.size(); ++i) {
    const double v = distance(q[i + 1], q[i]) / sc.slot_len;
    const SlotLink link = slot_link(p_s[i], p_u[i], q[i + 1], sc, dc);
    out[i].v = v;
    out[i].r_u = link.r_u;
    out[i].r_e = link.r_e;
    out[i].r_sec = link.r_sec;
    out[i].e_p = slot_energy(v, sc.slot_len, sc.energy).e_p;
  }
  return out;
}

/// Reported EE in bits/J: B*dt*sum(max(r_sec,0)) over total propulsion energy.
inline double reporting_ee(const Trajectory& q, const std::vector<double>& p_s,
                           const std::vector<double>& p_u, const Scenario& sc,
                           const DerivedConstants& dc) {
  double bits = 0.0, joules = 0.0;
  for (std::size_t i = 0; i < p_s.size(); ++i) {
    bits += std::max(secrecy_rate(p_s[i], p_u[i], q[i + 1], sc, dc), 0.0);
    joules += slot_energy(distance(q[i + 1], q[i]) / sc.slot_len, sc.slot_len, sc.energy).e_p;
  }
  return sc.bandwidth * sc.slot_len * bits / joules;
}

struct SolveResult {
  Trajectory trajectory;
  std::vector<double> p_s; ///< W
  std::vector<double> p_u; ///< W
  double ee_bits_per_joule = 0.0;
  double ee_rate_bps_per_joule = 0.0; ///< EE divided by the slot length
  std::vector<SlotMetrics> slots;
  std::vector<double> history; ///< reported EE after init and each kept round
  SolveStatus status = SolveStatus::iteration_cap;
  int outer_iters = 0;
  std::vector<std::string> notes;
};

struct SolveOptions {
  int max_outer = 100;
  double tol = -1.0; ///< stopping threshold; negative means use the scenario's
  bool opt_source = true;
  bool opt_jamming = true;
  bool opt_trajectory = true;
  std::optional<Trajectory> init_trajectory;
  std::optional<std::vector<double>> init_p_s;
  std::optional<std::vector<double>> init_p_u;
  int traj_max_iters = 50;
  InnerOptions inner;
};

namespace detail {

inline void check_power_init(const std::vector<double>& p, double pbar, double pmax,
                             std::size_t n, const char* which) {
  if (p.size() != n) throw std::invalid_argument(std::string(which) + ": wrong slot count");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0 || v > pmax * (1.0 + 1e-12))
      throw std::invalid_argument(std::string(which) + ": per-slot bound violated");
    sum += v;
  }
  if (sum > static_cast<double>(n) * pbar * (1.0 + 1e-9))
    throw std::invalid_argument(std::string(which) + ": average-power budget violated");
}

inline std::string round_label(int round) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "outer round %d", round);
  return buf;
}

}  // namespace detail

/// Generic block-coordinate driver; which blocks run is set by the options.
/// Every kept round appends a history entry, so the history is nondecreasing.
inline SolveResult solve_blocks(const Scenario& sc, const SolveOptions& opt = {}) {
  sc.validate();
  const DerivedConstants dc = derive(sc);
  const std::size_t n = static_cast<std::size_t>(sc.n_slots);
  const double tol = opt.tol >= 0.0 ? opt.tol : sc.tol;

  Trajectory q = opt.init_trajectory
                     ? *opt.init_trajectory
                     : straight_line_trajectory(sc.q_start, sc.q_final, sc.n_slots);
  init_slacks(q, sc); // rejects an infeasible initial trajectory
  std::vector<double> p_s = opt.init_p_s ? *opt.init_p_s : std::vector<double>(n, sc.pbar_s);
  std::vector<double> p_u = opt.init_p_u ? *opt.init_p_u : std::vector<double>(n, sc.pbar_u);
  detail::check_power_init(p_s, sc.pbar_s, sc.pmax_s, n, "initial source power");
  detail::check_power_init(p_u, sc.pbar_u, sc.pmax_u, n, "initial jamming power");

  SolveResult out;
  double ee = reporting_ee(q, p_s, p_u, sc, dc);
  out.history.push_back(ee);
  for (int round = 1; round <= opt.max_outer; ++round) {
    const Trajectory q_prev = q;
    const std::vector<double> ps_prev = p_s, pu_prev = p_u;

    if (opt.opt_source) {
      const SourceCoeffs coeffs = make_source_coeffs(q, p_u, sc, dc);
      p_s = optimize_source_power(coeffs, sc.pbar_s, sc.pmax_s).p;
    }
    if (opt.opt_jamming) {
      const JamCoeffs jc = make_jam_coeffs(q, p_s, sc, dc);
      const JamOptResult jr = optimize_jamming_power(p_u, jc, dc.beta0, sc.pbar_u, sc.pmax_u);
      p_u = jr.p;
      if (!jr.converged)
        out.notes.push_back("jamming block hit its iteration cap at " +
                            detail::round_label(round));
    }
    if (opt.opt_trajectory) {
      const TrajOptResult tr =
          optimize_trajectory(q, p_s, p_u, sc, dc, opt.traj_max_iters, opt.inner);
      q = tr.q;
      if (tr.fallback_used)
        out.notes.push_back("trajectory step rejected (damped fallback exhausted) at " +
                            detail::round_label(round));
      else if (!tr.converged)
        out.notes.push_back("trajectory block hit its iteration cap at " +
                            detail::round_label(round));
    }

    const double ee_new = reporting_ee(q, p_s, p_u, sc, dc);
    out.outer_iters = round;
    if (ee_new < ee - 1e-9 * std::max(ee, 1e-300)) {
      // A block ascended its own surrogate but the reported (clamped) EE
      // fell; keep the previous iterate so the history stays monotone.
      q = q_prev;
      p_s = ps_prev;
      p_u = pu_prev;
      out.status = SolveStatus::fallback_used;
      out.notes.push_back("reported EE decreased at " + detail::round_label(round) +
                          "; previous iterate restored");
      break;
    }
    out.history.push_back(ee_new);
    const double rel = (ee_new - ee) / std::max(ee, 1e-300);
    ee = ee_new;
    if (rel < tol) {
      out.status = SolveStatus::converged;
      break;
    }
  }

  out.trajectory = std::move(q);
  out.p_s = std::move(p_s);
  out.p_u = std::move(p_u);
  out.slots = compute_slot_metrics(out.trajectory, out.p_s, out.p_u, sc, dc);
  out.ee_bits_per_joule = reporting_ee(out.trajectory, out.p_s, out.p_u, sc, dc);
  out.ee_rate_bps_per_joule = out.ee_bits_per_joule / sc.slot_len;
  return out;
}

/// Joint design: all three blocks in source -> jamming -> trajectory order.
inline SolveResult solve_pt(const Scenario& sc, const SolveOptions& opt = {}) {
  return solve_blocks(sc, opt);
}

}  // namespace fduav
