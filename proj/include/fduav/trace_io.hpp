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

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fduav/baselines.hpp"

namespace fduav {

// Per-run outputs: a per-slot trace CSV and a summary JSON. Values are
// written at 9 significant digits, which is stable across platforms and
// finer than every tolerance the artifact tests.

struct TraceRow {
  int n = 0;
  double x = 0.0, y = 0.0;     ///< m
  double v = 0.0;              ///< m/s
  double p_s_dbm = 0.0, p_u_dbm = 0.0;
  double r_u = 0.0, r_e = 0.0, r_sec = 0.0; ///< bps/Hz, r_sec clamped
  double e_p = 0.0;            ///< J
};

inline constexpr const char* kTraceHeader =
    "n,x_m,y_m,v_mps,p_s_dbm,p_u_dbm,r_u_bpshz,r_e_bpshz,r_sec_bpshz,e_p_j";

/// Row 0 carries the initial waypoint with zero motion/rate fields; rows
/// 1..N carry the per-slot metrics at the slot's end waypoint.
inline std::vector<TraceRow> build_trace(const SolveResult& r) {
  std::vector<TraceRow> rows(r.slots.size() + 1);
  rows[0].x = r.trajectory[0].x;
  rows[0].y = r.trajectory[0].y;
  rows[0].p_s_dbm = watts_to_dbm(0.0);
  rows[0].p_u_dbm = watts_to_dbm(0.0);
  for (std::size_t i = 0; i < r.slots.size(); ++i) {
    TraceRow& row = rows[i + 1];
    row.n = static_cast<int>(i) + 1;
    row.x = r.trajectory[i + 1].x;
    row.y = r.trajectory[i + 1].y;
    row.v = r.slots[i].v;
    row.p_s_dbm = watts_to_dbm(r.p_s[i]);
    row.p_u_dbm = watts_to_dbm(r.p_u[i]);
    row.r_u = r.slots[i].r_u;
    row.r_e = r.slots[i].r_e;
    row.r_sec = r.slots[i].r_sec;
    row.e_p = r.slots[i].e_p;
  }
  return rows;
}

namespace detail {

inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace detail

inline void write_trace(const std::vector<TraceRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);
  out << kTraceHeader << '\n';
  for (const TraceRow& r : rows) {
    out << r.n << ',' << detail::fmt9(r.x) << ',' << detail::fmt9(r.y) << ','
        << detail::fmt9(r.v) << ',' << detail::fmt9(r.p_s_dbm) << ','
        << detail::fmt9(r.p_u_dbm) << ',' << detail::fmt9(r.r_u) << ','
        << detail::fmt9(r.r_e) << ',' << detail::fmt9(r.r_sec) << ','
        << detail::fmt9(r.e_p) << '\n';
  }
  if (!out.flush()) throw std::runtime_error("failed writing trace file: " + path);
}

/// Scenario echo in reporting units (positions m, powers dBm, noise dBm).
inline nlohmann::ordered_json scenario_echo(const Scenario& sc) {
  nlohmann::ordered_json j;
  j["q0_m"] = {sc.q_start.x, sc.q_start.y};
  j["qf_m"] = {sc.q_final.x, sc.q_final.y};
  j["w_e_m"] = {sc.eve_pos.x, sc.eve_pos.y};
  j["h_m"] = sc.altitude;
  j["t_s"] = sc.period;
  j["dt_s"] = sc.slot_len;
  j["n"] = sc.n_slots;
  j["v_max_mps"] = sc.v_max;
  j["rho0_db"] = linear_to_db(sc.rho0);
  j["sigma2_dbm"] = watts_to_dbm(sc.sigma2);
  j["sigma_rsi2_dbm"] = watts_to_dbm(sc.sigma_rsi2);
  j["kappa"] = sc.kappa;
  j["pbar_s_dbm"] = watts_to_dbm(sc.pbar_s);
  j["pmax_s_dbm"] = watts_to_dbm(sc.pmax_s);
  j["pbar_u_dbm"] = watts_to_dbm(sc.pbar_u);
  j["pmax_u_dbm"] = watts_to_dbm(sc.pmax_u);
  j["b_hz"] = sc.bandwidth;
  j["tol"] = sc.tol;
  return j;
}

inline nlohmann::ordered_json build_summary(const SolveResult& r, const Scenario& sc,
                                            const std::string& scheme) {
  double bits = 0.0, joules = 0.0;
  for (const SlotMetrics& m : r.slots) {
    bits += m.r_sec;
    joules += m.e_p;
  }
  bits *= sc.bandwidth * sc.slot_len;
  nlohmann::ordered_json j;
  j["scheme"] = scheme;
  j["status"] = to_string(r.status);
  j["outer_iters"] = r.outer_iters;
  j["ee_bits_per_joule"] = r.ee_bits_per_joule;
  j["ee_rate_bps_per_joule"] = r.ee_rate_bps_per_joule;
  j["total_secrecy_bits"] = bits;
  j["total_energy_j"] = joules;
  j["history"] = r.history;
  j["notes"] = r.notes;
  j["scenario"] = scenario_echo(sc);
  return j;
}

inline void write_summary(const SolveResult& r, const Scenario& sc, const std::string& scheme,
                          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open summary file for writing: " + path);
  out << build_summary(r, sc, scheme).dump(2) << '\n';
  if (!out.flush()) throw std::runtime_error("failed writing summary file: " + path);
}

}  // namespace fduav
