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
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fduav/geometry.hpp"

namespace fduav {

// ---------------------------------------------------------------------------
// Unit conversions. Everything downstream of the parser works in linear SI
// units (watts, meters, seconds, hertz); dB/dBm exist only at the I/O edge.
// ---------------------------------------------------------------------------

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) {
  if (!(lin > 0.0)) throw std::invalid_argument("linear_to_db: value must be positive");
  return 10.0 * std::log10(lin);
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

/// Returns -inf for 0 W (used when tracing zero transmit power).
inline double watts_to_dbm(double w) {
  if (w < 0.0) throw std::invalid_argument("watts_to_dbm: value must be nonnegative");
  if (w == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(w / 1e-3);
}

// ---------------------------------------------------------------------------
// Rotary-wing propulsion parameters (blade profile + induced + parasite).
// ---------------------------------------------------------------------------

struct EnergyParams {
  double p0 = 79.86;        ///< blade profile power in hover, W
  double pi = 88.63;        ///< induced power in hover, W
  double v0 = 4.03;         ///< mean rotor induced velocity in hover, m/s
  double u_tip = 120.0;     ///< rotor blade tip speed, m/s
  double d0 = 0.6;          ///< fuselage drag ratio
  double solidity = 0.05;   ///< rotor solidity
  double disc_area = 0.503; ///< rotor disc area, m^2
  double air_density = 1.225; ///< kg/m^3
};

// ---------------------------------------------------------------------------
// Mission scenario. Source node sits at the origin; the eavesdropper at
// eve_pos. Immutable after load; solvers only read it.
// ---------------------------------------------------------------------------

struct Scenario {
  Vec2 eve_pos{200.0, 0.0};   ///< w_E, m
  double altitude = 100.0;    ///< H, m
  double period = 40.0;       ///< T, s
  double slot_len = 0.5;      ///< delta_t, s
  int n_slots = 80;           ///< N
  Vec2 q_start{50.0, -800.0}; ///< q[0], m
  Vec2 q_final{50.0, 800.0};  ///< q[N], m
  double v_max = 40.0;        ///< m/s
  double rho0 = 1e-6;         ///< channel power gain at 1 m, linear
  double sigma2 = 1e-14;      ///< noise power, W
  double sigma_rsi2 = 1e-11;  ///< residual self-interference level, W
  double kappa = 3.0;         ///< source->eavesdropper path-loss exponent
  double pbar_s = 0.1;        ///< average source power budget, W
  double pmax_s = 0.0;        ///< peak source power, W
  double pbar_u = 0.01;       ///< average jamming power budget, W
  double pmax_u = 0.0;        ///< peak jamming power, W
  double bandwidth = 1e6;     ///< B, Hz
  double tol = 1e-4;          ///< outer stopping tolerance epsilon
  EnergyParams energy;

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

/// Quantities derived once per scenario.
struct DerivedConstants {
  double gamma0 = 0.0; ///< rho0 / sigma2
  double beta0 = 0.0;  ///< sigma_rsi2 / sigma2
  double omega = 0.0;  ///< v_max * slot_len, max per-slot displacement, m
};

inline DerivedConstants derive(const Scenario& s) {
  return DerivedConstants{s.rho0 / s.sigma2, s.sigma_rsi2 / s.sigma2, s.v_max * s.slot_len};
}

inline void Scenario::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("scenario validation error: " + what);
  };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be strictly positive");
  };
  positive(altitude, "h");
  positive(period, "t");
  positive(slot_len, "dt");
  positive(v_max, "v_max");
  positive(rho0, "rho0");
  positive(sigma2, "sigma2");
  positive(pbar_s, "pbar_s");
  positive(pmax_s, "pmax_s");
  positive(pbar_u, "pbar_u");
  positive(pmax_u, "pmax_u");
  positive(bandwidth, "b");
  positive(tol, "tol");
  positive(energy.p0, "p0");
  positive(energy.pi, "pi");
  positive(energy.v0, "v0");
  positive(energy.u_tip, "u_tip");
  positive(energy.d0, "d0");
  positive(energy.solidity, "s");
  positive(energy.disc_area, "a");
  positive(energy.air_density, "rho");
  if (!(sigma_rsi2 >= 0.0) || !std::isfinite(sigma_rsi2)) fail("sigma_rsi2 must be nonnegative");
  if (n_slots < 1) fail("n must be a positive integer");
  if (std::abs(period - slot_len * n_slots) > 1e-9 * std::max(1.0, period))
    fail("t, dt, n inconsistent: t must equal dt * n");
  if (pbar_s > pmax_s) fail("pbar_s must not exceed pmax_s");
  if (pbar_u > pmax_u) fail("pbar_u must not exceed pmax_u");
  if (kappa < 2.0) fail("kappa must be at least 2");
  if (eve_pos.norm() < 1.0) fail("w_e must be at least 1 m from the source");
  // Equality allowed: the mission may be exactly time-critical.
  const double reach = v_max * period;
  if (distance(q_start, q_final) > reach * (1.0 + 1e-9))
    fail("mission infeasible: ||qf - q0|| exceeds v_max * t");
}

// ---------------------------------------------------------------------------
// Scenario file format: flat `key = value [unit]` lines, `#` comments,
// case-insensitive keys, 2-vectors as `x, y`. Exactly two of {t, dt, n}
// must be given (all three accepted if consistent).
// ---------------------------------------------------------------------------

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::string trim(std::string_view sv) {
  const auto b = sv.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = sv.find_last_not_of(" \t\r\n");
  return std::string(sv.substr(b, e - b + 1));
}

struct RawEntry {
  std::vector<double> nums; // 1 scalar or 2 vector components
  std::string unit;         // lower-cased unit token, may be empty
  int line = 0;
};

[[noreturn]] inline void parse_fail(int line, const std::string& what) {
  throw std::invalid_argument("scenario parse error (line " + std::to_string(line) + "): " + what);
}

inline double parse_number(const std::string& tok, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    parse_fail(line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) parse_fail(line, "trailing characters in number '" + tok + "'");
  return v;
}

inline bool is_unit_token(const std::string& t) {
  static const char* units[] = {"m",  "s",   "m/s", "mps", "db",  "dbm",   "w",
                                "mw", "hz",  "khz", "mhz", "ghz", "m2",    "m^2",
                                "j",  "kg/m3", "kg/m^3"};
  for (const char* u : units)
    if (t == u) return true;
  return false;
}

inline RawEntry parse_value(const std::string& value, int line) {
  RawEntry e;
  e.line = line;
  std::string body = value;
  // Peel a trailing unit token, if any.
  const auto sp = body.find_last_of(" \t");
  if (sp != std::string::npos) {
    std::string tail = lower(trim(body.substr(sp + 1)));
    if (is_unit_token(tail)) {
      e.unit = tail;
      body = trim(body.substr(0, sp));
    }
  }
  if (body.empty()) parse_fail(line, "missing value");
  // Vector components split on ','.
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    const std::string tok = trim(body.substr(start, comma == std::string::npos ? std::string::npos
                                                                               : comma - start));
    if (tok.empty()) parse_fail(line, "empty vector component");
    e.nums.push_back(parse_number(tok, line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (e.nums.size() > 2) parse_fail(line, "at most 2 vector components allowed");
  return e;
}

enum class UnitKind { length, time, count, speed, gain_db, power, frequency, area, density, plain };

inline double convert_scalar(const RawEntry& e, UnitKind kind, const std::string& key) {
  const double v = e.nums[0];
  auto bad_unit = [&]() {
    parse_fail(e.line, "unit '" + e.unit + "' not valid for key '" + key + "'");
  };
  switch (kind) {
    case UnitKind::length:
      if (!e.unit.empty() && e.unit != "m") bad_unit();
      return v;
    case UnitKind::time:
      if (!e.unit.empty() && e.unit != "s") bad_unit();
      return v;
    case UnitKind::count:
      if (!e.unit.empty()) bad_unit();
      return v;
    case UnitKind::speed:
      if (!e.unit.empty() && e.unit != "m/s" && e.unit != "mps") bad_unit();
      return v;
    case UnitKind::gain_db:
      if (!e.unit.empty() && e.unit != "db") bad_unit();
      return db_to_linear(v);
    case UnitKind::power:
      // Bare powers are ambiguous (dBm vs W); the unit is mandatory.
      if (e.unit == "dbm") return dbm_to_watts(v);
      if (e.unit == "w") return v;
      if (e.unit == "mw") return v * 1e-3;
      bad_unit();
    case UnitKind::frequency:
      if (e.unit == "hz" || e.unit.empty()) return v;
      if (e.unit == "khz") return v * 1e3;
      if (e.unit == "mhz") return v * 1e6;
      if (e.unit == "ghz") return v * 1e9;
      bad_unit();
    case UnitKind::area:
      if (!e.unit.empty() && e.unit != "m2" && e.unit != "m^2") bad_unit();
      return v;
    case UnitKind::density:
      if (!e.unit.empty() && e.unit != "kg/m3" && e.unit != "kg/m^3") bad_unit();
      return v;
    case UnitKind::plain:
      if (!e.unit.empty()) bad_unit();
      return v;
  }
  return v; // unreachable
}

}  // namespace detail

inline Scenario load_scenario(std::string_view text) {
  using detail::RawEntry;
  std::map<std::string, RawEntry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) detail::parse_fail(lineno, "expected 'key = value'");
    const std::string key = detail::lower(detail::trim(line.substr(0, eq)));
    if (key.empty()) detail::parse_fail(lineno, "empty key");
    if (entries.count(key)) detail::parse_fail(lineno, "duplicate key '" + key + "'");
    entries[key] = detail::parse_value(detail::trim(line.substr(eq + 1)), lineno);
  }

  Scenario s;
  s.pmax_s = dbm_to_watts(26.0);
  s.pmax_u = dbm_to_watts(16.0);

  auto take = [&](const char* key) -> std::optional<RawEntry> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    RawEntry e = it->second;
    entries.erase(it);
    return e;
  };
  auto scalar = [&](const char* key, detail::UnitKind kind) -> std::optional<double> {
    auto e = take(key);
    if (!e) return std::nullopt;
    if (e->nums.size() != 1) detail::parse_fail(e->line, std::string("key '") + key + "' expects a scalar");
    return detail::convert_scalar(*e, kind, key);
  };
  auto vec = [&](const char* key) -> std::optional<Vec2> {
    auto e = take(key);
    if (!e) return std::nullopt;
    if (e->nums.size() != 2) detail::parse_fail(e->line, std::string("key '") + key + "' expects 'x, y'");
    if (!e->unit.empty() && e->unit != "m")
      detail::parse_fail(e->line, "unit '" + e->unit + "' not valid for key '" + key + "'");
    return Vec2{e->nums[0], e->nums[1]};
  };
  auto require = [&](const char* key, std::optional<double> v) -> double {
    if (!v) throw std::invalid_argument(std::string("scenario parse error: missing required key '") + key + "'");
    return *v;
  };
  auto require_vec = [&](const char* key, std::optional<Vec2> v) -> Vec2 {
    if (!v) throw std::invalid_argument(std::string("scenario parse error: missing required key '") + key + "'");
    return *v;
  };

  using detail::UnitKind;
  s.eve_pos = require_vec("w_e", vec("w_e"));
  s.q_start = require_vec("q0", vec("q0"));
  s.q_final = require_vec("qf", vec("qf"));
  s.altitude = require("h", scalar("h", UnitKind::length));
  s.v_max = require("v_max", scalar("v_max", UnitKind::speed));
  s.rho0 = require("rho0", scalar("rho0", UnitKind::gain_db));
  s.sigma2 = require("sigma2", scalar("sigma2", UnitKind::power));
  s.pbar_s = require("pbar_s", scalar("pbar_s", UnitKind::power));
  s.pmax_s = require("pmax_s", scalar("pmax_s", UnitKind::power));
  s.pbar_u = require("pbar_u", scalar("pbar_u", UnitKind::power));
  s.pmax_u = require("pmax_u", scalar("pmax_u", UnitKind::power));
  s.bandwidth = require("b", scalar("b", UnitKind::frequency));

  if (auto v = scalar("sigma_rsi2", UnitKind::power)) s.sigma_rsi2 = *v;
  if (auto v = scalar("kappa", UnitKind::plain)) s.kappa = *v;
  if (auto v = scalar("tol", UnitKind::plain)) s.tol = *v;
  if (auto v = scalar("p0", UnitKind::power)) s.energy.p0 = *v;
  if (auto v = scalar("pi", UnitKind::power)) s.energy.pi = *v;
  if (auto v = scalar("v0", UnitKind::speed)) s.energy.v0 = *v;
  if (auto v = scalar("u_tip", UnitKind::speed)) s.energy.u_tip = *v;
  if (auto v = scalar("d0", UnitKind::plain)) s.energy.d0 = *v;
  if (auto v = scalar("s", UnitKind::plain)) s.energy.solidity = *v;
  if (auto v = scalar("a", UnitKind::area)) s.energy.disc_area = *v;
  if (auto v = scalar("rho", UnitKind::density)) s.energy.air_density = *v;

  // Timing: exactly two of {t, dt, n} define the third; all three must agree.
  const auto t = scalar("t", UnitKind::time);
  const auto dt = scalar("dt", UnitKind::time);
  const auto n = scalar("n", UnitKind::count);
  const int given = int(t.has_value()) + int(dt.has_value()) + int(n.has_value());
  if (given < 2)
    throw std::invalid_argument("scenario parse error: need at least two of 't', 'dt', 'n'");
  auto to_slots = [&](double v) {
    const double r = std::round(v);
    if (!(std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) || r < 1.0)
      throw std::invalid_argument("scenario validation error: n must be a positive integer");
    return static_cast<int>(r);
  };
  if (t && dt) {
    s.period = *t;
    s.slot_len = *dt;
    const int n_implied = to_slots(*t / *dt);
    s.n_slots = n ? to_slots(*n) : n_implied;
  } else if (t && n) {
    s.period = *t;
    s.n_slots = to_slots(*n);
    s.slot_len = *t / s.n_slots;
  } else {
    s.slot_len = *dt;
    s.n_slots = to_slots(*n);
    s.period = s.slot_len * s.n_slots;
  }

  if (!entries.empty()) {
    const auto& [key, e] = *entries.begin();
    detail::parse_fail(e.line, "unknown key '" + key + "'");
  }

  s.validate();
  return s;
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario parse error: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

}  // namespace fduav
