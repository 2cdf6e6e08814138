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
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "fduav/trace_io.hpp"

namespace fduav::cli {

// Front end: single-run mode writes trace_<scheme>.csv and
// summary_<scheme>.json per requested scheme; sweep mode (any --sweep-*
// flag) additionally varies T and the loop-interference level, writing
// per-cell files plus one sweep.csv table. Exit codes: 0 ok, 1 config
// error, 2 at least one solve ended without convergence (files are still
// written in that case).

namespace detail {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& flag) {
  std::vector<double> out;
  for (const std::string& item : split_csv(s)) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": not a number: '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size())
      throw std::invalid_argument(flag + ": not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(flag + ": empty list");
  return out;
}

/// Scenario for one sweep cell: period (with slot count revalidated) and
/// loop-interference level replaced, everything else inherited.
inline Scenario cell_scenario(const Scenario& base, double t, double lil_dbm) {
  Scenario sc = base;
  sc.period = t;
  const double slots = t / sc.slot_len;
  const double rounded = std::round(slots);
  if (rounded < 1.0 || std::abs(slots - rounded) > 1e-9 * std::max(1.0, slots))
    throw std::invalid_argument("sweep period " + fmt_g(t) +
                                " s is not a positive whole number of slots");
  sc.n_slots = static_cast<int>(rounded);
  sc.sigma_rsi2 = dbm_to_watts(lil_dbm);
  sc.validate();
  return sc;
}

struct SweepCell {
  SchemeId scheme;
  double t = 0.0;
  double lil_dbm = 0.0;
  SolveResult result;
  bool solved = false;
};

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& err = std::cerr) {
  CLI::App app{"energy-efficient secrecy mission planner for a full-duplex UAV relay"};
  std::string config, scheme_arg = "pt", out_dir = ".", sweep_t_arg, sweep_lil_arg;
  int max_outer = 100;
  double tol = -1.0;
  int jobs = 1;
  app.add_option("--config", config, "scenario config file (key = value format)")->required();
  app.add_option("--scheme", scheme_arg, "comma list of schemes: pt, njt, npt, pbet");
  app.add_option("--out-dir", out_dir, "output directory (created if missing)");
  app.add_option("--max-outer", max_outer, "outer iteration cap");
  app.add_option("--tol", tol, "stopping threshold override");
  app.add_option("--sweep-t", sweep_t_arg, "comma list of mission periods in s");
  app.add_option("--sweep-lil", sweep_lil_arg, "comma list of loop-interference levels in dBm");
  app.add_option("--jobs", jobs, "parallel sweep-cell solves");

  std::vector<const char*> argv;
  argv.push_back("fduav");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Scenario base;
  try {
    base = load_scenario_file(config);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }

  std::vector<SchemeId> schemes;
  for (const std::string& name : detail::split_csv(scheme_arg)) {
    const auto id = parse_scheme(name);
    if (!id) {
      err << "config error: unknown scheme '" << name << "' (expected pt, njt, npt or pbet)\n";
      return 1;
    }
    schemes.push_back(*id);
  }
  if (schemes.empty()) {
    err << "config error: --scheme lists no schemes\n";
    return 1;
  }

  SolveOptions opt;
  opt.max_outer = max_outer;
  opt.tol = tol;
  if (max_outer < 1) {
    err << "config error: --max-outer must be at least 1\n";
    return 1;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    err << "config error: cannot create output directory '" << out_dir << "': " << ec.message()
        << '\n';
    return 1;
  }
  const std::filesystem::path out(out_dir);

  const bool sweeping = !sweep_t_arg.empty() || !sweep_lil_arg.empty();
  if (!sweeping) {
    int code = 0;
    for (SchemeId id : schemes) {
      const SolveResult res = solve_scheme(id, base, opt);
      const std::string name = to_string(id);
      write_trace(build_trace(res), (out / ("trace_" + name + ".csv")).string());
      write_summary(res, base, name, (out / ("summary_" + name + ".json")).string());
      if (res.status != SolveStatus::converged) code = 2;
    }
    return code;
  }

  std::vector<double> t_values{base.period}, lil_values{watts_to_dbm(base.sigma_rsi2)};
  std::vector<detail::SweepCell> cells;
  try {
    if (!sweep_t_arg.empty()) t_values = detail::parse_double_list(sweep_t_arg, "--sweep-t");
    if (!sweep_lil_arg.empty())
      lil_values = detail::parse_double_list(sweep_lil_arg, "--sweep-lil");
    for (SchemeId id : schemes)
      for (double lil : lil_values)
        for (double t : t_values) {
          detail::cell_scenario(base, t, lil); // every cell must validate up front
          cells.push_back({id, t, lil, {}, false});
        }
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(cells.size());
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      detail::SweepCell& cell = cells[i];
      try {
        const Scenario sc = detail::cell_scenario(base, cell.t, cell.lil_dbm);
        cell.result = solve_scheme(cell.scheme, sc, opt);
        const std::string name = to_string(cell.scheme);
        const std::string tag =
            name + "_t" + detail::fmt_g(cell.t) + "_lil" + detail::fmt_g(cell.lil_dbm);
        write_trace(build_trace(cell.result), (out / ("trace_" + tag + ".csv")).string());
        write_summary(cell.result, sc, name, (out / ("summary_" + tag + ".json")).string());
        cell.solved = true;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (failures[i]) {
      try {
        std::rethrow_exception(failures[i]);
      } catch (const std::exception& e) {
        err << "sweep cell (scheme=" << to_string(cells[i].scheme) << ", t=" << cells[i].t
            << ", lil=" << cells[i].lil_dbm << " dBm) failed: " << e.what() << '\n';
      }
      return 1;
    }
  }

  // The final column flags, per (scheme, LIL) series, whether this cell's EE
  // is no smaller than at the next-shorter period.
  std::ofstream table((out / "sweep.csv").string(), std::ios::binary);
  if (!table) {
    err << "cannot open sweep table for writing: " << (out / "sweep.csv").string() << '\n';
    return 1;
  }
  table << "scheme,t_s,lil_dbm,ee_bits_per_joule,status,outer_iters,ee_nondecreasing_in_t\n";
  int code = 0;
  for (const detail::SweepCell& cell : cells) {
    const detail::SweepCell* prev = nullptr;
    for (const detail::SweepCell& other : cells) {
      if (other.scheme != cell.scheme || other.lil_dbm != cell.lil_dbm) continue;
      if (other.t >= cell.t) continue;
      if (!prev || other.t > prev->t) prev = &other;
    }
    const double ee = cell.result.ee_bits_per_joule;
    const bool nondec =
        !prev || ee >= prev->result.ee_bits_per_joule * (1.0 - 1e-9) - 1e-30;
    table << to_string(cell.scheme) << ',' << detail::fmt_g(cell.t) << ','
          << detail::fmt_g(cell.lil_dbm) << ',' << fduav::detail::fmt9(ee) << ','
          << to_string(cell.result.status) << ',' << cell.result.outer_iters << ','
          << (nondec ? 1 : 0) << '\n';
    if (cell.result.status != SolveStatus::converged) code = 2;
  }
  if (!table.flush()) {
    err << "failed writing sweep table\n";
    return 1;
  }
  return code;
}

}  // namespace fduav::cli
