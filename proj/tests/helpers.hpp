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

// Test utilities shared by the unit suites and the acceptance runner:
// scenario builders and independent oracles (lattice dynamic programs for
// budgeted separable maximization, golden-section search). Everything here
// is deliberately solver-free so oracle results cannot inherit solver bugs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "fduav/fduav.hpp"

namespace testutil {

/// Reference mission file shipped with the repo.
inline fduav::Scenario reference_scenario() {
  return fduav::load_scenario_file(FDUAV_SCENARIO_DIR "/default.cfg");
}

/// Reference mission rescaled to a different period/slot length; endpoints
/// shrink with the period so every variant stays mission-feasible.
inline fduav::Scenario scaled_scenario(double period, double slot_len) {
  fduav::Scenario sc = reference_scenario();
  sc.period = period;
  sc.slot_len = slot_len;
  const double slots = period / slot_len;
  sc.n_slots = static_cast<int>(std::lround(slots));
  if (std::abs(slots - std::lround(slots)) > 1e-9)
    throw std::invalid_argument("scaled_scenario: period not a whole number of slots");
  const double reach = sc.v_max * period;
  const double span = fduav::distance(sc.q_start, sc.q_final);
  if (span > reach) {
    const double shrink = reach / span;
    sc.q_start = sc.q_start * shrink;
    sc.q_final = sc.q_final * shrink;
  }
  sc.validate();
  return sc;
}

/// Maximizes sum_i f(i, p_i) over the lattice p_i in {0, h, ..., levels*h},
/// sum_i p_i <= budget_units*h, by dynamic programming over budget units.
/// Exact on the lattice; the standard brute-force oracle for budgeted
/// separable problems.
inline double lattice_dp_max(std::size_t n_slots, int levels, double h, int budget_units,
                             const std::function<double(std::size_t, double)>& f) {
  const int m = std::min(budget_units, levels * static_cast<int>(n_slots));
  std::vector<double> dp(static_cast<std::size_t>(m) + 1,
                         -std::numeric_limits<double>::infinity());
  dp[0] = 0.0;
  std::vector<double> slot_val(static_cast<std::size_t>(levels) + 1);
  std::vector<double> next(dp.size());
  for (std::size_t i = 0; i < n_slots; ++i) {
    for (int k = 0; k <= levels; ++k) slot_val[static_cast<std::size_t>(k)] = f(i, k * h);
    for (int j = 0; j <= m; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      const int kmax = std::min(levels, j);
      for (int k = 0; k <= kmax; ++k) {
        const double prev = dp[static_cast<std::size_t>(j - k)];
        if (prev == -std::numeric_limits<double>::infinity()) continue;
        const double v = prev + slot_val[static_cast<std::size_t>(k)];
        if (v > best) best = v;
      }
      next[static_cast<std::size_t>(j)] = best;
    }
    dp.swap(next);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (double v : dp) best = std::max(best, v);
  return best;
}

/// Golden-section maximization of a unimodal scalar function on [lo, hi].
inline double golden_section_max(double lo, double hi, int iters,
                                 const std::function<double(double)>& f) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

inline double rel_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

}  // namespace testutil
