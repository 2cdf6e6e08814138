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
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fduav/link_model.hpp"

namespace fduav {

// Jamming-power subproblem: with trajectory and source powers fixed, the
// per-slot secrecy rate as a function of p = p_u[n] is
//   r_n(p) = log2(b0 p + 1 + c_n) - log2(b0 p + 1)
//          - log2(e_n p + 1 + d_n) + log2(e_n p + 1),
// a difference of concave terms. SCA replaces the two subtracted logs by
// first-order upper bounds at p^k, leaving a concave separable surrogate.

struct JamCoeffs {
  std::vector<double> c; ///< p_s gamma0 / (H^2+||q||^2)
  std::vector<double> d; ///< p_s gamma0 ||w_e||^-kappa
  std::vector<double> e; ///< gamma0 / (H^2+||q-w_e||^2), 1/W
};

inline JamCoeffs make_jam_coeffs(const Trajectory& q, const std::vector<double>& p_s,
                                 const Scenario& s, const DerivedConstants& d) {
  if (q.size() != p_s.size() + 1)
    throw std::invalid_argument("make_jam_coeffs: expected n+1 waypoints for n slots");
  JamCoeffs jc;
  const double h2 = s.altitude * s.altitude;
  const double we_loss = std::pow(s.eve_pos.norm(), -s.kappa);
  const std::size_t n = p_s.size();
  jc.c.resize(n);
  jc.d.resize(n);
  jc.e.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& qn = q[i + 1];
    jc.c[i] = p_s[i] * d.gamma0 / (h2 + qn.norm2());
    jc.d[i] = p_s[i] * d.gamma0 * we_loss;
    jc.e[i] = d.gamma0 / (h2 + (qn - s.eve_pos).norm2());
  }
  return jc;
}

/// Exact (nonconvex) secrecy-rate sum at jamming powers p_u.
inline double jam_true_objective(const std::vector<double>& p_u, const JamCoeffs& jc,
                                 double beta0) {
  double obj = 0.0;
  for (std::size_t n = 0; n < p_u.size(); ++n) {
    const double p = p_u[n];
    const double bu = beta0 * p + 1.0;
    const double eu = jc.e[n] * p + 1.0;
    obj += detail::log2_1p(jc.c[n] / bu) - detail::log2_1p(jc.d[n] / eu);
  }
  return obj;
}

namespace detail {

/// Per-slot concave surrogate pieces at expansion point pk.
struct JamSurrogateSlot {
  double c = 0.0, e = 0.0, beta0 = 0.0;
  double slope = 0.0; ///< combined Taylor slopes of the subtracted logs
  double offset = 0.0; ///< constants making the surrogate tight at pk

  double value(double p) const {
    return log2_1p(beta0 * p + c) + log2_1p(e * p) - slope * p + offset;
  }
  /// d/dp of value; strictly decreasing in p.
  double deriv(double p) const {
    return beta0 / (std::numbers::ln2 * (beta0 * p + 1.0 + c)) +
           e / (std::numbers::ln2 * (e * p + 1.0)) - slope;
  }
};

inline JamSurrogateSlot make_surrogate_slot(const JamCoeffs& jc, double beta0, double pk,
                                            std::size_t n) {
  JamSurrogateSlot s;
  s.c = jc.c[n];
  s.e = jc.e[n];
  s.beta0 = beta0;
  const double bu_k = beta0 * pk + 1.0;
  const double eu_k = jc.e[n] * pk + 1.0 + jc.d[n];
  s.slope = beta0 / (std::numbers::ln2 * bu_k) + jc.e[n] / (std::numbers::ln2 * eu_k);
  s.offset = -std::log2(bu_k) - std::log2(eu_k) + s.slope * pk;
  return s;
}

/// Maximizer of value(p) - lambda p on [0, pmax]; bisection on the strictly
/// decreasing derivative to 1e-10 * pmax. Ties at zero gain resolve to 0.
inline double surrogate_slot_argmax(const JamSurrogateSlot& s, double lambda, double pmax) {
  if (s.deriv(0.0) - lambda <= 0.0) return 0.0;
  if (s.deriv(pmax) - lambda >= 0.0) return pmax;
  double lo = 0.0, hi = pmax;
  while (hi - lo > 1e-10 * pmax) {
    const double mid = 0.5 * (lo + hi);
    if (s.deriv(mid) - lambda > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Concave minorant of jam_true_objective, tight at p_u = p_k.
inline double jam_surrogate_objective(const std::vector<double>& p_u,
                                      const std::vector<double>& p_k, const JamCoeffs& jc,
                                      double beta0) {
  if (p_u.size() != p_k.size())
    throw std::invalid_argument("jam_surrogate_objective: mismatched slot counts");
  double obj = 0.0;
  for (std::size_t n = 0; n < p_u.size(); ++n)
    obj += detail::make_surrogate_slot(jc, beta0, p_k[n], n).value(p_u[n]);
  return obj;
}

struct JamSurrogateSolution {
  std::vector<double> p;
  double lambda = 0.0; ///< multiplier of sum_n p_n <= n*pbar
};

/// Maximizes the surrogate subject to 0 <= p <= pmax, sum p <= n*pbar via
/// dual bisection on the coupling constraint.
inline JamSurrogateSolution solve_jam_surrogate(const std::vector<double>& p_k,
                                                const JamCoeffs& jc, double beta0, double pbar,
                                                double pmax) {
  const std::size_t n = p_k.size();
  std::vector<detail::JamSurrogateSlot> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i] = detail::make_surrogate_slot(jc, beta0, p_k[i], i);
  const double budget = pbar * static_cast<double>(n);
  auto fill = [&](double lambda) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = detail::surrogate_slot_argmax(slots[i], lambda, pmax);
    return p;
  };
  auto total = [](const std::vector<double>& p) {
    double t = 0.0;
    for (double v : p) t += v;
    return t;
  };

  JamSurrogateSolution sol;
  sol.p = fill(0.0);
  if (total(sol.p) <= budget * (1.0 + 1e-12)) return sol;

  double lo = 0.0, hi = 1.0;
  while (total(fill(hi)) > budget) {
    hi *= 2.0;
    if (hi > 1e30) throw std::runtime_error("solve_jam_surrogate: multiplier bracket failed");
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
  sol.lambda = hi;
  sol.p = fill(sol.lambda);
  return sol;
}

struct JamOptResult {
  std::vector<double> p;
  int iterations = 0;   ///< SCA rounds consumed
  bool converged = true;
};

namespace detail {

/// Exact per-slot secrecy value, for coordinate polish.
inline double jam_slot_value(const JamCoeffs& jc, double beta0, std::size_t n, double p) {
  return log2_1p(jc.c[n] / (beta0 * p + 1.0)) - log2_1p(jc.d[n] / (jc.e[n] * p + 1.0));
}

/// One SCA run from a feasible start; ascends the true objective.
inline std::vector<double> jam_sca_run(std::vector<double> p, const JamCoeffs& jc, double beta0,
                                       double pbar, double pmax, int max_iters, int& iters_out,
                                       bool& converged_out) {
  double prev = jam_true_objective(p, jc, beta0);
  converged_out = false;
  int it = 0;
  for (; it < max_iters; ++it) {
    p = solve_jam_surrogate(p, jc, beta0, pbar, pmax).p;
    const double cur = jam_true_objective(p, jc, beta0);
    const double scale = std::max({std::abs(prev), std::abs(cur), 1e-12});
    if (cur - prev < 1e-6 * scale) {
      prev = std::max(prev, cur);
      converged_out = true;
      ++it;
      break;
    }
    prev = cur;
  }
  iters_out = it;
  return p;
}

/// Cyclic exact line search per slot on the true objective; escapes local
/// optima the per-slot linearization cannot (the exact slot function may be
/// bimodal). Deterministic: dense scan plus local bisection refinement.
inline void jam_coordinate_polish(std::vector<double>& p, const JamCoeffs& jc, double beta0,
                                  double pbar, double pmax) {
  const std::size_t n = p.size();
  const double budget = pbar * static_cast<double>(n);
  double used = 0.0;
  for (double v : p) used += v;
  const int grid = 2048;
  for (int pass = 0; pass < 8; ++pass) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double cap = std::max(0.0, std::min(pmax, p[i] + (budget - used)));
      double best_p = p[i];
      double best_v = jam_slot_value(jc, beta0, i, p[i]);
      for (int k = 0; k <= grid; ++k) {
        const double cand = cap * k / grid;
        const double v = jam_slot_value(jc, beta0, i, cand);
        if (v > best_v + 1e-15) {
          best_v = v;
          best_p = cand;
        }
      }
      // Golden-section refinement around the best grid cell.
      double lo = std::max(0.0, best_p - cap / grid), hi = std::min(cap, best_p + cap / grid);
      for (int r = 0; r < 60 && hi - lo > 1e-15 * std::max(1.0, cap); ++r) {
        const double m1 = lo + (hi - lo) * 0.382, m2 = lo + (hi - lo) * 0.618;
        if (jam_slot_value(jc, beta0, i, m1) < jam_slot_value(jc, beta0, i, m2))
          lo = m1;
        else
          hi = m2;
      }
      const double refined = 0.5 * (lo + hi);
      if (jam_slot_value(jc, beta0, i, refined) > best_v) best_p = refined;
      if (best_p != p[i]) {
        used += best_p - p[i];
        p[i] = best_p;
        improved = true;
      }
    }
    if (!improved) break;
  }
}

}  // namespace detail

/// SCA loop over the jamming powers from feasible start p0. Runs a small set
/// of deterministic starts (incumbent, all-zero, uniform average) because the
/// exact objective is nonconvex, then polishes slot-by-slot; the result never
/// scores below the incumbent or the all-zero point (ties prefer zero power).
inline JamOptResult optimize_jamming_power(const std::vector<double>& p0, const JamCoeffs& jc,
                                           double beta0, double pbar, double pmax,
                                           int max_iters = 100) {
  if (!(pbar > 0.0) || !(pmax > 0.0) || pbar > pmax)
    throw std::invalid_argument("optimize_jamming_power: need 0 < pbar <= pmax");
  const std::size_t n = p0.size();
  const double budget = pbar * static_cast<double>(n);
  double used = 0.0;
  for (double v : p0) {
    if (v < 0.0 || v > pmax * (1.0 + 1e-12))
      throw std::invalid_argument("optimize_jamming_power: start violates peak constraint");
    used += v;
  }
  if (used > budget * (1.0 + 1e-12))
    throw std::invalid_argument("optimize_jamming_power: start violates average constraint");

  JamOptResult res;
  const std::vector<std::vector<double>> starts = {
      p0, std::vector<double>(n, 0.0), std::vector<double>(n, pbar)};
  std::vector<double> best;
  double best_val = -std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    bool conv = false;
    int iters = 0;
    std::vector<double> cand =
        detail::jam_sca_run(start, jc, beta0, pbar, pmax, max_iters, iters, conv);
    detail::jam_coordinate_polish(cand, jc, beta0, pbar, pmax);
    const double val = jam_true_objective(cand, jc, beta0);
    if (val > best_val) {
      best_val = val;
      best = std::move(cand);
      res.iterations = iters;
      res.converged = conv;
    }
  }

  // Tie-break: zero jamming when it scores the same (e.g. p_s = 0 slots).
  const std::vector<double> zeros(n, 0.0);
  const double zero_val = jam_true_objective(zeros, jc, beta0);
  if (best_val <= zero_val + 1e-12 * std::max(1.0, std::abs(zero_val))) best = zeros;

  res.p = std::move(best);
  return res;
}

}  // namespace fduav
