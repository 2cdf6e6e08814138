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

#include "fduav/energy_model.hpp"
#include "fduav/link_model.hpp"

namespace fduav {

// Trajectory subproblem: with powers fixed, maximize the ratio of the
// secrecy-rate sum to the propulsion-power sum over waypoints q[1..N-1].
// Slack variables turn the rates into a linear numerator at an expansion
// point (first-order bounds on the two log terms); the induced-power square
// root is handled through the speed slack s with 1/s^2 <= s^2 + v^2/v0^2,
// itself linearized at the expansion. The resulting fractional program is
// quasi-concave and solved by Dinkelbach iterations; each parametric inner
// problem is concave and solved by projected gradient in displacement space.

inline constexpr double kSpeedSlackFloor = 1e-3;

/// Trajectory plus slot slacks; slot n lives at vector index n-1.
struct TrajVars {
  Trajectory q;
  std::vector<double> g; ///< >= H^2 + ||q[n]||^2
  std::vector<double> m; ///< >= H^2 + ||q[n]-w_e||^2
  std::vector<double> s; ///< >= sqrt(induced factor at slot speed)
};

/// Equality-activated slacks at q. Rejects shape/mobility violations.
inline TrajVars init_slacks(const Trajectory& q, const Scenario& sc) {
  const DerivedConstants dc = derive(sc);
  const std::size_t n = static_cast<std::size_t>(sc.n_slots);
  if (q.size() != n + 1) throw std::invalid_argument("init_slacks: expected n+1 waypoints");
  if (distance(q.front(), sc.q_start) > 1e-6 || distance(q.back(), sc.q_final) > 1e-6)
    throw std::invalid_argument("init_slacks: endpoint mismatch");
  TrajVars tv;
  tv.q = q;
  tv.g.resize(n);
  tv.m.resize(n);
  tv.s.resize(n);
  const double h2 = sc.altitude * sc.altitude;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& wp = q[i + 1];
    const double step2 = (q[i + 1] - q[i]).norm2();
    if (step2 > dc.omega * dc.omega + 1e-6)
      throw std::invalid_argument("init_slacks: mobility constraint violated");
    tv.g[i] = h2 + wp.norm2();
    tv.m[i] = h2 + (wp - sc.eve_pos).norm2();
    const double v = std::sqrt(step2) / sc.slot_len;
    tv.s[i] = std::max(std::sqrt(detail::induced_factor(v, sc.energy)), kSpeedSlackFloor);
  }
  return tv;
}

/// Linearized secrecy-rate numerator at an expansion: affine in (g, m).
struct NumeratorModel {
  std::vector<double> constant; ///< tight value per slot at the expansion
  std::vector<double> g_slope;  ///< >= 0, multiplies (g - g_k)
  std::vector<double> m_slope;  ///< >= 0, multiplies (m - m_k)
  double const_total = 0.0;
  bool zero = false; ///< numerator identically zero (p_s = 0 everywhere)
};

inline NumeratorModel build_numerator_model(const TrajVars& exp, const std::vector<double>& p_s,
                                            const std::vector<double>& p_u, const Scenario& sc,
                                            const DerivedConstants& dc) {
  const std::size_t n = exp.g.size();
  if (p_s.size() != n || p_u.size() != n)
    throw std::invalid_argument("build_numerator_model: mismatched slot counts");
  NumeratorModel md;
  md.constant.resize(n);
  md.g_slope.resize(n);
  md.m_slope.resize(n);
  md.zero = true;
  const double we_loss = std::pow(sc.eve_pos.norm(), -sc.kappa);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = dc.gamma0 * p_s[i] / (dc.beta0 * p_u[i] + 1.0);
    const double dn = p_s[i] * dc.gamma0 * we_loss;
    const double gk = exp.g[i], mk = exp.m[i];
    const double gp = dc.gamma0 * p_u[i];
    md.g_slope[i] = f > 0.0 ? f / (std::numbers::ln2 * (gk + f) * gk) : 0.0;
    md.m_slope[i] =
        (dn > 0.0 && gp > 0.0)
            ? dn * gp / (std::numbers::ln2 * (gp + (dn + 1.0) * mk) * (gp + mk))
            : 0.0;
    md.constant[i] = detail::log2_1p(f / gk) - detail::log2_1p(dn * mk / (gp + mk));
    md.const_total += md.constant[i];
    if (md.g_slope[i] != 0.0 || md.m_slope[i] != 0.0 || md.constant[i] != 0.0) md.zero = false;
  }
  return md;
}

/// Surrogate numerator value at tv given the expansion; a global lower bound
/// on the exact secrecy-rate sum in (g, m), tight at tv = exp.
inline double surrogate_numerator(const TrajVars& tv, const TrajVars& exp,
                                  const std::vector<double>& p_s, const std::vector<double>& p_u,
                                  const Scenario& sc, const DerivedConstants& dc) {
  const NumeratorModel md = build_numerator_model(exp, p_s, p_u, sc, dc);
  double num = md.const_total;
  for (std::size_t i = 0; i < tv.g.size(); ++i)
    num -= md.g_slope[i] * (tv.g[i] - exp.g[i]) + md.m_slope[i] * (tv.m[i] - exp.m[i]);
  return num;
}

/// Exact secrecy-rate sum as a function of the slacks (unclamped).
inline double slack_secrecy_sum(const std::vector<double>& g, const std::vector<double>& m,
                                const std::vector<double>& p_s, const std::vector<double>& p_u,
                                const Scenario& sc, const DerivedConstants& dc) {
  const double we_loss = std::pow(sc.eve_pos.norm(), -sc.kappa);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double f = dc.gamma0 * p_s[i] / (dc.beta0 * p_u[i] + 1.0);
    const double dn = p_s[i] * dc.gamma0 * we_loss;
    const double gp = dc.gamma0 * p_u[i];
    sum += detail::log2_1p(f / g[i]) - detail::log2_1p(dn * m[i] / (gp + m[i]));
  }
  return sum;
}

/// Residuals of the linearized speed-slack constraint at tv given exp:
/// residual[n] = F_k[n] - 1/s[n]^2, nonnegative when feasible.
inline std::vector<double> speed_slack_bound(const TrajVars& tv, const TrajVars& exp,
                                             const Scenario& sc) {
  const std::size_t n = tv.s.size();
  std::vector<double> res(n);
  const double inv = 1.0 / (sc.energy.v0 * sc.energy.v0 * sc.slot_len * sc.slot_len);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 psi = exp.q[i + 1] - exp.q[i];
    const Vec2 dn = tv.q[i + 1] - tv.q[i];
    const double sk = exp.s[i];
    const double f_k = sk * sk + 2.0 * sk * (tv.s[i] - sk) - psi.norm2() * inv +
                       2.0 * inv * psi.dot(dn);
    res[i] = f_k - 1.0 / (tv.s[i] * tv.s[i]);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Internal machinery for the parametric inner problem.
// ---------------------------------------------------------------------------

namespace detail {

inline Vec2 clip_ball(const Vec2& x, double r) {
  const double n2 = x.norm2();
  if (n2 <= r * r) return x;
  return x * (r / std::sqrt(n2));
}

/// Euclidean projection of targets t onto {||d_i|| <= omega, sum d_i = c}.
/// Dual semismooth Newton on the 2-D sum multiplier (warm-started); the sum
/// is then made exact by a slack-weighted correction, and any ball overshoot
/// is removed by blending toward the uniform solution c/n, which preserves
/// the sum. Feasibility of the set (||c|| <= n*omega) is the caller's job.
inline std::vector<Vec2> project_displacements(const std::vector<Vec2>& t, double omega,
                                               const Vec2& c, Vec2& nu) {
  const std::size_t n = t.size();
  auto sum_at = [&](const Vec2& v) {
    Vec2 r{-c.x, -c.y};
    for (const Vec2& ti : t) r += clip_ball(ti + v, omega);
    return r;
  };
  Vec2 r = sum_at(nu);
  double rn = r.norm();
  const double tol = 1e-11 * std::max(1.0, c.norm());
  for (int it = 0; it < 200 && rn > tol; ++it) {
    double jxx = 0.0, jxy = 0.0, jyy = 0.0;
    for (const Vec2& ti : t) {
      const Vec2 x = ti + nu;
      const double nn2 = x.norm2();
      if (nn2 <= omega * omega) {
        jxx += 1.0;
        jyy += 1.0;
      } else {
        const double nn = std::sqrt(nn2);
        const double k = omega / nn;
        const double ux = x.x / nn, uy = x.y / nn;
        jxx += k * (1.0 - ux * ux);
        jxy += k * (-ux * uy);
        jyy += k * (1.0 - uy * uy);
      }
    }
    const double eps = 1e-12 * (jxx + jyy + 1.0);
    jxx += eps;
    jyy += eps;
    const double det = jxx * jyy - jxy * jxy;
    const Vec2 step{-(jyy * r.x - jxy * r.y) / det, -(jxx * r.y - jxy * r.x) / det};
    bool moved = false;
    double theta = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      const Vec2 cand = nu + step * theta;
      const Vec2 rc = sum_at(cand);
      const double rcn = rc.norm();
      if (rcn < rn * (1.0 - 1e-4 * theta) || rcn <= tol) {
        nu = cand;
        r = rc;
        rn = rcn;
        moved = true;
        break;
      }
      theta *= 0.5;
    }
    if (!moved) break; // rank-deficient direction; the correction below finishes
  }

  std::vector<Vec2> d(n);
  Vec2 sum{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = clip_ball(t[i] + nu, omega);
    sum += d[i];
  }
  // Make the endpoint exact: distribute the remaining sum error over slack.
  const Vec2 miss = c - sum;
  double total_slack = 0.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::max(0.0, omega - d[i].norm());
    total_slack += w[i];
  }
  if (total_slack <= 1e-15) {
    std::fill(w.begin(), w.end(), 1.0);
    total_slack = static_cast<double>(n);
  }
  for (std::size_t i = 0; i < n; ++i) d[i] += miss * (w[i] / total_slack);

  double worst = 0.0;
  for (const Vec2& di : d) worst = std::max(worst, di.norm());
  if (worst > omega * (1.0 + 1e-12)) {
    // Blend toward the uniform solution until every ball holds.
    const Vec2 u = c / static_cast<double>(n);
    double lo = 0.0, hi = 1.0;
    auto feasible = [&](double th) {
      for (const Vec2& di : d)
        if ((di + (u - di) * th).norm() > omega * (1.0 + 1e-12)) return false;
      return true;
    };
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (feasible(mid))
        hi = mid;
      else
        lo = mid;
    }
    for (Vec2& di : d) di += (u - di) * hi;
  }
  return d;
}

/// Minimal s with 1/s^2 <= 2*s_k*s + beta (strictly increasing left side gap).
/// Safeguarded Newton from below; clamped to the global slack floor.
inline double solve_speed_slack(double s_k, double beta, double warm) {
  auto h = [&](double s) { return 2.0 * s_k * s + beta - 1.0 / (s * s); };
  double lo = std::max(warm, 1e-9);
  double hi = lo;
  if (h(lo) < 0.0) {
    while (h(hi) < 0.0) hi = hi * 2.0 + 1e-6;
  } else {
    while (h(lo) > 0.0 && lo > 1e-12) lo *= 0.5;
  }
  double s = lo;
  for (int it = 0; it < 100; ++it) {
    const double hs = h(s);
    if (std::abs(hs) <= 1e-14 * (1.0 + std::abs(beta) + 2.0 * s_k * s)) break;
    if (hs < 0.0)
      lo = s;
    else
      hi = s;
    const double hp = 2.0 * s_k + 2.0 / (s * s * s);
    double next = s - hs / hp;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15 * s) {
      s = next;
      break;
    }
    s = next;
  }
  return std::max(s, kSpeedSlackFloor);
}

/// Everything frozen at one expansion point.
struct TrajContext {
  const Scenario* sc = nullptr;
  DerivedConstants dc;
  NumeratorModel model;
  std::vector<Vec2> psi;       ///< expansion displacements
  std::vector<double> s_k;     ///< expansion speed slacks
  std::vector<double> g_k;
  std::vector<double> m_k;
  std::vector<double> beta_const; ///< -s_k^2 - ||psi||^2 * inv
  double inv_v0dt2 = 0.0;
  double c_cub = 0.0;
  double omega = 0.0;
  Vec2 q0;
  Vec2 c_sum; ///< q_final - q_start
  std::size_t n = 0;
};

inline TrajContext make_context(const TrajVars& exp, const NumeratorModel& model,
                                const Scenario& sc, const DerivedConstants& dc) {
  TrajContext ctx;
  ctx.sc = &sc;
  ctx.dc = dc;
  ctx.model = model;
  ctx.n = exp.s.size();
  ctx.inv_v0dt2 = 1.0 / (sc.energy.v0 * sc.energy.v0 * sc.slot_len * sc.slot_len);
  ctx.c_cub = parasite_coeff(sc.energy);
  ctx.omega = dc.omega;
  ctx.q0 = sc.q_start;
  ctx.c_sum = sc.q_final - sc.q_start;
  ctx.psi.resize(ctx.n);
  ctx.s_k = exp.s;
  ctx.g_k = exp.g;
  ctx.m_k = exp.m;
  ctx.beta_const.resize(ctx.n);
  for (std::size_t i = 0; i < ctx.n; ++i) {
    ctx.psi[i] = exp.q[i + 1] - exp.q[i];
    ctx.beta_const[i] = -exp.s[i] * exp.s[i] - ctx.psi[i].norm2() * ctx.inv_v0dt2;
  }
  return ctx;
}

struct TrajEval {
  double num = 0.0;
  double den = 0.0;
  double obj = 0.0; ///< num - lambda * den
  Trajectory q;
  std::vector<double> g, m, s_star;
};

inline TrajEval eval_point(const TrajContext& ctx, const std::vector<Vec2>& d, double lambda,
                           const std::vector<double>* s_warm) {
  const Scenario& sc = *ctx.sc;
  const double h2 = sc.altitude * sc.altitude;
  const double dt = sc.slot_len;
  const double u2 = sc.energy.u_tip * sc.energy.u_tip;
  TrajEval ev;
  ev.q.resize(ctx.n + 1);
  ev.g.resize(ctx.n);
  ev.m.resize(ctx.n);
  ev.s_star.resize(ctx.n);
  ev.q[0] = ctx.q0;
  ev.num = ctx.model.const_total;
  for (std::size_t i = 0; i < ctx.n; ++i) {
    ev.q[i + 1] = ev.q[i] + d[i];
    const Vec2& wp = ev.q[i + 1];
    ev.g[i] = h2 + wp.norm2();
    ev.m[i] = h2 + (wp - sc.eve_pos).norm2();
    ev.num -= ctx.model.g_slope[i] * (ev.g[i] - ctx.g_k[i]) +
              ctx.model.m_slope[i] * (ev.m[i] - ctx.m_k[i]);
    const double v2 = d[i].norm2() / (dt * dt);
    const double beta = ctx.beta_const[i] + 2.0 * ctx.inv_v0dt2 * ctx.psi[i].dot(d[i]);
    const double warm = s_warm ? (*s_warm)[i] : ctx.s_k[i];
    ev.s_star[i] = solve_speed_slack(ctx.s_k[i], beta, warm);
    ev.den += sc.energy.p0 * (1.0 + 3.0 * v2 / u2) + sc.energy.pi * ev.s_star[i] +
              ctx.c_cub * v2 * std::sqrt(v2);
  }
  ev.obj = ev.num - lambda * ev.den;
  return ev;
}

inline std::vector<Vec2> eval_gradient(const TrajContext& ctx, const std::vector<Vec2>& d,
                                       const TrajEval& ev, double lambda) {
  const Scenario& sc = *ctx.sc;
  const double dt = sc.slot_len;
  const double u2 = sc.energy.u_tip * sc.energy.u_tip;
  std::vector<Vec2> grad(ctx.n);
  // Numerator gradient by suffix accumulation over waypoints.
  Vec2 suffix{0.0, 0.0};
  for (std::size_t j = ctx.n; j-- > 0;) {
    const Vec2& wp = ev.q[j + 1];
    suffix += wp * (-2.0 * ctx.model.g_slope[j]) +
              (wp - sc.eve_pos) * (-2.0 * ctx.model.m_slope[j]);
    grad[j] = suffix;
  }
  for (std::size_t i = 0; i < ctx.n; ++i) {
    const double vlen = d[i].norm();
    Vec2 dden = d[i] * (6.0 * sc.energy.p0 / (u2 * dt * dt)) +
                d[i] * (3.0 * ctx.c_cub * vlen / (dt * dt * dt));
    if (ev.s_star[i] > kSpeedSlackFloor * (1.0 + 1e-12)) {
      const double hp = 2.0 * ctx.s_k[i] + 2.0 / (ev.s_star[i] * ev.s_star[i] * ev.s_star[i]);
      dden += ctx.psi[i] * (-2.0 * ctx.inv_v0dt2 / hp * sc.energy.pi);
    }
    grad[i] -= dden * lambda;
  }
  return grad;
}

inline double dot_all(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

inline double norm_all(const std::vector<Vec2>& a) { return std::sqrt(dot_all(a, a)); }

}  // namespace detail

struct InnerOptions {
  int max_iters = 4000;
  double stat_tol = 1e-6;
};

struct InnerResult {
  TrajVars vars;
  double num = 0.0;
  double den = 0.0;
  double obj = 0.0;
  double stat_residual = 0.0;
  int iterations = 0;
  bool stationary = false;
};

namespace detail {

/// Projected-gradient ascent with Barzilai-Borwein steps and an Armijo
/// backtracking safeguard; monotone in the parametric objective.
inline InnerResult inner_solve_impl(const TrajContext& ctx, double lambda, std::vector<Vec2> d,
                                    const InnerOptions& opts) {
  InnerResult out;
  Vec2 nu{0.0, 0.0};
  d = project_displacements(d, ctx.omega, ctx.c_sum, nu);
  TrajEval ev = eval_point(ctx, d, lambda, nullptr);
  std::vector<Vec2> grad = eval_gradient(ctx, d, ev, lambda);
  double alpha = ctx.omega / (norm_all(grad) + 1.0);
  int stall = 0;
  for (int it = 0; it < opts.max_iters; ++it) {
    out.iterations = it + 1;
    // Stationarity probe at unit step.
    Vec2 nu_probe = nu;
    std::vector<Vec2> t(ctx.n);
    for (std::size_t i = 0; i < ctx.n; ++i) t[i] = d[i] + grad[i];
    std::vector<Vec2> probe = project_displacements(t, ctx.omega, ctx.c_sum, nu_probe);
    for (std::size_t i = 0; i < ctx.n; ++i) probe[i] -= d[i];
    const double gn = norm_all(grad);
    out.stat_residual = norm_all(probe) / (1.0 + gn);
    if (out.stat_residual <= opts.stat_tol) {
      out.stationary = true;
      break;
    }

    // Direction from the BB trial step; shrink alpha until it ascends.
    std::vector<Vec2> dir(ctx.n);
    double gd = 0.0;
    bool have_dir = false;
    for (int shrink = 0; shrink < 30; ++shrink) {
      for (std::size_t i = 0; i < ctx.n; ++i) t[i] = d[i] + grad[i] * alpha;
      Vec2 nu_step = nu;
      std::vector<Vec2> dp = project_displacements(t, ctx.omega, ctx.c_sum, nu_step);
      for (std::size_t i = 0; i < ctx.n; ++i) dir[i] = dp[i] - d[i];
      gd = dot_all(grad, dir);
      if (gd > 1e-16 * (1.0 + std::abs(ev.obj))) {
        nu = nu_step;
        have_dir = true;
        break;
      }
      if (norm_all(dir) <= 1e-15 * (1.0 + norm_all(d))) break; // pinned by the constraints
      alpha *= 0.25;
    }
    if (!have_dir) break;

    double theta = 1.0;
    TrajEval ev_new;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      std::vector<Vec2> cand(ctx.n);
      for (std::size_t i = 0; i < ctx.n; ++i) cand[i] = d[i] + dir[i] * theta;
      ev_new = eval_point(ctx, cand, lambda, &ev.s_star);
      if (ev_new.obj >= ev.obj + 1e-4 * theta * gd) {
        d = std::move(cand);
        accepted = true;
        break;
      }
      theta *= 0.5;
    }
    if (!accepted) break;

    std::vector<Vec2> grad_new = eval_gradient(ctx, d, ev_new, lambda);
    // BB step from the accepted move.
    std::vector<Vec2> sdiff(ctx.n), ydiff(ctx.n);
    for (std::size_t i = 0; i < ctx.n; ++i) {
      sdiff[i] = dir[i] * theta;
      ydiff[i] = grad_new[i] - grad[i];
    }
    const double ss = dot_all(sdiff, sdiff);
    const double sy = -dot_all(sdiff, ydiff); // positive for concave objectives
    if (sy > 1e-18 * ss) alpha = std::clamp(ss / sy, 1e-9, 1e9);

    if (ev_new.obj - ev.obj <= 1e-14 * (1.0 + std::abs(ev.obj)))
      ++stall;
    else
      stall = 0;
    ev = std::move(ev_new);
    grad = std::move(grad_new);
    if (stall >= 20) break;
  }

  out.num = ev.num;
  out.den = ev.den;
  out.obj = ev.obj;
  out.vars.q = std::move(ev.q);
  out.vars.g = std::move(ev.g);
  out.vars.m = std::move(ev.m);
  out.vars.s = std::move(ev.s_star);
  return out;
}

}  // namespace detail

/// Maximizes the parametric objective num - lambda*den of the linearized
/// subproblem at the given expansion, over feasible trajectories. Starts from
/// `warm` when given, else from the expansion itself (always feasible).
inline InnerResult inner_concave_solve(double lambda, const TrajVars& exp,
                                       const std::vector<double>& p_s,
                                       const std::vector<double>& p_u, const Scenario& sc,
                                       const DerivedConstants& dc,
                                       const Trajectory* warm = nullptr,
                                       const InnerOptions& opts = {}) {
  const NumeratorModel md = build_numerator_model(exp, p_s, p_u, sc, dc);
  const detail::TrajContext ctx = detail::make_context(exp, md, sc, dc);
  std::vector<Vec2> d(ctx.n);
  const Trajectory& src = warm ? *warm : exp.q;
  for (std::size_t i = 0; i < ctx.n; ++i) d[i] = src[i + 1] - src[i];
  return detail::inner_solve_impl(ctx, lambda, std::move(d), opts);
}

struct DinkelbachResult {
  TrajVars vars;
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Fractional-programming loop: lambda <- num/den at the inner maximizer
/// until |num - lambda*den| <= 1e-6 * den. A structurally zero numerator
/// degenerates to minimizing the denominator at lambda* = 0.
inline DinkelbachResult dinkelbach_solve(const TrajVars& exp, const std::vector<double>& p_s,
                                         const std::vector<double>& p_u, const Scenario& sc,
                                         const DerivedConstants& dc,
                                         const InnerOptions& opts = {}) {
  const NumeratorModel md = build_numerator_model(exp, p_s, p_u, sc, dc);
  const detail::TrajContext ctx = detail::make_context(exp, md, sc, dc);
  std::vector<Vec2> d(ctx.n);
  for (std::size_t i = 0; i < ctx.n; ++i) d[i] = exp.q[i + 1] - exp.q[i];

  DinkelbachResult out;
  if (md.zero) {
    // Any feasible minimizer of the denominator is optimal; lambda* = 0.
    InnerResult res = detail::inner_solve_impl(ctx, 1.0, std::move(d), opts);
    out.vars = std::move(res.vars);
    out.lambda = 0.0;
    out.iterations = 1;
    out.converged = true;
    return out;
  }

  const detail::TrajEval at_exp = detail::eval_point(ctx, d, 0.0, nullptr);
  double lambda = at_exp.num / at_exp.den;
  for (int it = 0; it < 30; ++it) {
    InnerResult res = detail::inner_solve_impl(ctx, lambda, d, opts);
    out.iterations = it + 1;
    const double gap = res.num - lambda * res.den;
    lambda = res.num / res.den;
    for (std::size_t i = 0; i < ctx.n; ++i) d[i] = res.vars.q[i + 1] - res.vars.q[i];
    out.vars = std::move(res.vars);
    if (std::abs(gap) <= 1e-6 * res.den) {
      out.converged = true;
      break;
    }
  }
  out.lambda = lambda;
  return out;
}

struct TrajOptResult {
  Trajectory q;
  std::vector<double> ratio_history; ///< secrecy-sum / power-sum per iteration
  int iterations = 0;
  bool converged = false;
  bool fallback_used = false;
};

/// Unclamped secrecy-rate sum over propulsion-power sum at fixed powers;
/// the quantity the trajectory loop monotonically improves.
inline double secrecy_power_ratio(const Trajectory& q, const std::vector<double>& p_s,
                                  const std::vector<double>& p_u, const Scenario& sc,
                                  const DerivedConstants& dc) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    num += secrecy_rate(p_s[i], p_u[i], q[i + 1], sc, dc);
    den += propulsion_power(distance(q[i + 1], q[i]) / sc.slot_len, sc.energy);
  }
  return num / den;
}

/// Outer SCA loop: re-expand and solve the fractional subproblem until the
/// exact ratio stops improving. A step that decreases the exact ratio is
/// damped toward the expansion (the subproblem objective is quasi-concave,
/// so some damped step cannot lose); if no damping helps, the step is
/// rejected outright and the incumbent returned with fallback_used set.
inline TrajOptResult optimize_trajectory(const Trajectory& q_init, const std::vector<double>& p_s,
                                         const std::vector<double>& p_u, const Scenario& sc,
                                         const DerivedConstants& dc, int max_iters = 50,
                                         const InnerOptions& inner_opts = {}) {
  TrajOptResult out;
  const double span = distance(sc.q_start, sc.q_final);
  if (span >= static_cast<double>(sc.n_slots) * dc.omega * (1.0 - 1e-9)) {
    // Time-critical mission: the uniform straight line is the only feasible
    // trajectory up to tolerance.
    out.q = straight_line_trajectory(sc.q_start, sc.q_final, sc.n_slots);
    out.ratio_history.push_back(secrecy_power_ratio(out.q, p_s, p_u, sc, dc));
    out.converged = true;
    return out;
  }

  Trajectory q = q_init;
  double ratio = secrecy_power_ratio(q, p_s, p_u, sc, dc);
  out.ratio_history.push_back(ratio);
  for (int it = 0; it < max_iters; ++it) {
    const TrajVars exp = init_slacks(q, sc);
    const DinkelbachResult dk = dinkelbach_solve(exp, p_s, p_u, sc, dc, inner_opts);
    Trajectory q_new = dk.vars.q;
    double r_new = secrecy_power_ratio(q_new, p_s, p_u, sc, dc);
    if (r_new < ratio - 1e-9 * std::max(1.0, std::abs(ratio))) {
      bool rescued = false;
      for (double theta = 0.5; theta > 1e-6; theta *= 0.5) {
        Trajectory q_try(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) q_try[i] = q[i] + (q_new[i] - q[i]) * theta;
        const double r_try = secrecy_power_ratio(q_try, p_s, p_u, sc, dc);
        if (r_try >= ratio - 1e-12 * std::max(1.0, std::abs(ratio))) {
          q_new = std::move(q_try);
          r_new = r_try;
          rescued = true;
          break;
        }
      }
      if (!rescued) {
        out.fallback_used = true;
        out.converged = true;
        break;
      }
    }
    const double improvement = (r_new - ratio) / std::max(std::abs(ratio), 1e-12);
    q = std::move(q_new);
    ratio = r_new;
    out.ratio_history.push_back(ratio);
    out.iterations = it + 1;
    if (improvement < 1e-5) {
      out.converged = true;
      break;
    }
  }
  out.q = std::move(q);
  return out;
}

}  // namespace fduav
