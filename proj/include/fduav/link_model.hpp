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

#include "fduav/geometry.hpp"
#include "fduav/scenario.hpp"

namespace fduav {

namespace detail {
/// log2(1 + x) without cancellation for small x.
inline double log2_1p(double x) { return std::log1p(x) / std::log(2.0); }
}  // namespace detail

/// LoS channel power gain source -> UAV at horizontal position q.
inline double gain_su(const Vec2& q, const Scenario& s) {
  return s.rho0 / (s.altitude * s.altitude + q.norm2());
}

/// LoS channel power gain UAV -> eavesdropper.
inline double gain_ue(const Vec2& q, const Scenario& s) {
  return s.rho0 / (s.altitude * s.altitude + (q - s.eve_pos).norm2());
}

/// Legitimate rate lower bound under residual self-interference, bps/Hz.
/// r_u = log2(1 + p_s*gamma0 / ((H^2+||q||^2) * (p_u*beta0 + 1))).
inline double rate_uav(double p_s, double p_u, const Vec2& q, const Scenario& s,
                       const DerivedConstants& d) {
  const double dist2 = s.altitude * s.altitude + q.norm2();
  return detail::log2_1p(p_s * d.gamma0 / (dist2 * (p_u * d.beta0 + 1.0)));
}

/// Eavesdropper rate upper bound under UAV jamming, bps/Hz.
/// r_e = log2(1 + p_s*gamma0*||w_e||^-kappa / (gamma0*p_u/(H^2+||q-w_e||^2) + 1)).
inline double rate_eve(double p_s, double p_u, const Vec2& q, const Scenario& s,
                       const DerivedConstants& d) {
  const double direct = p_s * d.gamma0 * std::pow(s.eve_pos.norm(), -s.kappa);
  const double dist2 = s.altitude * s.altitude + (q - s.eve_pos).norm2();
  return detail::log2_1p(direct / (d.gamma0 * p_u / dist2 + 1.0));
}

/// Unclamped worst-case secrecy rate r_u - r_e; may be negative.
inline double secrecy_rate(double p_s, double p_u, const Vec2& q, const Scenario& s,
                           const DerivedConstants& d) {
  return rate_uav(p_s, p_u, q, s, d) - rate_eve(p_s, p_u, q, s, d);
}

inline double secrecy_rate_clamped(double p_s, double p_u, const Vec2& q, const Scenario& s,
                                   const DerivedConstants& d) {
  return std::max(0.0, secrecy_rate(p_s, p_u, q, s, d));
}

/// Per-slot link snapshot.
struct SlotLink {
  double h_su = 0.0;
  double h_ue = 0.0;
  double r_u = 0.0;
  double r_e = 0.0;
  double r_sec = 0.0; ///< clamped at zero
};

inline SlotLink slot_link(double p_s, double p_u, const Vec2& q, const Scenario& s,
                          const DerivedConstants& d) {
  SlotLink l;
  l.h_su = gain_su(q, s);
  l.h_ue = gain_ue(q, s);
  l.r_u = rate_uav(p_s, p_u, q, s, d);
  l.r_e = rate_eve(p_s, p_u, q, s, d);
  l.r_sec = std::max(0.0, l.r_u - l.r_e);
  return l;
}

}  // namespace fduav
