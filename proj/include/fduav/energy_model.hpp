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
#include <span>
#include <stdexcept>
#include <vector>

#include "fduav/geometry.hpp"
#include "fduav/scenario.hpp"

namespace fduav {

namespace detail {

/// Blade-profile speed factor 1 + 3 v^2 / u_tip^2.
inline double profile_factor(double v, const EnergyParams& ep) {
  return 1.0 + 3.0 * v * v / (ep.u_tip * ep.u_tip);
}

/// Induced-power factor sqrt(1 + v^4/(4 v0^4)) - v^2/(2 v0^2), in (0, 1].
/// Evaluated as 1/(sqrt(1+x^2)+x), x = v^2/(2 v0^2), to avoid cancellation.
inline double induced_factor(double v, const EnergyParams& ep) {
  const double x = v * v / (2.0 * ep.v0 * ep.v0);
  return 1.0 / (std::sqrt(1.0 + x * x) + x);
}

/// Parasite-power coefficient (1/2) d0 rho s A, W s^3/m^3.
inline double parasite_coeff(const EnergyParams& ep) {
  return 0.5 * ep.d0 * ep.air_density * ep.solidity * ep.disc_area;
}

}  // namespace detail

/// Rotary-wing propulsion power at level speed v, W. P(0) = p0 + pi.
inline double propulsion_power(double v, const EnergyParams& ep) {
  if (v < 0.0) throw std::invalid_argument("propulsion_power: speed must be nonnegative");
  return ep.p0 * detail::profile_factor(v, ep) +
         ep.pi * std::sqrt(detail::induced_factor(v, ep)) +
         detail::parasite_coeff(ep) * v * v * v;
}

/// Per-slot energy bookkeeping.
struct SlotEnergy {
  double v = 0.0;        ///< slot speed, m/s
  double phi = 0.0;      ///< blade-profile factor
  double varphi = 0.0;   ///< induced factor
  double e_p = 0.0;      ///< propulsion energy, J
};

inline SlotEnergy slot_energy(double v, double slot_len, const EnergyParams& ep) {
  SlotEnergy e;
  e.v = v;
  e.phi = detail::profile_factor(v, ep);
  e.varphi = detail::induced_factor(v, ep);
  e.e_p = slot_len * propulsion_power(v, ep);
  return e;
}

struct TrajectoryEnergy {
  std::vector<SlotEnergy> slots; ///< slot n occupies index n-1
  double total = 0.0;            ///< J
};

/// Propulsion energy along q; slot speed v[n] = ||q[n]-q[n-1]|| / dt.
/// Rejects trajectories that exceed v_max beyond numerical tolerance.
inline TrajectoryEnergy trajectory_energy(const Trajectory& q, const Scenario& s) {
  if (q.size() != static_cast<std::size_t>(s.n_slots) + 1)
    throw std::invalid_argument("trajectory_energy: expected n+1 waypoints");
  TrajectoryEnergy te;
  te.slots.reserve(q.size() - 1);
  for (std::size_t n = 1; n < q.size(); ++n) {
    const double v = distance(q[n], q[n - 1]) / s.slot_len;
    if (v > s.v_max * (1.0 + 1e-6))
      throw std::invalid_argument("trajectory_energy: slot speed exceeds v_max");
    te.slots.push_back(slot_energy(v, s.slot_len, s.energy));
    te.total += te.slots.back().e_p;
  }
  return te;
}

/// Mission energy efficiency, bits per joule: B * dt * sum(max(r,0)) / sum(e).
inline double energy_efficiency(std::span<const double> r_sec, std::span<const double> e_p,
                                const Scenario& s) {
  if (r_sec.size() != e_p.size())
    throw std::invalid_argument("energy_efficiency: mismatched slot counts");
  double bits_per_hz = 0.0, energy = 0.0;
  for (std::size_t i = 0; i < r_sec.size(); ++i) {
    bits_per_hz += std::max(0.0, r_sec[i]);
    energy += e_p[i];
  }
  return s.bandwidth * s.slot_len * bits_per_hz / energy;
}

/// Rate-per-energy convention of the same ratio (no dt factor), (bit/s)/J.
inline double energy_efficiency_rate(std::span<const double> r_sec, std::span<const double> e_p,
                                     const Scenario& s) {
  return energy_efficiency(r_sec, e_p, s) / s.slot_len;
}

}  // namespace fduav
