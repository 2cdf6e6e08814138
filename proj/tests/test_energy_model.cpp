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

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "fduav/energy_model.hpp"
#include "fduav/geometry.hpp"
#include "helpers.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using fduav::Vec2;

namespace {
const fduav::EnergyParams kEp{}; // rotary-wing defaults
}

TEST_CASE("hover power is the sum of the blade and induced terms") {
  CHECK(fduav::propulsion_power(0.0, kEp) == kEp.p0 + kEp.pi);
  CHECK_THAT(fduav::propulsion_power(0.0, kEp), WithinAbs(168.49, 1e-9));
  CHECK_THROWS(fduav::propulsion_power(-1.0, kEp));
}

TEST_CASE("fast flight is parasite-dominated with near-cubic growth") {
  const double r = fduav::propulsion_power(200.0, kEp) / fduav::propulsion_power(100.0, kEp);
  CHECK(r > 8.0 * 0.85);
  CHECK(r < 8.0 * 1.15);
}

TEST_CASE("power initially decreases with speed") {
  // Induced power drops faster than blade-profile power rises near hover.
  const double h = 1e-4;
  const double fd = (fduav::propulsion_power(h, kEp) - fduav::propulsion_power(0.0, kEp)) / h;
  CHECK(fd <= 0.0);
  CHECK(fduav::propulsion_power(10.0, kEp) < fduav::propulsion_power(0.0, kEp));
}

TEST_CASE("maximum-range speed sits in the documented band") {
  double best_v = 0.0, best = std::numeric_limits<double>::infinity();
  for (double v = 0.01; v <= 60.0; v += 0.01) {
    const double c = fduav::propulsion_power(v, kEp) / v;
    if (c < best) {
      best = c;
      best_v = v;
    }
  }
  INFO("argmin P(v)/v = " << best_v);
  CHECK(best_v >= 15.0);
  CHECK(best_v <= 25.0);
}

TEST_CASE("induced factor satisfies its defining identity") {
  // varphi = sqrt(1 + v^4/(4 v0^4)) - v^2/(2 v0^2), so
  // (varphi + v^2/(2 v0^2))^2 - v^4/(4 v0^4) = 1 for every speed.
  for (double v : {0.0, 0.5, 3.0, 20.0, 40.0, 120.0, 400.0}) {
    const double x = v * v / (2.0 * kEp.v0 * kEp.v0);
    const double varphi = fduav::detail::induced_factor(v, kEp);
    CHECK_THAT((varphi + x) * (varphi + x) - x * x, WithinAbs(1.0, 1e-9));
    CHECK(varphi > 0.0);
    CHECK(varphi <= 1.0);
  }
}

TEST_CASE("stationary missions burn hover power for the whole period") {
  fduav::Scenario sc = testutil::reference_scenario();
  sc.q_start = sc.q_final = Vec2{50.0, 0.0};
  const fduav::Trajectory q(static_cast<std::size_t>(sc.n_slots) + 1, sc.q_start);
  const fduav::TrajectoryEnergy te = fduav::trajectory_energy(q, sc);
  CHECK_THAT(te.total, WithinRel(sc.n_slots * sc.slot_len * (kEp.p0 + kEp.pi), 1e-12));
  for (const auto& slot : te.slots) CHECK(slot.v == 0.0);
}

TEST_CASE("time-critical straight-line missions fly at v_max in every slot") {
  fduav::Scenario sc = testutil::reference_scenario();
  sc.period = 40.0;
  sc.n_slots = 80; // slot_len stays 0.5, span 1600 = v_max * t exactly
  const fduav::Trajectory q = fduav::straight_line_trajectory(sc.q_start, sc.q_final, sc.n_slots);
  const fduav::TrajectoryEnergy te = fduav::trajectory_energy(q, sc);
  const double slot_e = sc.slot_len * fduav::propulsion_power(40.0, kEp);
  for (const auto& slot : te.slots) {
    CHECK_THAT(slot.v, WithinRel(40.0, 1e-9));
    CHECK_THAT(slot.e_p, WithinRel(slot_e, 1e-9));
  }
  CHECK_THAT(te.total, WithinRel(80.0 * slot_e, 1e-9));
}

TEST_CASE("energy of uniform motion is invariant to slot refinement") {
  fduav::Scenario coarse = testutil::reference_scenario();
  fduav::Scenario fine = coarse;
  fine.slot_len = coarse.slot_len / 2.0;
  fine.n_slots = coarse.n_slots * 2;
  const auto qc = fduav::straight_line_trajectory(coarse.q_start, coarse.q_final, coarse.n_slots);
  const auto qf = fduav::straight_line_trajectory(fine.q_start, fine.q_final, fine.n_slots);
  CHECK_THAT(fduav::trajectory_energy(qf, fine).total,
             WithinRel(fduav::trajectory_energy(qc, coarse).total, 1e-9));
}

TEST_CASE("overspeed trajectories are rejected, boundary speeds accepted") {
  fduav::Scenario sc = testutil::reference_scenario();
  sc.n_slots = 2;
  sc.period = 1.0; // slot_len 0.5, omega 20
  sc.q_start = Vec2{0.0, 0.0};
  sc.q_final = Vec2{0.0, 40.0};
  fduav::Trajectory q{Vec2{0.0, 0.0}, Vec2{0.0, 20.0}, Vec2{0.0, 40.0}};
  CHECK_NOTHROW(fduav::trajectory_energy(q, sc));
  q[1].y = 20.0 * (1.0 + 2e-6); // beyond the acceptance tolerance
  CHECK_THROWS(fduav::trajectory_energy(q, sc));
  CHECK_THROWS(fduav::trajectory_energy(fduav::Trajectory(2, Vec2{}), sc));
}

TEST_CASE("trajectory energy is the exact sum of slot energies") {
  const fduav::Scenario sc = testutil::scaled_scenario(8.0, 0.5);
  // A sub-span path leaves speed headroom for the lateral perturbations.
  const Vec2 mid = sc.q_start + (sc.q_final - sc.q_start) * 0.3;
  fduav::Trajectory q = fduav::straight_line_trajectory(sc.q_start, mid, sc.n_slots);
  for (std::size_t n = 1; n + 1 < q.size(); ++n) q[n].x += (n % 2 ? 3.0 : -2.0);
  const fduav::TrajectoryEnergy te = fduav::trajectory_energy(q, sc);
  double sum = 0.0;
  for (const auto& slot : te.slots) sum += slot.e_p;
  CHECK(te.total == sum);
  REQUIRE(te.slots.size() == static_cast<std::size_t>(sc.n_slots));
  for (std::size_t n = 0; n < te.slots.size(); ++n)
    CHECK_THAT(te.slots[n].v, WithinRel(distance(q[n + 1], q[n]) / sc.slot_len, 1e-12));
}

TEST_CASE("efficiency clamps negative rates and scales by bandwidth and slot length") {
  const fduav::Scenario sc = testutil::reference_scenario();
  const std::vector<double> r{2.0, -1.0, 0.0, 3.0};
  const std::vector<double> e{10.0, 10.0, 10.0, 10.0};
  // Only the positive rates count: (2+0+0+3) bps/Hz * 1 MHz * 0.5 s / 40 J.
  CHECK_THAT(fduav::energy_efficiency(r, e, sc), WithinRel(1e6 * 0.5 * 5.0 / 40.0, 1e-12));
  CHECK_THAT(fduav::energy_efficiency_rate(r, e, sc), WithinRel(1e6 * 5.0 / 40.0, 1e-12));
  CHECK_THROWS(fduav::energy_efficiency(std::vector<double>{1.0}, e, sc));
}

TEST_CASE("mission efficiency matches an independently tabulated flight") {
  // Fixed powers on the time-critical straight line, recomputed here from
  // first principles: per-slot midpoint positions, per-slot rates, hand sums.
  fduav::Scenario sc = testutil::reference_scenario();
  sc.period = 40.0;
  sc.n_slots = 80;
  const fduav::DerivedConstants dc = fduav::derive(sc);
  const auto q = fduav::straight_line_trajectory(sc.q_start, sc.q_final, sc.n_slots);
  const double ps = sc.pbar_s, pu = sc.pbar_u;

  double bits_per_hz = 0.0;
  double energy = 0.0;
  std::vector<double> r_vec, e_vec;
  for (int n = 1; n <= sc.n_slots; ++n) {
    const fduav::Vec2 pos = q[static_cast<std::size_t>(n)];
    const double du2 = sc.altitude * sc.altitude + pos.norm2();
    const double de2 = sc.altitude * sc.altitude + (pos - sc.eve_pos).norm2();
    const double r_u = std::log2(1.0 + ps * dc.gamma0 / (du2 * (pu * dc.beta0 + 1.0)));
    const double r_e =
        std::log2(1.0 + ps * dc.gamma0 * std::pow(sc.eve_pos.norm(), -sc.kappa) /
                            (dc.gamma0 * pu / de2 + 1.0));
    const double v = distance(q[static_cast<std::size_t>(n)], q[static_cast<std::size_t>(n - 1)]) /
                     sc.slot_len;
    const double pe = sc.energy.p0 * (1.0 + 3.0 * v * v / (sc.energy.u_tip * sc.energy.u_tip)) +
                      sc.energy.pi * std::sqrt(std::sqrt(1.0 + std::pow(v, 4.0) /
                                                                   (4.0 * std::pow(sc.energy.v0, 4.0))) -
                                               v * v / (2.0 * sc.energy.v0 * sc.energy.v0)) +
                      0.5 * sc.energy.d0 * sc.energy.air_density * sc.energy.solidity *
                          sc.energy.disc_area * v * v * v;
    bits_per_hz += std::max(0.0, r_u - r_e);
    energy += sc.slot_len * pe;
    r_vec.push_back(r_u - r_e);
    e_vec.push_back(sc.slot_len * pe);
  }
  const double expected = sc.bandwidth * sc.slot_len * bits_per_hz / energy;
  CHECK_THAT(fduav::energy_efficiency(r_vec, e_vec, sc), WithinRel(expected, 1e-9));
  CHECK_THAT(fduav::trajectory_energy(q, sc).total, WithinRel(energy, 1e-9));
}
