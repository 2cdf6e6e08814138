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
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "fduav/baselines.hpp"
#include "helpers.hpp"

using Catch::Matchers::WithinRel;
using fduav::Vec2;

namespace {

struct DeskMission {
  fduav::Scenario sc; // 16 slots, omega 20, span 160: half the reach
  fduav::DerivedConstants dc;

  DeskMission() : sc(testutil::scaled_scenario(8.0, 0.5)) {
    sc.q_start = sc.q_start * 0.5;
    sc.q_final = sc.q_final * 0.5;
    dc = fduav::derive(sc);
  }
};

}  // namespace

TEST_CASE("scheme names round-trip through the parser") {
  for (auto id : {fduav::SchemeId::pt, fduav::SchemeId::njt, fduav::SchemeId::npt,
                  fduav::SchemeId::pbet}) {
    const auto parsed = fduav::parse_scheme(fduav::to_string(id));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == id);
  }
  CHECK_FALSE(fduav::parse_scheme("PT").has_value());
  CHECK_FALSE(fduav::parse_scheme("").has_value());
  CHECK_FALSE(fduav::parse_scheme("joint").has_value());
}

TEST_CASE("slot counting rounds up except on exact multiples") {
  CHECK(fduav::detail::slots_needed(0.0, 20.0) == 0);
  CHECK(fduav::detail::slots_needed(19.9, 20.0) == 1);
  CHECK(fduav::detail::slots_needed(20.0, 20.0) == 1);
  CHECK(fduav::detail::slots_needed(20.1, 20.0) == 2);
  CHECK(fduav::detail::slots_needed(40.0, 20.0) == 2);
  CHECK(fduav::detail::slots_needed(1600.0, 20.0) == 80);
}

TEST_CASE_METHOD(DeskMission, "the no-jamming benchmark never jams") {
  const auto res = fduav::solve_njt(sc);
  for (double p : res.p_u) CHECK(p == 0.0);
  CHECK(res.ee_bits_per_joule > 0.0);
  // Without jamming the residual self-interference level cannot matter.
  fduav::Scenario deaf = sc;
  deaf.sigma_rsi2 = fduav::dbm_to_watts(-70.0);
  const auto res2 = fduav::solve_njt(deaf);
  CHECK(res.ee_bits_per_joule == res2.ee_bits_per_joule);
  CHECK(res.p_s == res2.p_s);
  REQUIRE(res.trajectory.size() == res2.trajectory.size());
  for (std::size_t i = 0; i < res.trajectory.size(); ++i)
    CHECK(res.trajectory[i] == res2.trajectory[i]);
}

TEST_CASE_METHOD(DeskMission, "the fixed-power benchmark keeps both powers at the average") {
  const auto res = fduav::solve_npt(sc);
  for (double p : res.p_s) CHECK(p == sc.pbar_s);
  for (double p : res.p_u) CHECK(p == sc.pbar_u);
  CHECK(res.history.back() >= res.history.front() - 1e-9 * res.history.front());
}

TEST_CASE_METHOD(DeskMission, "the best-effort path hovers above the source when time allows") {
  // 16 slots, legs need ceil(80.16/20) = 5 slots each: 6 hover slots remain.
  const auto q = fduav::build_best_effort_trajectory(sc);
  REQUIRE(q.size() == 17);
  CHECK(q.front() == sc.q_start);
  CHECK(q.back() == sc.q_final);
  const int n1 = fduav::detail::slots_needed(sc.q_start.norm(), dc.omega);
  const int n3 = fduav::detail::slots_needed(sc.q_final.norm(), dc.omega);
  int hover = 0;
  for (std::size_t k = 1; k < q.size(); ++k) {
    CHECK(distance(q[k], q[k - 1]) <= dc.omega * (1.0 + 1e-9));
    if (distance(q[k], q[k - 1]) == 0.0 && q[k] == Vec2{0.0, 0.0}) ++hover;
  }
  CHECK(hover == sc.n_slots - n1 - n3);
  // The turn point is exactly above the source.
  CHECK(q[static_cast<std::size_t>(n1)] == Vec2{0.0, 0.0});
}

TEST_CASE("the best-effort path degenerates to the straight line when time-critical") {
  fduav::Scenario sc = testutil::reference_scenario();
  sc.period = 40.0;
  sc.n_slots = 80; // span = reach: no slack at all
  const auto q = fduav::build_best_effort_trajectory(sc);
  const auto line = fduav::straight_line_trajectory(sc.q_start, sc.q_final, sc.n_slots);
  REQUIRE(q.size() == line.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK_THAT(q[i].x, Catch::Matchers::WithinAbs(line[i].x, 1e-6));
    CHECK_THAT(q[i].y, Catch::Matchers::WithinAbs(line[i].y, 1e-6));
  }
}

TEST_CASE("a short-slack mission turns part-way toward the source") {
  fduav::Scenario sc = testutil::scaled_scenario(8.0, 0.5);
  sc.q_start = Vec2{150.0, -140.0}; // span 280 fits the 320 m budget, but the
  sc.q_final = Vec2{150.0, 140.0};  // detour over the source needs 410 m
  std::vector<std::string> notes;
  const auto q = fduav::build_best_effort_trajectory(sc, &notes);
  REQUIRE(notes.size() == 1);
  CHECK(notes[0].find("short") != std::string::npos);
  // Feasible, on-grid and never above the speed limit.
  const fduav::DerivedConstants dc = fduav::derive(sc);
  double path_len = 0.0;
  for (std::size_t k = 1; k < q.size(); ++k) {
    const double step = distance(q[k], q[k - 1]);
    CHECK(step <= dc.omega * (1.0 + 1e-9));
    path_len += step;
  }
  CHECK(path_len <= sc.n_slots * dc.omega * (1.0 + 1e-9));
  // The turn point lies strictly between the start and the source.
  double closest = 1e18;
  for (const Vec2& wp : q) closest = std::min(closest, wp.norm());
  CHECK(closest > 1.0);
  CHECK(closest < sc.q_start.norm());
}

TEST_CASE_METHOD(DeskMission, "the best-effort benchmark flies the constructed path verbatim") {
  const auto expected = fduav::build_best_effort_trajectory(sc);
  const auto res = fduav::solve_pbet(sc);
  REQUIRE(res.trajectory.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(res.trajectory[i] == expected[i]);
  // Hover slots burn exactly the hover power; full-speed slots burn the most.
  const double hover_e = sc.slot_len * (sc.energy.p0 + sc.energy.pi);
  double max_e = 0.0;
  bool saw_hover = false;
  for (const auto& s : res.slots) {
    max_e = std::max(max_e, s.e_p);
    if (s.v == 0.0) {
      CHECK_THAT(s.e_p, WithinRel(hover_e, 1e-12));
      saw_hover = true;
    }
  }
  CHECK(saw_hover);
  CHECK_THAT(max_e, WithinRel(sc.slot_len * fduav::propulsion_power(sc.v_max, sc.energy), 1e-9));
}

TEST_CASE_METHOD(DeskMission, "the joint design dominates every benchmark") {
  const auto pt = fduav::solve_pt(sc);
  for (auto id : {fduav::SchemeId::njt, fduav::SchemeId::npt, fduav::SchemeId::pbet}) {
    const auto res = fduav::solve_scheme(id, sc);
    INFO("scheme " << fduav::to_string(id) << ": " << res.ee_bits_per_joule << " vs pt "
                   << pt.ee_bits_per_joule);
    CHECK(pt.ee_bits_per_joule >= res.ee_bits_per_joule * (1.0 - 1e-6));
  }
}
