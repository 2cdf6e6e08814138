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
#include <numbers>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "fduav/source_power.hpp"
#include "helpers.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("per-slot closed form covers the degenerate regimes") {
  // Harmful slots (a <= b) never transmit, at any multiplier.
  CHECK(fduav::per_slot_power(1.0, 2.0, 0.5, 10.0) == 0.0);
  CHECK(fduav::per_slot_power(1.0, 1.0, 0.0, 10.0) == 0.0);
  // Vanishing multiplier saturates the peak on useful slots.
  CHECK(fduav::per_slot_power(2.0, 1.0, 0.0, 10.0) == 10.0);
  // A huge multiplier prices every watt out of the market.
  CHECK_THAT(fduav::per_slot_power(2.0, 1.0, 1e12, 10.0), WithinAbs(0.0, 1e-9));
  CHECK_THROWS(fduav::per_slot_power(-1.0, 1.0, 0.5, 10.0));
}

TEST_CASE("per-slot power is nonincreasing in the multiplier") {
  double prev = std::numeric_limits<double>::infinity();
  for (double mu = 1e-6; mu < 1e6; mu *= 3.0) {
    const double p = fduav::per_slot_power(2.0, 0.5, mu, 10.0);
    CHECK(p <= prev + 1e-15);
    CHECK(p >= 0.0);
    CHECK(p <= 10.0);
    prev = p;
  }
}

TEST_CASE("per-slot interior solution satisfies its stationarity condition") {
  // At an interior optimum the marginal rate gain equals the power price:
  // (a-b) / ((1+a p)(1+b p)) = mu ln 2.
  const double a = 3.0, b = 0.4, pmax = 100.0;
  for (double mu : {1e-3, 1e-2, 0.1, 0.5}) {
    const double p = fduav::per_slot_power(a, b, mu, pmax);
    REQUIRE(p > 0.0);
    REQUIRE(p < pmax);
    const double marginal = (a - b) / ((1.0 + a * p) * (1.0 + b * p));
    CHECK_THAT(marginal, WithinRel(mu * std::numbers::ln2, 1e-9));
  }
}

TEST_CASE("optimizer returns all zeros when every slot is harmful") {
  fduav::SourceCoeffs c;
  c.a = {1.0, 0.5, 2.0};
  c.b = {1.0, 0.7, 2.5};
  const auto res = fduav::optimize_source_power(c, 0.1, 0.4);
  CHECK(res.mu == 0.0);
  for (double p : res.p) CHECK(p == 0.0);
}

TEST_CASE("single-slot problem takes the unconstrained cap") {
  fduav::SourceCoeffs c;
  c.a = {5.0};
  c.b = {0.2};
  // pbar = pmax: the average constraint coincides with the peak.
  const auto res = fduav::optimize_source_power(c, 0.4, 0.4);
  CHECK_THAT(res.p.at(0), WithinRel(0.4, 1e-9));
  // Tight average, loose peak: interior solution on the budget.
  const auto res2 = fduav::optimize_source_power(c, 0.05, 10.0);
  CHECK_THAT(res2.p.at(0), WithinRel(0.05, 1e-6));
  CHECK(res2.mu > 0.0);
}

namespace {

fduav::SourceCoeffs random_coeffs(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> mag{0.1, 50.0};
  std::bernoulli_distribution harmful{0.25};
  fduav::SourceCoeffs c;
  for (int i = 0; i < n; ++i) {
    const double a = mag(rng);
    c.a.push_back(a);
    c.b.push_back(harmful(rng) ? a * 1.5 : a * 0.1 + 0.01);
  }
  return c;
}

}  // namespace

TEST_CASE("optimizer respects the power budget on random instances") {
  std::mt19937_64 rng{7411};
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto c = random_coeffs(rng, n);
    const double pmax = 0.4, pbar = 0.1;
    const auto res = fduav::optimize_source_power(c, pbar, pmax);
    double sum = 0.0;
    for (double p : res.p) {
      CHECK(p >= 0.0);
      CHECK(p <= pmax * (1.0 + 1e-12));
      sum += p;
    }
    CHECK(sum <= n * pbar * (1.0 + 1e-8));
  }
}

TEST_CASE("optimizer beats the obvious feasible competitors") {
  std::mt19937_64 rng{991};
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_coeffs(rng, 5);
    const auto res = fduav::optimize_source_power(c, 0.1, 0.4);
    const double opt = fduav::source_objective(c, res.p);
    CHECK(opt >= fduav::source_objective(c, std::vector<double>(5, 0.0)) - 1e-12);
    CHECK(opt >= fduav::source_objective(c, std::vector<double>(5, 0.1)) - 1e-9);
  }
}

TEST_CASE("interior slots of the full optimizer satisfy stationarity") {
  fduav::SourceCoeffs c;
  c.a = {10.0, 6.0, 3.0, 1.0};
  c.b = {0.5, 0.4, 0.2, 2.0}; // last slot harmful
  const double pbar = 0.05, pmax = 1.0;
  const auto res = fduav::optimize_source_power(c, pbar, pmax);
  REQUIRE(res.mu > 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    const double p = res.p[i];
    if (p <= 0.0 || p >= pmax) continue;
    const double marginal = (c.a[i] - c.b[i]) / ((1.0 + c.a[i] * p) * (1.0 + c.b[i] * p));
    CHECK_THAT(marginal, WithinRel(res.mu * std::numbers::ln2, 1e-6));
  }
  CHECK(res.p[3] == 0.0);
}

TEST_CASE("closed form matches an exhaustive lattice search on 3 slots") {
  std::mt19937_64 rng{20260819};
  const double pmax = 0.4, pbar = 0.12;
  const int levels = 1000;       // per-slot cap = levels * h = pmax
  const double h = pmax / levels; // 1e-3 * pmax grid step
  for (int trial = 0; trial < 12; ++trial) {
    const auto c = random_coeffs(rng, 3);
    const auto res = fduav::optimize_source_power(c, pbar, pmax);
    const double opt = fduav::source_objective(c, res.p);
    const int budget_units = static_cast<int>(std::floor(3 * pbar / h + 1e-9));
    const double grid_best = testutil::lattice_dp_max(
        3, levels, h, budget_units,
        [&](int slot, double p) {
          return fduav::detail::log2_1p(c.a[static_cast<std::size_t>(slot)] * p) -
                 fduav::detail::log2_1p(c.b[static_cast<std::size_t>(slot)] * p);
        });
    INFO("trial " << trial << ": closed form " << opt << " vs lattice " << grid_best);
    CHECK(opt >= grid_best - 1e-5 * std::max(1.0, std::abs(grid_best)));
  }
}
