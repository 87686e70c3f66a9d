// Copyright 2026 The shotgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "shotgame/block_theory.hpp"
#include "shotgame/error.hpp"
#include "shotgame/metrics.hpp"
#include "shotgame/scenario.hpp"

using namespace shotgame;

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }
double big_phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Distance at which sigma = c4 + c2 * l equals `sigma`.
double distance_for_sigma(const TheoryParams& p, double sigma) {
  return (sigma - p.sigma_intercept) / p.sigma_slope;
}

ScenarioFixture two_blockers() {
  return load_fixture(testing::fixtures_dir() / "scenarios" / "spain-italy-two-blockers.json");
}

std::vector<PlayerSnapshot> snapshots(const Scenario& s) {
  return frame_snapshots(s.shooter, s.players);
}

}  // namespace

TEST_SUITE("block_theory") {
  TEST_CASE("params validation and round trip") {
    CHECK(TheoryParams::reference().valid());
    TheoryParams bad = TheoryParams::reference();
    bad.lower_bound = 0.5;
    CHECK_FALSE(bad.valid());
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    const auto v = TheoryParams::reference().to_vector();
    REQUIRE(v.size() == 5);
    CHECK(TheoryParams::from_vector(v) == TheoryParams::reference());
  }

  TEST_CASE("density at the mode") {
    const TheoryParams p = TheoryParams::reference();
    const double l = distance_for_sigma(p, 1.0);
    const double f = defender_block_density(10.0, 10.0, l, p);
    CHECK(f == doctest::Approx(phi(0) / (big_phi(2.3098) - big_phi(-2.3098))).epsilon(1e-9));
    CHECK(f == doctest::Approx(0.4075).epsilon(1e-3));
  }

  TEST_CASE("density symmetry and truncation") {
    const TheoryParams p = TheoryParams::reference();
    for (double delta : {0.5, 3.0, 17.0, 40.0}) {
      CHECK(defender_block_density(20 + delta, 20, 2.0, p) ==
            doctest::Approx(defender_block_density(20 - delta, 20, 2.0, p)));
    }
    // x = delta / c1 beyond |a| is truncated.
    const double edge = -p.lower_bound * p.angle_scale;
    CHECK(defender_block_density(20 + edge + 1e-6, 20, 0.01, p) == 0.0);
    CHECK(defender_block_density(20 + edge - 1e-3, 20, 0.01, p) > 0.0);
    // Very small sigma pushes the raw density above one.
    TheoryParams tight = p;
    tight.sigma_intercept = 0.01;
    tight.sigma_slope = 0.01;
    CHECK(defender_block_density(5, 5, 0.1, tight) == 1.0);
  }

  TEST_CASE("event-tree chain") {
    const TheoryParams p = TheoryParams::reference();
    CHECK(block_prob_given_angle(5.0, {}, p) == 0.0);
    const std::vector<Defender> one{{5.0, 3.0}};
    const double q1 = defender_block_density(5.0, 5.0, 3.0, p);
    CHECK(block_prob_given_angle(5.0, one, p) == doctest::Approx(q1));
    const std::vector<Defender> two{{5.0, 3.0}, {9.0, 6.0}};
    const double q2 = defender_block_density(5.0, 9.0, 6.0, p);
    CHECK(block_prob_given_angle(5.0, two, p) == doctest::Approx(q1 + (1 - q1) * q2));

    // Two defenders with q = 0.5 each: bisect on distance for a mode density of 0.5.
    double lo = 1e-3, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (defender_block_density(7.0, 7.0, mid, p) > 0.5 ? lo : hi) = mid;
    }
    const double l = 0.5 * (lo + hi);
    const std::vector<Defender> halves{{7.0, l}, {7.0, l}};
    CHECK(defender_block_density(7.0, 7.0, l, p) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(block_prob_given_angle(7.0, halves, p) == doctest::Approx(0.75));
  }

  TEST_CASE("angle grid") {
    const auto g = angle_grid(3.5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g[3] == 3.0);
    CHECK(g.back() == 3.5);
    CHECK(angle_grid(3.0).size() == 4);
  }

  TEST_CASE("filtering") {
    const PitchPoint s{100, 40};
    CHECK(filter_defenders(s, std::vector<PlayerSnapshot>{{{90, 40}, false, false, false}}).empty());
    const std::vector<PlayerSnapshot> frame{{{110, 40}, false, false, false},
                                            {{118, 40}, false, false, true},
                                            {{104, 40}, true, false, false},
                                            {{105, 41}, false, false, false}};
    const auto d = filter_defenders(s, frame);
    REQUIRE(d.size() == 2);
    CHECK(d[0].distance_m < d[1].distance_m);
  }

  TEST_CASE("no defenders gives zero") {
    const PitchPoint s{105, 40};
    CHECK(shot_block_probability(s, std::vector<PlayerSnapshot>{}, TheoryParams::reference()) ==
          0.0);
  }

  TEST_CASE("uniform integrand gives c3 times q") {
    TheoryParams p = TheoryParams::reference();
    p.angle_scale = 1e9;  // density no longer depends on the angle
    const PitchPoint s{100, 40};
    const std::vector<PlayerSnapshot> frame{{{110, 40}, false, false, false}};
    const auto d = filter_defenders(s, frame);
    REQUIRE(d.size() == 1);
    const double q = defender_block_density(0.0, d[0].theta_deg, d[0].distance_m, p);
    CHECK(shot_block_probability(s, frame, p) == doctest::Approx(p.output_scale * q));
  }

  TEST_CASE("two-blocker fixture") {
    const ScenarioFixture fx = two_blockers();
    const Scenario& sc = fx.request.scenario;
    const auto frame = snapshots(sc);
    const TheoryParams p = TheoryParams::reference();
    const auto d = filter_defenders(sc.shooter, frame);
    REQUIRE(d.size() == 2);
    // Defender 19 is nearer, so it gets the first chance to block.
    const auto labelled = [&](const std::string& label) {
      for (const auto& pl : sc.players) {
        if (pl.label == label) return defender_angle_distance(sc.shooter, pl.location);
      }
      FAIL("missing label " << label);
      return DefenderAngle{};
    };
    CHECK(d[0].distance_m == doctest::Approx(labelled("19").distance_m));
    CHECK(d[1].distance_m == doctest::Approx(labelled("13").distance_m));

    // Fine Riemann oracle.
    const double n = feasible_angle_span(sc.shooter);
    const int steps = static_cast<int>(std::ceil(n / 0.01));
    double sum = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double a = i * n / steps, b = (i + 1) * n / steps;
      sum += block_prob_given_angle(0.5 * (a + b), d, p) * (b - a);
    }
    const double oracle = p.output_scale * sum / n;
    CHECK(std::abs(shot_block_probability(sc.shooter, frame, p) - oracle) < 1e-3);
  }

  TEST_CASE("curve covers the span") {
    const ScenarioFixture fx = two_blockers();
    const Scenario& sc = fx.request.scenario;
    const auto curve = block_probability_curve(sc.shooter, snapshots(sc), TheoryParams::reference());
    REQUIRE(curve.size() >= 2);
    CHECK(curve.front().theta_deg == 0.0);
    CHECK(curve.back().theta_deg == doctest::Approx(feasible_angle_span(sc.shooter)));
  }

  TEST_CASE("random frames: bounds, monotonicity and trapezoid halving") {
    Rng rng(2024);
    const TheoryParams p = TheoryParams::reference();
    double worst_halving = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const PitchPoint s = testing::random_point(rng, 70.0);
      auto frame = testing::random_defenders(rng, s, 1 + static_cast<int>(bounded(rng, 5)));
      const double base = shot_block_probability(s, frame, p);
      CHECK(base >= 0.0);
      CHECK(base <= p.output_scale + 1e-12);
      frame.push_back(testing::random_defenders(rng, s, 1)[0]);
      CHECK(shot_block_probability(s, frame, p) >= base - 1e-12);
      if (trial % 10 == 0) {
        worst_halving = std::max(worst_halving, std::abs(shot_block_probability(s, frame, p, 1.0) -
                                                         shot_block_probability(s, frame, p, 0.5)));
      }
    }
    CHECK(worst_halving < 1e-3);
  }

  TEST_CASE("example loss and fit self-consistency") {
    Rng rng(77);
    TheoryParams truth = TheoryParams::reference();
    truth.output_scale = 0.9;
    std::vector<BlockExample> ex;
    for (int i = 0; i < 240; ++i) {
      const PitchPoint s = testing::random_point(rng, 80.0);
      FreezeFrame frame;
      frame.players.push_back({s, true, true, false});
      for (const auto& d : testing::random_defenders(rng, s, static_cast<int>(bounded(rng, 4)))) {
        frame.players.push_back(d);
      }
      BlockExample e = make_block_example(s, &frame, false);
      e.blocked = uniform01(rng) < shot_block_probability(e, truth);
      CHECK(shot_block_probability(e, truth) ==
            doctest::Approx(shot_block_probability(s, frame.players, truth)));
      ex.push_back(e);
    }
    std::vector<int> labels;
    for (const auto& e : ex) labels.push_back(e.blocked);
    const auto folds = stratified_folds(labels, 5, 1);
    const TheoryFit fit = fit_theory_params(ex, folds, optim::Method::kPowell);
    REQUIRE(fit.fold_valid_cel.size() == 5);
    std::vector<std::size_t> all(ex.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    // The refit must do at least as well on its own data as the generator.
    CHECK(block_cel(ex, all, fit.params) <= block_cel(ex, all, truth) + 1e-9);
    CHECK(fit.params.valid());
  }
}
