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
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "shotgame/analysis.hpp"
#include "shotgame/error.hpp"

#ifdef SHOTGAME_HAVE_BOOST_MATH
#include <boost/math/special_functions/gamma.hpp>
#endif

using namespace shotgame;

namespace {

using Counts = std::vector<std::vector<double>>;

struct TeamRow {
  std::string team;
  double xsot, xosot, max_prob, avg_goal, xg;
};

std::vector<TeamRow> read_team_table() {
  std::ifstream in(testing::fixtures_dir() / "team_metrics.csv");
  std::string line;
  std::getline(in, line);
  std::vector<TeamRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string team, placement, cell;
    std::getline(ss, team, ',');
    std::getline(ss, placement, ',');
    double v[5];
    for (double& x : v) {
      std::getline(ss, cell, ',');
      x = std::stod(cell);
    }
    rows.push_back({team, v[0], v[1], v[2], v[3], v[4]});
  }
  return rows;
}

ShotEvent outcome_event(std::int64_t match, int index, Outcome o) {
  ShotEvent e;
  e.match_id = match;
  e.index = index;
  e.outcome = o;
  return e;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("regularized gamma") {
    CHECK(regularized_gamma_p(1.0, 2.0) == doctest::Approx(1 - std::exp(-2.0)).epsilon(1e-12));
    CHECK(regularized_gamma_q(1.0, 0.0) == 1.0);
    CHECK(regularized_gamma_p(3.0, 1.5) + regularized_gamma_q(3.0, 1.5) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // Chi-square with 2 df has survival exp(-x / 2).
    CHECK(chi_square_sf(5.0, 2) == doctest::Approx(std::exp(-2.5)).epsilon(1e-12));
#ifdef SHOTGAME_HAVE_BOOST_MATH
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0, 3.5, 10.0, 40.0}) {
      for (double x : {0.01, 0.3, 1.0, 2.5, 4.0, 9.0, 30.0, 80.0}) {
        worst = std::max(worst, std::abs(regularized_gamma_q(s, x) - boost::math::gamma_q(s, x)));
      }
    }
    CHECK(worst < 1e-10);
#endif
  }

  TEST_CASE("outcome sequence table") {
    const Counts counts = to_counts(load_contingency(testing::fixtures_dir() / "outcome_sequence_counts.json"));
    const ChiSquareResult r = chi_square_independence(counts);
    CHECK(r.df == 4);
    CHECK(std::abs(r.statistic - 0.6163) < 1e-3);
    CHECK(std::abs(r.p_value - 0.9612) < 1e-3);

    // Permuting rows and columns together leaves the statistic unchanged.
    const std::vector<int> perm{2, 0, 1};
    Counts shuffled(3, std::vector<double>(3));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) shuffled[i][j] = counts[perm[i]][perm[j]];
    }
    CHECK(chi_square_independence(shuffled).statistic == doctest::Approx(r.statistic));
  }

  TEST_CASE("chi-square edge cases") {
    const ChiSquareResult prop = chi_square_independence({{10, 20}, {30, 60}});
    CHECK(prop.statistic == doctest::Approx(0.0));
    CHECK(prop.p_value == doctest::Approx(1.0));
    const ChiSquareResult diag = chi_square_independence({{10, 0}, {0, 10}});
    CHECK(diag.statistic == doctest::Approx(20.0));
    CHECK(diag.df == 1);
    CHECK(diag.p_value == doctest::Approx(7.744e-6).epsilon(1e-3));
    CHECK_THROWS_AS(chi_square_independence({{0, 0}, {3, 4}}), InvalidArgument);
  }

  TEST_CASE("contingency from events") {
    const std::vector<ShotEvent> ev{outcome_event(2, 5, Outcome::kOn),
                                    outcome_event(1, 9, Outcome::kBlock),
                                    outcome_event(1, 3, Outcome::kOff),
                                    outcome_event(2, 1, Outcome::kOff)};
    const ContingencyTable within = build_contingency(ev, false);
    // Match 1: Off -> Block. Match 2: Off -> On.
    CHECK(within[0][2] == 1);
    CHECK(within[0][1] == 1);
    long total = 0;
    for (const auto& row : within) {
      for (long v : row) total += v;
    }
    CHECK(total == 2);
    const ContingencyTable across = build_contingency(ev, true);
    CHECK(across[2][0] == 1);  // Block ends match 1, Off opens match 2
  }

  TEST_CASE("pearson") {
    const std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 5};
    // cov 5.5 / sqrt(5 * 8.75)
    const double r = 5.5 / std::sqrt(43.75);
    CHECK(pearson(x, y) == doctest::Approx(r));
    CHECK(std::abs(pearson(x, y) - 0.8) < 0.05);
    std::vector<double> lin, neg, scaled;
    for (double v : x) {
      lin.push_back(2 * v + 3);
      neg.push_back(-v);
    }
    for (double v : y) scaled.push_back(4 * v - 7);
    CHECK(pearson(x, lin) == doctest::Approx(1.0));
    CHECK(pearson(x, neg) == doctest::Approx(-1.0));
    CHECK(pearson(x, scaled) == doctest::Approx(r));
    std::vector<double> neg_y;
    for (double v : y) neg_y.push_back(-v);
    CHECK(pearson(x, neg_y) == doctest::Approx(-r));
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 1, 1, 1}), InvalidArgument);
  }

  TEST_CASE("confusion matrix") {
    const std::vector<int> labels{0, 0, 1, 1, 1};
    const auto perfect = confusion_matrix(std::vector<double>{0.1, 0.2, 0.9, 0.8, 0.7}, labels);
    CHECK(perfect.percent[0][0] == 100.0);
    CHECK(perfect.percent[1][1] == 100.0);
    CHECK(perfect.total() == 5);
    const auto tie = confusion_matrix(std::vector<double>(5, 0.5), labels);
    CHECK(tie.counts[0][1] == 2);
    CHECK(tie.counts[1][1] == 3);
    for (const auto& row : tie.percent) CHECK(row[0] + row[1] == doctest::Approx(100.0));
  }

  TEST_CASE("per-team correlations reproduce the reference figures") {
    const auto rows = read_team_table();
    REQUIRE(rows.size() == 32);
    std::vector<TeamAggregate> teams;
    for (const auto& r : rows) {
      TeamAggregate a;
      a.team = r.team;
      a.matches = 1;
      a.xsot = r.xsot;
      a.xosot = r.xosot;
      a.max_prob = r.max_prob;
      a.avg_goal = r.avg_goal;
      a.xg = r.xg;
      teams.push_back(a);
    }
    const auto corr = team_correlations(teams);
    REQUIRE(corr.size() == 5);
    const double expected[] = {0.46, 0.58, 0.88, 0.93, 0.95};
    for (std::size_t i = 0; i < 5; ++i) {
      CAPTURE(corr[i].first);
      CAPTURE(corr[i].second);
      REQUIRE(corr[i].r.has_value());
      CHECK(std::abs(*corr[i].r - expected[i]) < 0.006);
    }
  }

  TEST_CASE("external team figures") {
    const auto xg = read_teams_xg(testing::fixtures_dir() / "teams_xg.csv");
    CHECK(xg.size() == 32);
    const auto arg = std::find_if(xg.begin(), xg.end(), [](const TeamXg& t) { return t.team == "Argentina"; });
    REQUIRE(arg != xg.end());
    CHECK(arg->xg == doctest::Approx(1.76));
  }

  TEST_CASE("team study aggregates") {
    Rng rng(3);
    std::vector<ShotMetrics> shots;
    const std::vector<std::string> names{"Argentina", "Brazil", "Atlantis", "France"};
    double total = 0.0;
    for (int i = 0; i < 80; ++i) {
      ShotMetrics s;
      s.event_id = "e" + std::to_string(i);
      s.team = names[bounded(rng, names.size())];
      s.match_id = static_cast<std::int64_t>(bounded(rng, 6));
      s.xsot = uniform01(rng);
      s.xosot = uniform01(rng);
      total += s.xsot;
      shots.push_back(s);
    }
    const auto external = read_teams_xg(testing::fixtures_dir() / "teams_xg.csv");
    const TeamStudy study = team_study(shots, external);
    double recon = 0.0;
    for (const auto& t : study.teams) recon += t.matches * t.xsot;
    CHECK(recon == doctest::Approx(total).epsilon(1e-9));
    REQUIRE(study.missing.size() == 1);
    CHECK(study.missing[0] == "Atlantis");
    for (const auto& t : study.teams) CHECK(t.max_prob >= std::max(t.xsot, t.xosot) - 1e-12);

    std::vector<ShotMetrics> lone;
    for (const auto& s : shots) {
      if (s.team == "Brazil") lone.push_back(s);
    }
    const TeamStudy single = team_study(lone, external);
    CHECK(single.teams.size() == 1);
    for (const auto& c : single.correlations) CHECK_FALSE(c.r.has_value());
  }
}
