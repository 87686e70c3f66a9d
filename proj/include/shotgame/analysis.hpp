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

#ifndef SHOTGAME_ANALYSIS_HPP_
#define SHOTGAME_ANALYSIS_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shotgame/data_ingest.hpp"
#include "shotgame/metrics.hpp"

namespace shotgame {

// Regularized incomplete gamma functions for s > 0, x >= 0.
double regularized_gamma_p(double s, double x);
double regularized_gamma_q(double s, double x);

// Survival function of the chi-square distribution.
double chi_square_sf(double statistic, int df);

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::vector<std::vector<double>> expected;
};

// Pearson test of independence on an r x c table of counts.
ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& counts);

// Rows are the previous outcome, columns the following one, both ordered
// Off, On, Block.
using ContingencyTable = std::array<std::array<long, 3>, 3>;

int contingency_index(Outcome o);
std::vector<std::vector<double>> to_counts(const ContingencyTable& t);

// Consecutive outcome pairs. Events are grouped by match, ordered by index;
// `cross_match` also pairs the last shot of a match with the first of the next.
ContingencyTable build_contingency(std::span<const ShotEvent> events, bool cross_match);

ContingencyTable load_contingency(const std::filesystem::path& file);

double pearson(std::span<const double> xs, std::span<const double> ys);

struct ConfusionMatrix {
  std::array<std::array<long, 2>, 2> counts{};      // [actual][predicted]
  std::array<std::array<double, 2>, 2> percent{};   // row-normalized, in %
  long total() const;
};

// Predicted positive when prob >= threshold.
ConfusionMatrix confusion_matrix(std::span<const double> probs, std::span<const int> labels,
                                 double threshold = 0.5);

struct TeamXg {
  std::string team;
  std::string placement;
  double avg_goal = 0.0;
  double xg = 0.0;
};

std::vector<TeamXg> read_teams_xg(const std::filesystem::path& csv);

struct ShotMetrics {
  std::string event_id;
  std::string team;
  std::int64_t match_id = 0;
  double xsot = 0.0;
  double xosot = 0.0;
  double max_prob() const { return std::max(xsot, xosot); }
};

struct TeamAggregate {
  std::string team;
  int matches = 0;
  double xsot = 0.0;      // per-match average of summed values
  double xosot = 0.0;
  double max_prob = 0.0;
  std::optional<double> avg_goal;
  std::optional<double> xg;
};

struct CorrelationEntry {
  std::string first;
  std::string second;
  std::optional<double> r;  // empty when undefined (e.g. zero variance)
};

struct TeamStudy {
  std::vector<TeamAggregate> teams;
  std::vector<std::string> missing;  // teams without external figures
  std::vector<CorrelationEntry> correlations;
};

std::vector<ShotMetrics> score_shots(std::span<const ShotEvent> events, const FrameMap& frames,
                                     const MetricsEngine& engine, unsigned threads = 0);

TeamStudy team_study(std::span<const ShotMetrics> shots, std::span<const TeamXg> external);

// Correlation pairs reported for the team study, computed over teams with
// external figures.
std::vector<CorrelationEntry> team_correlations(std::span<const TeamAggregate> teams);

}  // namespace shotgame

#endif  // SHOTGAME_ANALYSIS_HPP_
