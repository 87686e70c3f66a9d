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

#include "shotgame/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shotgame/error.hpp"

namespace shotgame {

Scenario scenario_from_event(const ShotEvent& event, const FreezeFrame* frame) {
  Scenario s{event.shooter_role, event.location, {}};
  if (frame == nullptr) return s;
  for (const auto& p : frame->players) {
    if (p.actor) continue;
    s.players.push_back({p.location, p.teammate, p.keeper, {}});
  }
  return s;
}

std::vector<PlayerSnapshot> frame_snapshots(const PitchPoint& shooter,
                                            std::span<const ScenarioPlayer> players) {
  std::vector<PlayerSnapshot> out;
  out.reserve(players.size() + 1);
  out.push_back({shooter, true, true, false});
  for (const auto& p : players) out.push_back({p.location, p.teammate, false, p.keeper});
  return out;
}

std::optional<std::size_t> closest_defender(const PitchPoint& shooter,
                                            std::span<const ScenarioPlayer> players) {
  std::optional<std::size_t> best;
  double best_dist = std::numeric_limits<double>::infinity();
  double best_theta = std::numeric_limits<double>::infinity();
  auto theta_of = [&](const PitchPoint& q) {
    if (shooter.x >= pitch::kLength || q == shooter) return 0.0;
    return defender_angle_distance(shooter, q).theta_deg;
  };
  for (std::size_t i = 0; i < players.size(); ++i) {
    const auto& p = players[i];
    if (p.teammate || p.keeper) continue;
    const double d = metric_distance(shooter, p.location);
    if (d < best_dist) {
      best = i;
      best_dist = d;
      best_theta = theta_of(p.location);
    } else if (d == best_dist) {
      const double t = theta_of(p.location);
      if (t < best_theta) {
        best = i;
        best_theta = t;
      }
    }
  }
  return best;
}

std::vector<ScenarioPlayer> without_closest(const PitchPoint& shooter,
                                            std::span<const ScenarioPlayer> players) {
  std::vector<ScenarioPlayer> out(players.begin(), players.end());
  if (const auto c = closest_defender(shooter, players)) {
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(*c));
  }
  return out;
}

double compose_p_on(double p_off, double p_block, double p_control) {
  return (1.0 - std::min(p_off + p_block, 1.0)) * p_control;
}

MetricsEngine::MetricsEngine(nnet::MlpModel off_model, nnet::MlpModel block_model,
                             TheoryParams theory, ControlParams control)
    : off_(std::move(off_model)),
      block_(std::move(block_model)),
      theory_(theory),
      control_(control) {
  theory_.validate();
  control_.validate();
}

MetricsEngine MetricsEngine::with_theory(const TheoryParams& theory) const {
  MetricsEngine copy = *this;
  theory.validate();
  copy.theory_ = theory;
  return copy;
}

AttackerBreakdown MetricsEngine::shot_breakdown(const std::string& role,
                                                const PitchPoint& shooter,
                                                std::span<const ScenarioPlayer> others) const {
  ShotEvent event;
  event.shooter_role = role;
  event.location = shooter;
  FreezeFrame frame{"", frame_snapshots(shooter, others)};

  AttackerBreakdown b;
  b.location = shooter;
  b.theory_feature = shot_block_probability(shooter, frame.players, theory_);
  b.p_off = off_.predict(nnet::build_features_off(event));
  nnet::FeatureRow block_row;
  switch (block_.features) {
    case nnet::FeatureSet::kProposed:
      block_row = nnet::build_features_block(event, &frame, theory_);
      break;
    case nnet::FeatureSet::kUnprocessed:
      block_row = nnet::build_features_unprocessed(event, &frame);
      break;
    case nnet::FeatureSet::kBasic:
      block_row = {role, nnet::basic_numeric(shooter), 0};
      break;
  }
  b.p_block = block_.predict(block_row);
  b.p_on = compose_p_on(b.p_off, b.p_block);
  return b;
}

XsotResult MetricsEngine::xsot(const Scenario& s, bool remove_closest) const {
  const std::vector<ScenarioPlayer> players =
      remove_closest ? without_closest(s.shooter, s.players)
                     : std::vector<ScenarioPlayer>(s.players.begin(), s.players.end());
  XsotResult r;
  r.breakdown = shot_breakdown(s.shooter_role, s.shooter, players);
  r.breakdown.label = "Shooter";
  r.value = r.breakdown.p_on;
  return r;
}

XosotResult MetricsEngine::xosot(const Scenario& s, bool remove_closest) const {
  const std::vector<ScenarioPlayer> players =
      remove_closest ? without_closest(s.shooter, s.players)
                     : std::vector<ScenarioPlayer>(s.players.begin(), s.players.end());

  // The original shooter as seen from a receiver's frame.
  const ScenarioPlayer passer{s.shooter, true, false, "Shooter"};
  std::vector<ControlPlayer> competitors;
  competitors.reserve(players.size());
  for (const auto& p : players) competitors.push_back({p.location, p.teammate});

  XosotResult r;
  for (std::size_t a = 0; a < players.size(); ++a) {
    const auto& receiver = players[a];
    if (!receiver.teammate || receiver.keeper) continue;
    std::vector<ScenarioPlayer> others;
    others.reserve(players.size());
    others.push_back(passer);
    for (std::size_t k = 0; k < players.size(); ++k) {
      if (k != a) others.push_back(players[k]);
    }
    AttackerBreakdown b = shot_breakdown("", receiver.location, others);
    const double horizon = ball_travel_time(s.shooter, receiver.location, control_);
    const ControlResult ctl = ppcf_at(receiver.location, competitors, horizon, control_);
    b.p_control = ctl.probability[a];
    b.p_on = compose_p_on(b.p_off, b.p_block, *b.p_control);
    b.player_index = static_cast<int>(a);
    b.label = receiver.label;
    if (!r.best || b.p_on > r.breakdowns[*r.best].p_on) r.best = r.breakdowns.size();
    r.breakdowns.push_back(std::move(b));
  }
  r.no_teammates = r.breakdowns.empty();
  r.value = r.best ? r.breakdowns[*r.best].p_on : 0.0;
  return r;
}

}  // namespace shotgame
