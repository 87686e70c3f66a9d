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

#ifndef SHOTGAME_METRICS_HPP_
#define SHOTGAME_METRICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shotgame/block_theory.hpp"
#include "shotgame/data_ingest.hpp"
#include "shotgame/nnet.hpp"
#include "shotgame/pitch_control.hpp"

namespace shotgame {

// A freeze-frame player other than the shooter.
struct ScenarioPlayer {
  PitchPoint location;
  bool teammate = false;
  bool keeper = false;
  std::string label;  // jersey number or free text; may be empty
};

struct Scenario {
  std::string shooter_role;
  PitchPoint shooter;
  std::vector<ScenarioPlayer> players;
};

// Builds a scenario from an event and its frame. The actor snapshot becomes
// the shooter, placed at the event location.
Scenario scenario_from_event(const ShotEvent& event, const FreezeFrame* frame);

// The frame as the model sees it: the shooter as actor plus every player.
std::vector<PlayerSnapshot> frame_snapshots(const PitchPoint& shooter,
                                            std::span<const ScenarioPlayer> players);

// Nearest non-keeper opponent; ties go to the smaller theta_d.
std::optional<std::size_t> closest_defender(const PitchPoint& shooter,
                                            std::span<const ScenarioPlayer> players);

struct AttackerBreakdown {
  int player_index = -1;  // -1 for the shooter
  std::string label;
  PitchPoint location;
  double p_on = 0.0;
  double p_off = 0.0;
  double p_block = 0.0;
  std::optional<double> p_control;  // absent for the shooter
  double theory_feature = 0.0;
};

// (1 - min(p_off + p_block, 1)) * p_control.
double compose_p_on(double p_off, double p_block, double p_control = 1.0);

struct XsotResult {
  double value = 0.0;
  AttackerBreakdown breakdown;
};

struct XosotResult {
  double value = 0.0;
  std::optional<std::size_t> best;         // index into breakdowns
  std::vector<AttackerBreakdown> breakdowns;  // frame order
  bool no_teammates = false;
};

class MetricsEngine {
 public:
  MetricsEngine(nnet::MlpModel off_model, nnet::MlpModel block_model, TheoryParams theory,
                ControlParams control = {});

  const TheoryParams& theory() const { return theory_; }
  const ControlParams& control() const { return control_; }
  const nnet::MlpModel& off_model() const { return off_; }
  const nnet::MlpModel& block_model() const { return block_; }

  XsotResult xsot(const Scenario& s, bool remove_closest) const;
  XosotResult xosot(const Scenario& s, bool remove_closest) const;

  // Override used for counterfactual theory parameters.
  MetricsEngine with_theory(const TheoryParams& theory) const;

 private:
  AttackerBreakdown shot_breakdown(const std::string& role, const PitchPoint& shooter,
                                   std::span<const ScenarioPlayer> others) const;

  nnet::MlpModel off_;
  nnet::MlpModel block_;
  TheoryParams theory_;
  ControlParams control_;
};

// Copy of `players` without the closest defender to `shooter`.
std::vector<ScenarioPlayer> without_closest(const PitchPoint& shooter,
                                            std::span<const ScenarioPlayer> players);

}  // namespace shotgame

#endif  // SHOTGAME_METRICS_HPP_
