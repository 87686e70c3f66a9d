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

#ifndef SHOTGAME_PITCH_CONTROL_HPP_
#define SHOTGAME_PITCH_CONTROL_HPP_

#include <span>
#include <vector>

#include "shotgame/geometry.hpp"

namespace shotgame {

struct ControlParams {
  double reaction_time = 0.7;  // s
  double max_speed = 5.0;      // m/s
  double ball_speed = 15.0;    // m/s
  double lambda = 4.3;         // 1/s
  double sigma_time = 0.45;    // s, spread of the arrival-time logistic
  double dt = 0.04;            // s, Euler step

  void validate() const;
};

struct ControlPlayer {
  PitchPoint location;
  bool attacking = false;
};

struct ControlResult {
  std::vector<double> probability;  // aligned with the input players
  double horizon = 0.0;             // T, seconds

  double attacking_total(std::span<const ControlPlayer> players) const;
};

// Players are treated as stationary, so the expected arrival time is the
// reaction time plus straight-line running time at top speed.
double interception_time(const PitchPoint& player, const PitchPoint& target,
                         const ControlParams& p);

double ball_travel_time(const PitchPoint& from, const PitchPoint& to,
                        const ControlParams& p);

// Logistic probability that a player with expected arrival `tau` has reached
// the target by time t.
double arrival_probability(double t, double tau, const ControlParams& p);

// Forward-Euler integration of the coupled control equations from 0 to
// `horizon`. Each dt step is subdivided so that a substep can move at most
// 0.5% of control, which makes the result insensitive to dt. Every listed
// player competes for the ball; if a step would push the total above one the
// increments are scaled down proportionally.
ControlResult ppcf_at(const PitchPoint& target, std::span<const ControlPlayer> players,
                      double horizon, const ControlParams& p);

}  // namespace shotgame

#endif  // SHOTGAME_PITCH_CONTROL_HPP_
