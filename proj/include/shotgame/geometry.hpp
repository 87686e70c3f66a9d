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

#ifndef SHOTGAME_GEOMETRY_HPP_
#define SHOTGAME_GEOMETRY_HPP_

#include <utility>

namespace shotgame {

// StatsBomb pitch coordinates: x along the length (0..120), y along the
// width (0..80). The attacking goal is always at x = 120.
struct PitchPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PitchPoint&, const PitchPoint&) = default;
};

// Meters on a 105 x 68 pitch.
struct MetricPoint {
  double mx = 0.0;
  double my = 0.0;
};

namespace pitch {

inline constexpr double kLength = 120.0;
inline constexpr double kWidth = 80.0;
inline constexpr double kLengthMeters = 105.0;
inline constexpr double kWidthMeters = 68.0;

inline constexpr PitchPoint kGoalCenter{120.0, 40.0};
inline constexpr PitchPoint kLeftPost{120.0, 36.0};
inline constexpr PitchPoint kRightPost{120.0, 44.0};
// Where the penalty-area side lines meet the goal line.
inline constexpr PitchPoint kBoxLeft{120.0, 18.0};
inline constexpr PitchPoint kBoxRight{120.0, 62.0};

}  // namespace pitch

bool on_pitch(const PitchPoint& p);

MetricPoint to_metric(const PitchPoint& p);

// Metric distance between two pitch points.
double metric_distance(const PitchPoint& a, const PitchPoint& b);

// Distance in meters from p to the goal-line midpoint.
double dist2goal(const PitchPoint& p);

// Absolute angle (radians) between the length axis and the line from p to the
// goal-line midpoint. Returns pi/2 on the goal line itself.
double ang2goal(const PitchPoint& p);

// Closed triangle (shooter, box-left, box-right). Always false when the
// shooter stands on or behind the goal line.
bool feasible_zone_contains(const PitchPoint& shooter, const PitchPoint& q);

// Interior angle at the shooter (degrees) between the rays to both posts.
// Throws InvalidArgument when the shooter lies on the segment between posts.
double feasible_angle_span(const PitchPoint& shooter);

struct DefenderAngle {
  double theta_deg = 0.0;  // signed, from the shooter->left-post ray
  double distance_m = 0.0;
};

// Angle is positive towards the right post, so the right-post ray sits at
// theta = feasible_angle_span(shooter). Throws on zero distance.
DefenderAngle defender_angle_distance(const PitchPoint& shooter,
                                      const PitchPoint& defender);

}  // namespace shotgame

#endif  // SHOTGAME_GEOMETRY_HPP_
