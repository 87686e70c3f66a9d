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

#include "shotgame/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shotgame/error.hpp"

namespace shotgame {
namespace {

constexpr double kXScale = pitch::kLengthMeters / pitch::kLength;
constexpr double kYScale = pitch::kWidthMeters / pitch::kWidth;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Vec2 {
  double x;
  double y;
};

Vec2 metric_delta(const PitchPoint& from, const PitchPoint& to) {
  return {(to.x - from.x) * kXScale, (to.y - from.y) * kYScale};
}

double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

double orient(const PitchPoint& a, const PitchPoint& b, const PitchPoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace

bool on_pitch(const PitchPoint& p) {
  return p.x >= 0.0 && p.x <= pitch::kLength && p.y >= 0.0 &&
         p.y <= pitch::kWidth;
}

MetricPoint to_metric(const PitchPoint& p) {
  return {p.x * kXScale, p.y * kYScale};
}

double metric_distance(const PitchPoint& a, const PitchPoint& b) {
  const Vec2 d = metric_delta(a, b);
  return std::hypot(d.x, d.y);
}

double dist2goal(const PitchPoint& p) {
  return metric_distance(p, pitch::kGoalCenter);
}

double ang2goal(const PitchPoint& p) {
  const double dx = (pitch::kGoalCenter.x - p.x) * kXScale;
  const double dy = (pitch::kGoalCenter.y - p.y) * kYScale;
  if (dx == 0.0) return std::numbers::pi / 2.0;
  return std::abs(std::atan(dy / dx));
}

bool feasible_zone_contains(const PitchPoint& shooter, const PitchPoint& q) {
  if (shooter.x >= pitch::kLength) return false;
  // Orientation tests are invariant under the axis-wise metric scaling, so
  // raw pitch units are fine here.
  const double d1 = orient(shooter, pitch::kBoxLeft, q);
  const double d2 = orient(pitch::kBoxLeft, pitch::kBoxRight, q);
  const double d3 = orient(pitch::kBoxRight, shooter, q);
  const bool has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
  const bool has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
  return !(has_neg && has_pos);
}

double feasible_angle_span(const PitchPoint& shooter) {
  const double d1 = metric_distance(shooter, pitch::kLeftPost);
  const double d2 = metric_distance(shooter, pitch::kRightPost);
  const double w = metric_distance(pitch::kLeftPost, pitch::kRightPost);
  if (shooter.x == pitch::kLength && shooter.y >= pitch::kLeftPost.y &&
      shooter.y <= pitch::kRightPost.y) {
    throw InvalidArgument("feasible_angle_span: shooter at (" +
                          std::to_string(shooter.x) + ", " +
                          std::to_string(shooter.y) +
                          ") lies on the goal mouth");
  }
  const double c = std::clamp((d1 * d1 + d2 * d2 - w * w) / (2.0 * d1 * d2),
                              -1.0, 1.0);
  return std::acos(c) * kRadToDeg;
}

DefenderAngle defender_angle_distance(const PitchPoint& shooter,
                                      const PitchPoint& defender) {
  const Vec2 v = metric_delta(shooter, defender);
  const double dist = std::hypot(v.x, v.y);
  if (dist == 0.0) {
    throw InvalidArgument("defender_angle_distance: defender coincides with "
                          "the shooter");
  }
  const Vec2 left = metric_delta(shooter, pitch::kLeftPost);
  const Vec2 right = metric_delta(shooter, pitch::kRightPost);
  // Orient so that rotating from the left-post ray towards the right-post ray
  // is the positive direction.
  const double sense = cross(left, right) >= 0.0 ? 1.0 : -1.0;
  const double theta = std::atan2(sense * cross(left, v), dot(left, v));
  return {theta * kRadToDeg, dist};
}

}  // namespace shotgame
