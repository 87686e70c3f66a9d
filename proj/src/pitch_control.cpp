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

#include "shotgame/pitch_control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shotgame/error.hpp"

namespace shotgame {

void ControlParams::validate() const {
  if (!(reaction_time > 0.0 && max_speed > 0.0 && ball_speed > 0.0 &&
        lambda > 0.0 && sigma_time > 0.0)) {
    throw InvalidArgument("control parameters must be strictly positive");
  }
  if (!(dt > 0.0)) throw InvalidArgument("ppcf: dt must be positive");
}

double ControlResult::attacking_total(std::span<const ControlPlayer> players) const {
  double total = 0.0;
  for (std::size_t i = 0; i < players.size() && i < probability.size(); ++i) {
    if (players[i].attacking) total += probability[i];
  }
  return total;
}

double interception_time(const PitchPoint& player, const PitchPoint& target,
                         const ControlParams& p) {
  return p.reaction_time + metric_distance(player, target) / p.max_speed;
}

double ball_travel_time(const PitchPoint& from, const PitchPoint& to,
                        const ControlParams& p) {
  return metric_distance(from, to) / p.ball_speed;
}

double arrival_probability(double t, double tau, const ControlParams& p) {
  const double z = -std::numbers::pi * (t - tau) / (std::numbers::sqrt3 * p.sigma_time);
  return 1.0 / (1.0 + std::exp(z));
}

namespace {

constexpr double kMaxStepMass = 0.005;

std::vector<double> euler(std::span<const double> tau, double horizon, double dt,
                          const ControlParams& p) {
  const std::size_t n = tau.size();
  std::vector<double> prob(n, 0.0), inc(n);
  double total = 0.0;
  double t = 0.0;
  while (t < horizon) {
    const double h = std::min(dt, horizon - t);
    if (h <= 0.0) break;
    const double remaining = std::max(0.0, 1.0 - total);
    double step_total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      inc[j] = remaining * arrival_probability(t, tau[j], p) * p.lambda * h;
      step_total += inc[j];
    }
    const double scale = step_total > remaining && step_total > 0.0
                             ? remaining / step_total
                             : 1.0;
    for (std::size_t j = 0; j < n; ++j) prob[j] += scale * inc[j];
    total = std::min(1.0, total + scale * step_total);
    t += h;
  }
  return prob;
}

}  // namespace

ControlResult ppcf_at(const PitchPoint& target, std::span<const ControlPlayer> players,
                      double horizon, const ControlParams& p) {
  p.validate();
  if (!(horizon >= 0.0)) throw InvalidArgument("ppcf: horizon must be >= 0");

  std::vector<double> tau(players.size());
  for (std::size_t j = 0; j < players.size(); ++j) {
    tau[j] = interception_time(players[j].location, target, p);
  }

  // Split each step so one substep moves at most kMaxStepMass of control;
  // keeps the result close to the continuous solution for any dt.
  const double substeps = std::max(1.0, std::ceil(p.dt * p.lambda / kMaxStepMass));
  ControlResult res;
  res.horizon = horizon;
  res.probability = euler(tau, horizon, p.dt / substeps, p);
  return res;
}

}  // namespace shotgame
