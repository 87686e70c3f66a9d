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

#ifndef SHOTGAME_TESTS_ORACLES_HPP_
#define SHOTGAME_TESTS_ORACLES_HPP_

#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "shotgame/data_ingest.hpp"
#include "shotgame/game.hpp"
#include "shotgame/pitch_control.hpp"
#include "shotgame/random.hpp"

namespace shotgame::testing {

inline std::filesystem::path source_dir() { return SHOTGAME_SOURCE_DIR; }
inline std::filesystem::path fixtures_dir() { return source_dir() / "data" / "fixtures"; }
inline std::filesystem::path corpus_dir() { return fixtures_dir() / "corpus"; }
inline std::filesystem::path models_dir() { return source_dir() / "data" / "models"; }

// Minimax by brute force over a grid of mixed strategies.
inline MixedSolution grid_minimax(const PayoffTable& t, double step = 0.001) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  MixedSolution best{0.0, 0.0, -INFINITY};
  for (int i = 0; i <= n; ++i) {
    const double p = i * step;
    const double worst = std::min(expected_payoff(t, p, 0.0), expected_payoff(t, p, 1.0));
    if (worst > best.value) best = {p, 0.0, worst};
  }
  double best_q = 0.0, lowest = INFINITY;
  for (int j = 0; j <= n; ++j) {
    const double q = j * step;
    const double worst = std::max(expected_payoff(t, 1.0, q), expected_payoff(t, 0.0, q));
    if (worst < lowest) {
      lowest = worst;
      best_q = q;
    }
  }
  best.q_block = best_q;
  return best;
}

// One player alone: dP/dt = (1 - P) f(t) lambda has
// P(T) = 1 - exp(-lambda * integral_0^T f).
inline double single_player_control(double tau, double horizon, const ControlParams& p) {
  const double k = std::numbers::pi / (std::sqrt(3.0) * p.sigma_time);
  auto softplus = [](double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); };
  const double integral = (softplus(k * (horizon - tau)) - softplus(-k * tau)) / k;
  return 1.0 - std::exp(-p.lambda * integral);
}

inline PitchPoint random_point(Rng& rng, double x_lo = 60.0) {
  return {uniform(rng, x_lo, 119.5), uniform(rng, 0.5, 79.5)};
}

// Random opponents, a few of them inside the shooter's block zone.
inline std::vector<PlayerSnapshot> random_defenders(Rng& rng, const PitchPoint& shooter, int n) {
  std::vector<PlayerSnapshot> out;
  for (int i = 0; i < n; ++i) {
    PitchPoint q;
    if (uniform01(rng) < 0.6) {
      double u = uniform01(rng), v = uniform01(rng);
      if (u + v > 1.0) {
        u = 1.0 - u;
        v = 1.0 - v;
      }
      q = {shooter.x + u * (120.0 - shooter.x) + v * (120.0 - shooter.x),
           shooter.y + u * (18.0 - shooter.y) + v * (62.0 - shooter.y)};
      q.x = std::min(q.x, 119.9);
    } else {
      q = random_point(rng);
    }
    if (q == shooter) q.x -= 0.5;
    out.push_back({q, false, false, false});
  }
  return out;
}

}  // namespace shotgame::testing

#endif  // SHOTGAME_TESTS_ORACLES_HPP_
