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

#include "shotgame/game.hpp"

#include <algorithm>
#include <cmath>

#include "shotgame/error.hpp"

namespace shotgame {

std::string_view strategy_name(ShooterStrategy s) {
  return s == ShooterStrategy::kShoot ? "Shoot" : "Pass";
}

std::string_view strategy_name(DefenderStrategy d) {
  return d == DefenderStrategy::kBlocking ? "Blocking" : "NotBlocking";
}

PayoffEvaluation build_payoff_table(const MetricsEngine& engine, const Scenario& s) {
  PayoffEvaluation e;
  e.xsot_block = engine.xsot(s, false);
  e.xsot_free = engine.xsot(s, true);
  e.xosot_block = engine.xosot(s, false);
  e.xosot_free = engine.xosot(s, true);
  e.table = PayoffTable::from_rows(e.xsot_block.value, e.xsot_free.value,
                                   e.xosot_block.value, e.xosot_free.value);
  return e;
}

std::vector<Profile> pure_nash(const PayoffTable& t, double tol) {
  const auto& m = t.shooter;
  for (const auto& row : m) {
    for (double v : row) {
      if (!std::isfinite(v)) throw InvalidArgument("payoff table has a non-finite entry");
    }
  }
  std::vector<Profile> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const bool shooter_best = m[i][j] >= m[1 - i][j] - tol;
      const bool defender_best = m[i][j] <= m[i][1 - j] + tol;
      if (shooter_best && defender_best) {
        out.push_back({static_cast<ShooterStrategy>(i), static_cast<DefenderStrategy>(j)});
      }
    }
  }
  return out;
}

MixedSolution mixed_nash_2x2(const PayoffTable& t) {
  const auto pure = pure_nash(t);
  if (!pure.empty()) {
    const Profile& p = pure.front();
    return {p.shooter == ShooterStrategy::kShoot ? 1.0 : 0.0,
            p.defender == DefenderStrategy::kBlocking ? 1.0 : 0.0, t.at(p.shooter, p.defender)};
  }
  const double a = t.shooter[0][0], b = t.shooter[0][1];
  const double c = t.shooter[1][0], d = t.shooter[1][1];
  const double denom = a - b - c + d;
  if (std::abs(denom) < 1e-15) {
    throw NumericalError("degenerate 2x2 game without a pure equilibrium");
  }
  return {(d - c) / denom, (d - b) / denom, (a * d - b * c) / denom};
}

NashSolution solve_game(const PayoffTable& t) {
  NashSolution s;
  s.pure = pure_nash(t);
  if (s.pure.empty()) s.mixed = mixed_nash_2x2(t);
  return s;
}

double expected_payoff(const PayoffTable& t, double p, double q) {
  const auto& m = t.shooter;
  return p * (q * m[0][0] + (1 - q) * m[0][1]) + (1 - p) * (q * m[1][0] + (1 - q) * m[1][1]);
}

double max_deviation_gain(const PayoffTable& t, double p, double q) {
  const double v = expected_payoff(t, p, q);
  const double shooter_dev = std::max(expected_payoff(t, 1.0, q), expected_payoff(t, 0.0, q));
  // The defender gains by lowering the shooter's payoff.
  const double defender_dev = std::min(expected_payoff(t, p, 1.0), expected_payoff(t, p, 0.0));
  return std::max(shooter_dev - v, v - defender_dev);
}

bool is_equilibrium(const PayoffTable& t, double p, double q, double tol) {
  return max_deviation_gain(t, p, q) <= tol;
}

PayoffTable average_tables(std::span<const PayoffTable> tables) {
  if (tables.empty()) throw InvalidArgument("average_tables: no tables");
  PayoffTable out;
  for (const auto& t : tables) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) out.shooter[i][j] += t.shooter[i][j];
    }
  }
  const double n = static_cast<double>(tables.size());
  for (auto& row : out.shooter) {
    for (double& v : row) v /= n;
  }
  return out;
}

}  // namespace shotgame
