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

#ifndef SHOTGAME_GAME_HPP_
#define SHOTGAME_GAME_HPP_

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "shotgame/metrics.hpp"

namespace shotgame {

enum class ShooterStrategy { kShoot = 0, kPass = 1 };
enum class DefenderStrategy { kBlocking = 0, kNotBlocking = 1 };

std::string_view strategy_name(ShooterStrategy s);
std::string_view strategy_name(DefenderStrategy d);

inline constexpr double kTieTolerance = 1e-9;

// Shooter payoffs; rows Shoot/Pass, columns Blocking/NotBlocking. The
// defender receives the negation.
struct PayoffTable {
  std::array<std::array<double, 2>, 2> shooter{};

  double at(ShooterStrategy s, DefenderStrategy d) const {
    return shooter[static_cast<int>(s)][static_cast<int>(d)];
  }
  double defender(ShooterStrategy s, DefenderStrategy d) const { return -at(s, d); }

  static PayoffTable from_rows(double a, double b, double c, double d) {
    return PayoffTable{{{{a, b}, {c, d}}}};
  }
};

struct Profile {
  ShooterStrategy shooter;
  DefenderStrategy defender;
  friend bool operator==(const Profile&, const Profile&) = default;
};

struct MixedSolution {
  double p_shoot = 0.0;  // probability the shooter shoots
  double q_block = 0.0;  // probability the defender blocks
  double value = 0.0;    // shooter's expected payoff
};

struct NashSolution {
  std::vector<Profile> pure;
  std::optional<MixedSolution> mixed;  // set only without a pure equilibrium
};

struct PayoffEvaluation {
  PayoffTable table;
  XsotResult xsot_block;
  XsotResult xsot_free;
  XosotResult xosot_block;
  XosotResult xosot_free;
};

PayoffEvaluation build_payoff_table(const MetricsEngine& engine, const Scenario& s);

std::vector<Profile> pure_nash(const PayoffTable& t, double tol = kTieTolerance);

// Closed-form zero-sum solution. With a pure equilibrium the point mass on
// the first one is returned.
MixedSolution mixed_nash_2x2(const PayoffTable& t);

NashSolution solve_game(const PayoffTable& t);

// Expected shooter payoff when shooting with probability p and blocking with q.
double expected_payoff(const PayoffTable& t, double p_shoot, double q_block);

// Largest gain either player obtains by a unilateral pure deviation.
double max_deviation_gain(const PayoffTable& t, double p_shoot, double q_block);
bool is_equilibrium(const PayoffTable& t, double p_shoot, double q_block,
                    double tol = kTieTolerance);

PayoffTable average_tables(std::span<const PayoffTable> tables);

}  // namespace shotgame

#endif  // SHOTGAME_GAME_HPP_
