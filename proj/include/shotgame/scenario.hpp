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

#ifndef SHOTGAME_SCENARIO_HPP_
#define SHOTGAME_SCENARIO_HPP_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shotgame/block_theory.hpp"
#include "shotgame/game.hpp"
#include "shotgame/json_io.hpp"
#include "shotgame/metrics.hpp"

namespace shotgame {

inline constexpr int kSchemaVersion = 1;

// A rejected request; `field` is a JSON path such as "players[2].x".
class RequestError : public std::invalid_argument {
 public:
  RequestError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ScenarioRequest {
  Scenario scenario;
  bool remove_closest = false;
  std::optional<TheoryParams> theory_override;
};

ScenarioRequest parse_scenario_request(const Json& j);
Json scenario_request_to_json(const ScenarioRequest& r);

// Response with the with-defender metrics at the top level, the payoff table,
// the equilibrium and per-attacker breakdowns ordered by p_on. The breakdowns
// and the block curve reflect `remove_closest`.
Json evaluate_scenario(const MetricsEngine& engine, const ScenarioRequest& req);

Json breakdown_to_json(const AttackerBreakdown& b);
Json payoff_to_json(const PayoffTable& t);
Json nash_to_json(const NashSolution& n);

struct ScenarioFixture {
  std::string id;
  std::string event_id;  // optional source event
  std::string description;
  ScenarioRequest request;
};

// Reads every `*.json` in `dir`, sorted by id.
std::vector<ScenarioFixture> load_fixtures(const std::filesystem::path& dir);
ScenarioFixture load_fixture(const std::filesystem::path& file);

}  // namespace shotgame

#endif  // SHOTGAME_SCENARIO_HPP_
