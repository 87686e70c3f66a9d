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

#include "shotgame/json_io.hpp"

#include <cmath>
#include <fstream>

#include "shotgame/error.hpp"

namespace shotgame {

void to_json(Json& j, const PitchPoint& p) { j = Json::array({p.x, p.y}); }

void from_json(const Json& j, PitchPoint& p) {
  if (j.is_array()) {
    if (j.size() < 2) throw DataError("location needs two coordinates");
    p.x = j.at(0).get<double>();
    p.y = j.at(1).get<double>();
  } else {
    p.x = j.at("x").get<double>();
    p.y = j.at("y").get<double>();
  }
}

void to_json(Json& j, const PlayerSnapshot& s) {
  j = Json{{"location", s.location},
           {"teammate", s.teammate},
           {"actor", s.actor},
           {"keeper", s.keeper}};
}

void from_json(const Json& j, PlayerSnapshot& s) {
  s.location = j.at("location").get<PitchPoint>();
  s.teammate = j.value("teammate", false);
  s.actor = j.value("actor", false);
  s.keeper = j.value("keeper", false);
}

void to_json(Json& j, const FreezeFrame& f) {
  j = Json{{"event_id", f.event_id}, {"players", f.players}};
}

void from_json(const Json& j, FreezeFrame& f) {
  f.event_id = j.value("event_id", std::string{});
  f.players = j.at("players").get<std::vector<PlayerSnapshot>>();
}

void to_json(Json& j, const ShotEvent& e) {
  j = Json{{"event_id", e.event_id},
           {"match_id", e.match_id},
           {"team_id", e.team_id},
           {"team_name", e.team_name},
           {"index", e.index},
           {"period", e.period},
           {"shooter_role", e.shooter_role},
           {"location", e.location},
           {"raw_outcome", e.raw_outcome},
           {"outcome", std::string(outcome_name(e.outcome))}};
}

void from_json(const Json& j, ShotEvent& e) {
  e.event_id = j.at("event_id").get<std::string>();
  e.match_id = j.at("match_id").get<std::int64_t>();
  e.team_id = j.at("team_id").get<std::int64_t>();
  e.team_name = j.value("team_name", std::string{});
  e.index = j.value("index", 0);
  e.period = j.value("period", 1);
  e.shooter_role = j.value("shooter_role", std::string{});
  e.location = j.at("location").get<PitchPoint>();
  e.raw_outcome = j.value("raw_outcome", std::string{});
  e.outcome = outcome_from_name(j.at("outcome").get<std::string>());
}

Json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open " + file.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError("malformed JSON in " + file.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& file, const Json& j) {
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  out << j.dump(2) << '\n';
  if (!out) throw DataError("write failed for " + file.string());
}

double round6(double v) {
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

void require_version(const Json& j, int expected, const std::string& what) {
  if (!j.contains("version") || j.at("version").get<int>() != expected) {
    throw DataError(what + ": unsupported or missing version (expected " +
                    std::to_string(expected) + ")");
  }
}

}  // namespace shotgame
