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

#include "shotgame/scenario.hpp"

#include <algorithm>

#include "shotgame/error.hpp"

namespace shotgame {
namespace {

void reject_unknown(const Json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw RequestError(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw RequestError(path.empty() ? "$" : path, "expected an object");
  return j;
}

double number_field(const Json& obj, const std::string& path, const char* key, double lo,
                    double hi) {
  const std::string field = path + "." + key;
  if (!obj.contains(key)) throw RequestError(field, "missing");
  const Json& v = obj.at(key);
  if (!v.is_number()) throw RequestError(field, "expected a number");
  const double x = v.get<double>();
  if (!(x >= lo && x <= hi)) {
    throw RequestError(field, "out of bounds [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
  }
  return x;
}

bool bool_field(const Json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_boolean()) throw RequestError(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string string_field(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return {};
  const Json& v = obj.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw RequestError(path + "." + key, "expected a string");
}

PitchPoint point_of(const Json& obj, const std::string& path) {
  return {number_field(obj, path, "x", 0.0, pitch::kLength),
          number_field(obj, path, "y", 0.0, pitch::kWidth)};
}

Json point_json(const PitchPoint& p) { return {{"x", round6(p.x)}, {"y", round6(p.y)}}; }

}  // namespace

ScenarioRequest parse_scenario_request(const Json& j) {
  require_object(j, "");
  reject_unknown(j, "", {"shooter", "players", "options"});
  ScenarioRequest req;
  if (!j.contains("shooter")) throw RequestError("shooter", "missing");
  const Json& sh = require_object(j.at("shooter"), "shooter");
  reject_unknown(sh, "shooter", {"role", "x", "y"});
  req.scenario.shooter = point_of(sh, "shooter");
  req.scenario.shooter_role = string_field(sh, "shooter", "role");
  if (req.scenario.shooter.x >= pitch::kLength) {
    throw RequestError("shooter.x", "shooter must be in front of the goal line");
  }

  if (!j.contains("players")) throw RequestError("players", "missing");
  const Json& players = j.at("players");
  if (!players.is_array()) throw RequestError("players", "expected an array");
  int keepers[2] = {0, 0};
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string path = "players[" + std::to_string(i) + "]";
    const Json& p = require_object(players[i], path);
    reject_unknown(p, path, {"x", "y", "teammate", "keeper", "label"});
    ScenarioPlayer sp;
    sp.location = point_of(p, path);
    sp.teammate = bool_field(p, path, "teammate", false);
    sp.keeper = bool_field(p, path, "keeper", false);
    sp.label = string_field(p, path, "label");
    if (sp.keeper && ++keepers[sp.teammate ? 1 : 0] > 1) {
      throw RequestError(path + ".keeper", "at most one keeper per team");
    }
    req.scenario.players.push_back(std::move(sp));
  }

  if (j.contains("options")) {
    const Json& o = require_object(j.at("options"), "options");
    reject_unknown(o, "options", {"remove_closest", "theory_params_override"});
    req.remove_closest = bool_field(o, "options", "remove_closest", false);
    if (o.contains("theory_params_override") && !o.at("theory_params_override").is_null()) {
      const std::string path = "options.theory_params_override";
      const Json& t = require_object(o.at("theory_params_override"), path);
      reject_unknown(t, path, {"c1", "c2", "c3", "c4", "a"});
      constexpr double kInf = std::numeric_limits<double>::max();
      TheoryParams p;
      p.angle_scale = number_field(t, path, "c1", -kInf, kInf);
      p.sigma_slope = number_field(t, path, "c2", -kInf, kInf);
      p.output_scale = number_field(t, path, "c3", -kInf, kInf);
      p.sigma_intercept = number_field(t, path, "c4", -kInf, kInf);
      p.lower_bound = number_field(t, path, "a", -kInf, kInf);
      if (!p.valid()) throw RequestError(path, "parameters outside the valid domain");
      req.theory_override = p;
    }
  }
  return req;
}

Json scenario_request_to_json(const ScenarioRequest& r) {
  Json players = Json::array();
  for (const auto& p : r.scenario.players) {
    Json pj{{"x", p.location.x}, {"y", p.location.y}, {"teammate", p.teammate},
            {"keeper", p.keeper}};
    if (!p.label.empty()) pj["label"] = p.label;
    players.push_back(std::move(pj));
  }
  Json j{{"shooter",
          {{"role", r.scenario.shooter_role},
           {"x", r.scenario.shooter.x},
           {"y", r.scenario.shooter.y}}},
         {"players", std::move(players)},
         {"options", {{"remove_closest", r.remove_closest}}}};
  if (r.theory_override) {
    const auto& t = *r.theory_override;
    j["options"]["theory_params_override"] = {{"c1", t.angle_scale},
                                              {"c2", t.sigma_slope},
                                              {"c3", t.output_scale},
                                              {"c4", t.sigma_intercept},
                                              {"a", t.lower_bound}};
  }
  return j;
}

Json breakdown_to_json(const AttackerBreakdown& b) {
  Json j{{"player_index", b.player_index},
         {"label", b.label},
         {"is_shooter", b.player_index < 0},
         {"location", point_json(b.location)},
         {"p_on", round6(b.p_on)},
         {"p_off", round6(b.p_off)},
         {"p_block", round6(b.p_block)},
         {"theory_block_feature", round6(b.theory_feature)}};
  j["p_control"] = b.p_control ? Json(round6(*b.p_control)) : Json(nullptr);
  return j;
}

Json payoff_to_json(const PayoffTable& t) {
  using S = ShooterStrategy;
  using D = DefenderStrategy;
  Json j;
  for (S s : {S::kShoot, S::kPass}) {
    for (D d : {D::kBlocking, D::kNotBlocking}) {
      j[std::string(strategy_name(s))][std::string(strategy_name(d))] = round6(t.at(s, d));
    }
  }
  return j;
}

Json nash_to_json(const NashSolution& n) {
  Json pure = Json::array();
  for (const auto& p : n.pure) {
    pure.push_back({{"shooter", strategy_name(p.shooter)}, {"defender", strategy_name(p.defender)}});
  }
  Json j{{"pure", std::move(pure)}};
  if (n.mixed) {
    j["mixed"] = {{"p_shoot", round6(n.mixed->p_shoot)},
                  {"q_block", round6(n.mixed->q_block)},
                  {"value", round6(n.mixed->value)}};
  } else {
    j["mixed"] = nullptr;
  }
  return j;
}

Json evaluate_scenario(const MetricsEngine& base, const ScenarioRequest& req) {
  const MetricsEngine engine =
      req.theory_override ? base.with_theory(*req.theory_override) : base;
  const Scenario& s = req.scenario;

  // Round once so every field that repeats a value carries identical digits.
  PayoffEvaluation eval = build_payoff_table(engine, s);
  for (auto& row : eval.table.shooter) {
    for (double& v : row) v = round6(v);
  }
  const NashSolution nash = solve_game(eval.table);

  const XsotResult& shot = req.remove_closest ? eval.xsot_free : eval.xsot_block;
  const XosotResult& pass = req.remove_closest ? eval.xosot_free : eval.xosot_block;

  std::vector<AttackerBreakdown> rows = pass.breakdowns;
  rows.push_back(shot.breakdown);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const AttackerBreakdown& a, const AttackerBreakdown& b) {
                     return a.p_on > b.p_on;
                   });
  Json breakdowns = Json::array();
  for (const auto& b : rows) breakdowns.push_back(breakdown_to_json(b));

  Json best = nullptr;
  if (eval.xosot_block.best) {
    const auto& b = eval.xosot_block.breakdowns[*eval.xosot_block.best];
    best = {{"player_index", b.player_index}, {"label", b.label}};
  }

  Json closest = nullptr;
  if (const auto c = closest_defender(s.shooter, s.players)) {
    const auto& p = s.players[*c];
    closest = {{"player_index", *c},
               {"label", p.label},
               {"location", point_json(p.location)},
               {"in_feasible_zone", feasible_zone_contains(s.shooter, p.location)}};
  }

  const std::vector<ScenarioPlayer> curve_players =
      req.remove_closest ? without_closest(s.shooter, s.players) : s.players;
  const auto snapshots = frame_snapshots(s.shooter, curve_players);
  Json curve = Json::array();
  for (const auto& pt : block_probability_curve(s.shooter, snapshots, engine.theory())) {
    curve.push_back({{"theta", round6(pt.theta_deg)}, {"p_block", round6(pt.block_prob)}});
  }

  return {{"schema_version", kSchemaVersion},
          {"xsot", eval.table.shooter[0][0]},
          {"xosot", eval.table.shooter[1][0]},
          {"xosot_flag", eval.xosot_block.no_teammates ? Json("no_teammates") : Json(nullptr)},
          {"best_pass_target", std::move(best)},
          {"closest_defender", std::move(closest)},
          {"remove_closest", req.remove_closest},
          {"theory_block_feature", round6(shot.breakdown.theory_feature)},
          {"breakdowns", std::move(breakdowns)},
          {"payoff_table", payoff_to_json(eval.table)},
          {"nash", nash_to_json(nash)},
          {"theory_block_curve", std::move(curve)}};
}

ScenarioFixture load_fixture(const std::filesystem::path& file) {
  const Json j = read_json_file(file);
  require_version(j, 1, file.string());
  try {
    ScenarioFixture f;
    f.id = j.at("id").get<std::string>();
    f.event_id = j.value("event_id", std::string{});
    f.description = j.value("description", std::string{});
    f.request = parse_scenario_request(j.at("request"));
    return f;
  } catch (const RequestError& e) {
    throw DataError(file.string() + ": request." + e.what());
  } catch (const Json::exception& e) {
    throw DataError("malformed fixture " + file.string() + ": " + e.what());
  }
}

std::vector<ScenarioFixture> load_fixtures(const std::filesystem::path& dir) {
  std::vector<ScenarioFixture> out;
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("fixture directory not found: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") out.push_back(load_fixture(entry.path()));
  }
  std::sort(out.begin(), out.end(),
            [](const ScenarioFixture& a, const ScenarioFixture& b) { return a.id < b.id; });
  return out;
}

}  // namespace shotgame
