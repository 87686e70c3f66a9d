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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <regex>
#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "shotgame/game.hpp"
#include "shotgame/pipeline.hpp"
#include "shotgame/scenario.hpp"
#include "shotgame/service.hpp"
#include "shotgame/error.hpp"
#include "shotgame/svg_plot.hpp"

// After Eigen: the resolver headers pulled in here define `_res`.
#include "httplib.h"

using namespace shotgame;

namespace {

const MetricsEngine& engine() {
  static const MetricsEngine e = load_engine(testing::models_dir());
  return e;
}

std::vector<ScenarioFixture> fixtures() {
  return load_fixtures(testing::fixtures_dir() / "scenarios");
}

const ScenarioFixture& fixture(const std::string& id) {
  static const auto all = fixtures();
  for (const auto& f : all) {
    if (f.id == id) return f;
  }
  throw std::runtime_error("no fixture " + id);
}

std::string request_error_field(const Json& j) {
  try {
    parse_scenario_request(j);
  } catch (const RequestError& e) {
    return e.field();
  }
  return "<accepted>";
}

Json base_request() {
  return Json::parse(R"({"shooter": {"role": "Center Forward", "x": 100, "y": 40},
                         "players": [{"x": 110, "y": 40, "teammate": false, "keeper": false},
                                     {"x": 105, "y": 30, "teammate": true, "keeper": false},
                                     {"x": 119, "y": 40, "teammate": false, "keeper": true}]})");
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("request validation names the field") {
    CHECK(request_error_field(base_request()) == "<accepted>");
    Json j = base_request();
    j["players"][1]["x"] = 130;
    CHECK(request_error_field(j) == "players[1].x");
    j = base_request();
    j["shooter"]["x"] = 120;
    CHECK(request_error_field(j) == "shooter.x");
    j = base_request();
    j["players"][0]["y"] = "left";
    CHECK(request_error_field(j) == "players[0].y");
    j = base_request();
    j["extra"] = 1;
    CHECK(request_error_field(j) == "extra");
    j = base_request();
    j["players"].push_back({{"x", 118}, {"y", 41}, {"teammate", false}, {"keeper", true}});
    CHECK(request_error_field(j).starts_with("players"));
    j = base_request();
    j["options"] = {{"theory_params_override", {{"c1", 30}, {"c2", 1}, {"c3", 0.5}, {"c4", 0.1}, {"a", 1.0}}}};
    CHECK(request_error_field(j) == "options.theory_params_override");
    j = base_request();
    j.erase("shooter");
    CHECK(request_error_field(j) == "shooter");
  }

  TEST_CASE("request round trip") {
    Json j = base_request();
    j["options"] = {{"remove_closest", true}};
    const ScenarioRequest r = parse_scenario_request(j);
    const ScenarioRequest back = parse_scenario_request(scenario_request_to_json(r));
    CHECK(back.remove_closest);
    CHECK(back.scenario.players.size() == 3);
    CHECK(back.scenario.shooter == r.scenario.shooter);
  }

  TEST_CASE("response consistency") {
    for (const auto& fx : fixtures()) {
      CAPTURE(fx.id);
      for (bool removal : {false, true}) {
        ScenarioRequest req = fx.request;
        req.remove_closest = removal;
        const Json out = evaluate_scenario(engine(), req);
        CHECK(out.at("schema_version") == kSchemaVersion);
        CHECK(out.at("payoff_table").at("Shoot").at("Blocking").get<double>() ==
              out.at("xsot").get<double>());
        CHECK(out.at("payoff_table").at("Pass").at("Blocking").get<double>() ==
              out.at("xosot").get<double>());
        const auto& pt = out.at("payoff_table");
        const PayoffTable t = PayoffTable::from_rows(
            pt.at("Shoot").at("Blocking"), pt.at("Shoot").at("NotBlocking"),
            pt.at("Pass").at("Blocking"), pt.at("Pass").at("NotBlocking"));
        const auto& nash = out.at("nash");
        if (nash.at("mixed").is_null()) {
          REQUIRE_FALSE(nash.at("pure").empty());
          for (const auto& p : nash.at("pure")) {
            const double ps = p.at("shooter") == "Shoot" ? 1.0 : 0.0;
            const double qb = p.at("defender") == "Blocking" ? 1.0 : 0.0;
            CHECK(is_equilibrium(t, ps, qb));
          }
        } else {
          CHECK(max_deviation_gain(t, nash.at("mixed").at("p_shoot"), nash.at("mixed").at("q_block")) <
                1e-6);
        }
        double prev = 2.0;
        for (const auto& b : out.at("breakdowns")) {
          CHECK(b.at("p_on").get<double>() <= prev);
          prev = b.at("p_on");
        }
        CHECK(out == evaluate_scenario(engine(), req));
      }
    }
  }

  TEST_CASE("closest defender outside the zone gives a zero block feature") {
    Json j = base_request();
    const Json inside = evaluate_scenario(engine(), parse_scenario_request(j));
    CHECK(inside.at("closest_defender").at("in_feasible_zone") == true);
    CHECK(inside.at("theory_block_feature").get<double>() > 0.0);
    j["players"][0]["x"] = 95;
    const Json outside = evaluate_scenario(engine(), parse_scenario_request(j));
    CHECK(outside.at("closest_defender").at("in_feasible_zone") == false);
    CHECK(outside.at("theory_block_feature").get<double>() == 0.0);
  }

  TEST_CASE("no teammates is flagged") {
    Json j = base_request();
    j["players"].erase(1);
    const Json out = evaluate_scenario(engine(), parse_scenario_request(j));
    CHECK(out.at("xosot") == 0.0);
    CHECK(out.at("xosot_flag") == "no_teammates");
    CHECK(out.at("best_pass_target").is_null());
  }

  TEST_CASE("theory override reaches the block feature") {
    Json j = base_request();
    j["options"] = {{"theory_params_override",
                     {{"c1", 36.9463}, {"c2", 12.3579}, {"c3", 0.05}, {"c4", 0.1577}, {"a", -2.3098}}}};
    const Json low = evaluate_scenario(engine(), parse_scenario_request(j));
    const Json ref = evaluate_scenario(engine(), parse_scenario_request(base_request()));
    CHECK(low.at("theory_block_feature").get<double>() < ref.at("theory_block_feature").get<double>());
  }
}

TEST_SUITE("service") {
  TEST_CASE("routing without a socket") {
    const ScenarioService svc(engine(), fixtures());
    CHECK(svc.handle("GET", "/health", "").status == 200);
    const HttpReply list = svc.handle("GET", "/fixtures", "");
    REQUIRE(list.status == 200);
    const Json lj = Json::parse(list.body);
    CHECK(lj.at("schema_version") == kSchemaVersion);
    CHECK(lj.at("fixtures").size() >= 2);

    const HttpReply one = svc.handle("GET", "/fixtures/spain-italy-two-blockers", "");
    REQUIRE(one.status == 200);
    const Json fj = Json::parse(one.body);
    CHECK(fj.at("schema_version") == kSchemaVersion);
    const ScenarioRequest req = parse_scenario_request(fj.at("request"));
    for (const auto& p : req.scenario.players) CHECK(on_pitch(p.location));

    CHECK(svc.handle("GET", "/fixtures/nope", "").status == 404);
    CHECK(svc.handle("GET", "/nowhere", "").status == 404);
    CHECK(svc.handle("GET", "/scenario/evaluate", "").status == 405);
    const HttpReply bad = svc.handle("POST", "/scenario/evaluate", "{");
    CHECK(bad.status == 400);
    CHECK(Json::parse(bad.body).at("schema_version") == kSchemaVersion);
    Json j = base_request();
    j["players"][2]["y"] = -4;
    const HttpReply field = svc.handle("POST", "/scenario/evaluate", j.dump());
    CHECK(field.status == 400);
    CHECK(Json::parse(field.body).at("error").at("field") == "players[2].y");
    const HttpReply ok = svc.handle("POST", "/scenario/evaluate", base_request().dump());
    CHECK(ok.status == 200);
    CHECK(Json::parse(ok.body).contains("payoff_table"));
  }

  TEST_CASE("live server on an ephemeral port") {
    ScenarioService svc(engine(), fixtures());
    std::promise<int> bound;
    std::thread server([&] { svc.serve("127.0.0.1", 0, [&](int port) { bound.set_value(port); }); });
    const int port = bound.get_future().get();
    REQUIRE(port > 0);
    httplib::Client cli("127.0.0.1", port);
    while (!cli.Get("/health")) std::this_thread::sleep_for(std::chrono::milliseconds(5));

    const auto fx = cli.Get("/fixtures/italy-wales-pass-options");
    REQUIRE(fx);
    CHECK(fx->status == 200);
    const std::string body = Json::parse(fx->body).at("request").dump();

    const auto t0 = std::chrono::steady_clock::now();
    const auto first = cli.Post("/scenario/evaluate", body, "application/json");
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    REQUIRE(first);
    CHECK(first->status == 200);
    CHECK(first->get_header_value("Content-Type").starts_with("application/json"));
    CHECK(ms <= 100.0);

    std::vector<std::future<std::string>> replies;
    for (int i = 0; i < 8; ++i) {
      replies.push_back(std::async(std::launch::async, [&] {
        httplib::Client c("127.0.0.1", port);
        const auto r = c.Post("/scenario/evaluate", body, "application/json");
        return r ? r->body : std::string{};
      }));
    }
    for (auto& r : replies) CHECK(r.get() == first->body);
    CHECK(cli.Get("/fixtures/missing")->status == 404);

    svc.stop();
    server.join();
  }
}

TEST_SUITE("svg") {
  TEST_CASE("markers match the fixture coordinates") {
    const ScenarioFixture& fx = fixture("italy-wales-pass-options");
    const Json out = evaluate_scenario(engine(), fx.request);
    const std::string svg = render_scenario_svg(fx.request.scenario, out);
    const std::regex circle(R"re(<circle class="(\w+)" data-index="(-?\d+)" data-x="([-\d.]+)" data-y="([-\d.]+)")re");
    int count = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle); it != std::sregex_iterator();
         ++it, ++count) {
      const int index = std::stoi((*it)[2]);
      const PitchPoint p{std::stod((*it)[3]), std::stod((*it)[4])};
      const auto& scenario = fx.request.scenario;
      const PitchPoint want = index < 0 ? scenario.shooter : scenario.players.at(index).location;
      CHECK(std::abs(p.x - want.x) < 1e-3);
      CHECK(std::abs(p.y - want.y) < 1e-3);
      if (index < 0) CHECK((*it)[1] == "shooter");
    }
    CHECK(count == static_cast<int>(fx.request.scenario.players.size()) + 1);

    const std::regex curve(R"re(class="curve" data-theta-min="([\d.]+)" data-theta-max="([\d.]+)")re");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, curve));
    CHECK(std::stod(m[1]) == 0.0);
    CHECK(std::stod(m[2]) == doctest::Approx(feasible_angle_span(fx.request.scenario.shooter)).epsilon(1e-3));
  }

  TEST_CASE("shooter-only frame renders") {
    Scenario s;
    s.shooter = {100, 40};
    const std::string svg = render_scenario_svg(s, Json());
    CHECK(svg.find("class=\"shooter\"") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    // A regular file cannot act as a directory.
    const auto blocker = std::filesystem::temp_directory_path() / "shotgame_svg_blocker";
    std::ofstream(blocker) << "x";
    CHECK_THROWS_AS(write_scenario_svg(s, Json(), blocker / "plot.svg"), DataError);
    std::filesystem::remove(blocker);
  }
}
