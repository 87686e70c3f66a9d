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

#include "shotgame/service.hpp"

#include "httplib.h"

#include "shotgame/error.hpp"

namespace shotgame {

struct ScenarioService::Server {
  httplib::Server http;
};

namespace {

constexpr const char* kJson = "application/json";

HttpReply ok(Json j) {
  j["schema_version"] = kSchemaVersion;
  return {200, j.dump()};
}

Json pitch_metadata() {
  auto pt = [](const PitchPoint& p) { return Json{{"x", p.x}, {"y", p.y}}; };
  return {{"length", pitch::kLength},     {"width", pitch::kWidth},
          {"left_post", pt(pitch::kLeftPost)}, {"right_post", pt(pitch::kRightPost)},
          {"box_left", pt(pitch::kBoxLeft)},   {"box_right", pt(pitch::kBoxRight)}};
}

}  // namespace

HttpReply error_reply(int status, const std::string& message, const std::string& field) {
  Json err{{"status", status}, {"message", message}};
  err["field"] = field.empty() ? Json(nullptr) : Json(field);
  return {status, Json{{"schema_version", kSchemaVersion}, {"error", err}}.dump()};
}

ScenarioService::ScenarioService(MetricsEngine engine, std::vector<ScenarioFixture> fixtures)
    : engine_(std::move(engine)),
      fixtures_(std::move(fixtures)),
      server_(std::make_shared<Server>()) {}

HttpReply ScenarioService::health() const {
  return ok({{"status", "ok"}, {"fixtures", fixtures_.size()}});
}

HttpReply ScenarioService::list_fixtures() const {
  Json list = Json::array();
  for (const auto& f : fixtures_) {
    list.push_back({{"id", f.id}, {"description", f.description}});
  }
  return ok({{"fixtures", std::move(list)}, {"pitch", pitch_metadata()}});
}

HttpReply ScenarioService::get_fixture(const std::string& id) const {
  for (const auto& f : fixtures_) {
    if (f.id == id) {
      return ok({{"id", f.id},
                 {"description", f.description},
                 {"request", scenario_request_to_json(f.request)}});
    }
  }
  return error_reply(404, "unknown fixture '" + id + "'");
}

HttpReply ScenarioService::evaluate(const std::string& body) const {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error& e) {
    return error_reply(400, std::string("malformed JSON: ") + e.what());
  }
  try {
    const ScenarioRequest req = parse_scenario_request(j);
    return {200, evaluate_scenario(engine_, req).dump()};
  } catch (const RequestError& e) {
    return error_reply(400, e.what(), e.field());
  } catch (const InvalidArgument& e) {
    return error_reply(422, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

HttpReply ScenarioService::handle(const std::string& method, const std::string& path,
                                  const std::string& body) const {
  static const std::string kFixturePrefix = "/fixtures/";
  if (path == "/health") {
    return method == "GET" ? health() : error_reply(405, "method not allowed");
  }
  if (path == "/fixtures") {
    return method == "GET" ? list_fixtures() : error_reply(405, "method not allowed");
  }
  if (path.starts_with(kFixturePrefix)) {
    if (method != "GET") return error_reply(405, "method not allowed");
    return get_fixture(path.substr(kFixturePrefix.size()));
  }
  if (path == "/scenario/evaluate") {
    return method == "POST" ? evaluate(body) : error_reply(405, "method not allowed");
  }
  return error_reply(404, "no route for " + path);
}

void ScenarioService::serve(const std::string& host, int port,
                            const std::function<void(int)>& on_bound) const {
  auto& http = server_->http;
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpReply r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, kJson);
  };
  http.Get(R"(/.*)", route);
  http.Post(R"(/.*)", route);
  http.Put(R"(/.*)", route);
  http.Delete(R"(/.*)", route);
  if (port == 0) {
    port = http.bind_to_any_port(host);
  } else if (!http.bind_to_port(host, port)) {
    port = -1;
  }
  if (port < 0) throw DataError("cannot bind " + host);
  if (on_bound) on_bound(port);
  http.listen_after_bind();
}

void ScenarioService::stop() const { server_->http.stop(); }

}  // namespace shotgame
