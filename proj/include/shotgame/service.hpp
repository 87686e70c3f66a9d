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

#ifndef SHOTGAME_SERVICE_HPP_
#define SHOTGAME_SERVICE_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "shotgame/metrics.hpp"
#include "shotgame/scenario.hpp"

namespace shotgame {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

// Read-only state shared by all request handlers.
class ScenarioService {
 public:
  ScenarioService(MetricsEngine engine, std::vector<ScenarioFixture> fixtures);

  HttpReply health() const;
  HttpReply list_fixtures() const;
  HttpReply get_fixture(const std::string& id) const;
  HttpReply evaluate(const std::string& body) const;

  // Routes one request without a socket; used by the server and by tests.
  HttpReply handle(const std::string& method, const std::string& path,
                   const std::string& body) const;

  // Blocks serving on host:port. With port 0 an ephemeral port is chosen and
  // reported through `on_bound` before serving starts.
  void serve(const std::string& host, int port,
             const std::function<void(int)>& on_bound = {}) const;
  void stop() const;

 private:
  MetricsEngine engine_;
  std::vector<ScenarioFixture> fixtures_;
  struct Server;
  std::shared_ptr<Server> server_;
};

HttpReply error_reply(int status, const std::string& message, const std::string& field = {});

}  // namespace shotgame

#endif  // SHOTGAME_SERVICE_HPP_
