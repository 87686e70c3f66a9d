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

#ifndef SHOTGAME_SVG_PLOT_HPP_
#define SHOTGAME_SVG_PLOT_HPP_

#include <filesystem>
#include <string>

#include "shotgame/json_io.hpp"
#include "shotgame/metrics.hpp"

namespace shotgame {

// SVG with the pitch, feasible block zone, players, per-attacker p_on labels
// and an inset of the per-angle block probability. `response` is the output
// of evaluate_scenario for `s`; it may be null to draw the layout only.
std::string render_scenario_svg(const Scenario& s, const Json& response);

void write_scenario_svg(const Scenario& s, const Json& response,
                        const std::filesystem::path& out);

}  // namespace shotgame

#endif  // SHOTGAME_SVG_PLOT_HPP_
