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

#ifndef SHOTGAME_JSON_IO_HPP_
#define SHOTGAME_JSON_IO_HPP_

#include <filesystem>
#include <string>

#include "json.hpp"

#include "shotgame/data_ingest.hpp"
#include "shotgame/geometry.hpp"

namespace shotgame {

using Json = nlohmann::json;

void to_json(Json& j, const PitchPoint& p);
void from_json(const Json& j, PitchPoint& p);
void to_json(Json& j, const PlayerSnapshot& s);
void from_json(const Json& j, PlayerSnapshot& s);
void to_json(Json& j, const FreezeFrame& f);
void from_json(const Json& j, FreezeFrame& f);
void to_json(Json& j, const ShotEvent& e);
void from_json(const Json& j, ShotEvent& e);

// Reads and parses a JSON file; failures name the file.
Json read_json_file(const std::filesystem::path& file);

// Writes `j` with a trailing newline. Throws DataError when the file cannot be
// opened.
void write_json_file(const std::filesystem::path& file, const Json& j);

// Rounds to six fractional digits so serialized output is diff-stable.
double round6(double v);

// Checks `j["version"] == expected` for the named format.
void require_version(const Json& j, int expected, const std::string& what);

}  // namespace shotgame

#endif  // SHOTGAME_JSON_IO_HPP_
