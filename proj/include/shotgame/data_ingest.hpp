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

#ifndef SHOTGAME_DATA_INGEST_HPP_
#define SHOTGAME_DATA_INGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "shotgame/geometry.hpp"

namespace shotgame {

enum class Outcome { kOn, kOff, kBlock };
enum class GroupedOutcome { kOn, kOff, kBlock, kRemoved };

std::string_view outcome_name(Outcome o);
Outcome outcome_from_name(std::string_view name);

// Maps a StatsBomb shot outcome name onto the three-class outcome space.
// Throws DataError for names outside the known grouping.
GroupedOutcome group_outcome(std::string_view raw);

struct ShotEvent {
  std::string event_id;
  std::int64_t match_id = 0;
  std::int64_t team_id = 0;
  std::string team_name;
  int index = 0;   // event index within the match
  int period = 1;
  std::string shooter_role;
  PitchPoint location;
  std::string raw_outcome;
  Outcome outcome = Outcome::kOff;
};

struct PlayerSnapshot {
  PitchPoint location;
  bool teammate = false;
  bool actor = false;
  bool keeper = false;
};

struct FreezeFrame {
  std::string event_id;
  std::vector<PlayerSnapshot> players;
};

using FrameMap = std::map<std::string, FreezeFrame>;

using WarningSink = std::function<void(const std::string&)>;

// Loads every shot from `events_dir/*.json`. Shoot-out shots (period 5) and
// shots whose outcome groups to Removed are dropped. Ordered by
// (match_id, index).
std::vector<ShotEvent> load_events(const std::filesystem::path& events_dir);

// Loads 360 frames from `frames_dir/*.json`. When `keep` is given only those
// event ids are retained. Frames without an actor are skipped and reported
// through `warn` (stderr when empty).
FrameMap load_freeze_frames(const std::filesystem::path& frames_dir,
                            const std::unordered_set<std::string>* keep = nullptr,
                            const WarningSink& warn = {});

struct Dataset {
  std::vector<ShotEvent> events;
  FrameMap frames;

  const FreezeFrame* frame_for(const std::string& event_id) const;
};

// Loads `<root>/events` and `<root>/three-sixty`, keeping frames of shots only.
Dataset load_dataset(const std::filesystem::path& root,
                     const WarningSink& warn = {});

// Versioned JSON round trip for the normalized dataset.
void save_dataset(const Dataset& ds, const std::filesystem::path& file);
Dataset read_dataset(const std::filesystem::path& file);

struct Fold {
  std::vector<std::size_t> train;  // indices into DatasetSplit::train
  std::vector<std::size_t> valid;
};

struct DatasetSplit {
  std::vector<ShotEvent> train;
  std::vector<ShotEvent> test;
  std::vector<std::size_t> train_index;  // positions in the input list
  std::vector<std::size_t> test_index;
  std::vector<Fold> folds;
};

inline constexpr int kNumFolds = 5;
inline constexpr double kTestFraction = 0.2;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Stratified 80/20 split followed by five stratified folds over the train
// part. Deterministic for a given seed on every platform.
DatasetSplit split_dataset(const std::vector<ShotEvent>& events,
                           std::uint64_t seed);

// Stratified K-fold assignment over arbitrary labels (exposed for reuse by
// model code and tests).
std::vector<Fold> stratified_folds(const std::vector<int>& labels, int k,
                                   std::uint64_t seed);

}  // namespace shotgame

#endif  // SHOTGAME_DATA_INGEST_HPP_
