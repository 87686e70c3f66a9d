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

#include "shotgame/data_ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <iostream>
#include <tuple>

#include "shotgame/error.hpp"
#include "shotgame/json_io.hpp"
#include "shotgame/random.hpp"

namespace shotgame {
namespace {

constexpr int kShootoutPeriod = 5;

void emit_warning(const WarningSink& warn, const std::string& msg) {
  if (warn) {
    warn(msg);
  } else {
    std::cerr << "warning: " << msg << '\n';
  }
}

std::int64_t match_id_from_path(const std::filesystem::path& file) {
  const std::string stem = file.stem().string();
  std::int64_t id = 0;
  const auto [ptr, ec] =
      std::from_chars(stem.data(), stem.data() + stem.size(), id);
  if (ec != std::errc{} || ptr != stem.data() + stem.size()) {
    throw DataError("expected <match_id>.json, got " + file.string());
  }
  return id;
}

// JSON files in `dir` ordered by numeric match id.
std::vector<std::pair<std::int64_t, std::filesystem::path>> match_files(
    const std::filesystem::path& dir) {
  std::vector<std::pair<std::int64_t, std::filesystem::path>> files;
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("not a directory: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") {
      continue;
    }
    files.emplace_back(match_id_from_path(entry.path()), entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

PitchPoint clamp_to_pitch(PitchPoint p) {
  p.x = std::clamp(p.x, 0.0, pitch::kLength);
  p.y = std::clamp(p.y, 0.0, pitch::kWidth);
  return p;
}

std::string nested_name(const Json& ev, const char* key) {
  if (!ev.contains(key) || !ev.at(key).is_object()) return {};
  return ev.at(key).value("name", std::string{});
}

}  // namespace

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kOn:
      return "On";
    case Outcome::kOff:
      return "Off";
    case Outcome::kBlock:
      return "Block";
  }
  return "?";
}

Outcome outcome_from_name(std::string_view name) {
  if (name == "On") return Outcome::kOn;
  if (name == "Off") return Outcome::kOff;
  if (name == "Block") return Outcome::kBlock;
  throw DataError("unknown grouped outcome '" + std::string(name) + "'");
}

GroupedOutcome group_outcome(std::string_view raw) {
  if (raw == "Goal" || raw == "Saved") return GroupedOutcome::kOn;
  if (raw == "Off T" || raw == "Wayward" || raw == "Post" ||
      raw == "Saved Off Target") {
    return GroupedOutcome::kOff;
  }
  if (raw == "Blocked") return GroupedOutcome::kBlock;
  if (raw == "Saved to Post") return GroupedOutcome::kRemoved;
  throw DataError("unknown shot outcome '" + std::string(raw) + "'");
}

std::vector<ShotEvent> load_events(const std::filesystem::path& events_dir) {
  std::vector<ShotEvent> shots;
  for (const auto& [match_id, file] : match_files(events_dir)) {
    const Json doc = read_json_file(file);
    if (!doc.is_array()) {
      throw DataError("malformed JSON in " + file.string() +
                      ": expected an array of events");
    }
    try {
      for (const Json& ev : doc) {
        if (nested_name(ev, "type") != "Shot") continue;
        const int period = ev.value("period", 1);
        if (period == kShootoutPeriod) continue;

        const std::string raw = ev.at("shot").at("outcome").at("name");
        GroupedOutcome grouped;
        try {
          grouped = group_outcome(raw);
        } catch (const DataError& e) {
          throw DataError(file.string() + ": " + e.what());
        }
        if (grouped == GroupedOutcome::kRemoved) continue;

        ShotEvent shot;
        shot.event_id = ev.at("id").get<std::string>();
        shot.match_id = match_id;
        shot.team_id = ev.at("team").at("id").get<std::int64_t>();
        shot.team_name = ev.at("team").value("name", std::string{});
        shot.index = ev.value("index", 0);
        shot.period = period;
        shot.shooter_role = nested_name(ev, "position");
        shot.location = clamp_to_pitch(ev.at("location").get<PitchPoint>());
        shot.raw_outcome = raw;
        shot.outcome = static_cast<Outcome>(grouped);
        shots.push_back(std::move(shot));
      }
    } catch (const Json::exception& e) {
      throw DataError("malformed event in " + file.string() + ": " + e.what());
    }
  }
  std::stable_sort(shots.begin(), shots.end(),
                   [](const ShotEvent& a, const ShotEvent& b) {
                     return std::tie(a.match_id, a.index) <
                            std::tie(b.match_id, b.index);
                   });
  return shots;
}

FrameMap load_freeze_frames(const std::filesystem::path& frames_dir,
                            const std::unordered_set<std::string>* keep,
                            const WarningSink& warn) {
  FrameMap frames;
  for (const auto& [match_id, file] : match_files(frames_dir)) {
    const Json doc = read_json_file(file);
    if (!doc.is_array()) {
      throw DataError("malformed JSON in " + file.string() +
                      ": expected an array of frames");
    }
    try {
      for (const Json& entry : doc) {
        std::string id = entry.at("event_uuid").get<std::string>();
        if (keep != nullptr && !keep->contains(id)) continue;
        FreezeFrame frame;
        frame.event_id = id;
        for (const Json& p : entry.at("freeze_frame")) {
          PlayerSnapshot snap = p.get<PlayerSnapshot>();
          snap.location = clamp_to_pitch(snap.location);
          frame.players.push_back(snap);
        }
        const auto actors = std::count_if(
            frame.players.begin(), frame.players.end(),
            [](const PlayerSnapshot& s) { return s.actor; });
        if (actors != 1) {
          emit_warning(warn, "frame " + id + " in " + file.string() + " has " +
                                 std::to_string(actors) +
                                 " actors; skipped");
          continue;
        }
        frames.insert_or_assign(std::move(id), std::move(frame));
      }
    } catch (const Json::exception& e) {
      throw DataError("malformed frame in " + file.string() + ": " + e.what());
    }
  }
  return frames;
}

const FreezeFrame* Dataset::frame_for(const std::string& event_id) const {
  const auto it = frames.find(event_id);
  return it == frames.end() ? nullptr : &it->second;
}

Dataset load_dataset(const std::filesystem::path& root,
                     const WarningSink& warn) {
  Dataset ds;
  ds.events = load_events(root / "events");
  std::unordered_set<std::string> ids;
  for (const auto& e : ds.events) ids.insert(e.event_id);
  const auto frames_dir = root / "three-sixty";
  if (std::filesystem::is_directory(frames_dir)) {
    ds.frames = load_freeze_frames(frames_dir, &ids, warn);
  }
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& file) {
  Json frames = Json::array();
  for (const auto& [id, frame] : ds.frames) frames.push_back(frame);
  write_json_file(file, Json{{"format", "shotgame-dataset"},
                             {"version", 1},
                             {"events", ds.events},
                             {"frames", frames}});
}

Dataset read_dataset(const std::filesystem::path& file) {
  const Json doc = read_json_file(file);
  require_version(doc, 1, file.string());
  Dataset ds;
  try {
    ds.events = doc.at("events").get<std::vector<ShotEvent>>();
    for (const Json& f : doc.at("frames")) {
      FreezeFrame frame = f.get<FreezeFrame>();
      ds.frames.insert_or_assign(frame.event_id, std::move(frame));
    }
  } catch (const Json::exception& e) {
    throw DataError("malformed dataset " + file.string() + ": " + e.what());
  }
  return ds;
}

std::vector<Fold> stratified_folds(const std::vector<int>& labels, int k,
                                   std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("stratified_folds: k must be >= 2");
  std::map<int, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    strata[labels[i]].push_back(i);
  }
  Rng rng(seed);
  std::vector<int> fold_of(labels.size(), 0);
  for (auto& [label, members] : strata) {
    if (members.size() < static_cast<std::size_t>(k)) {
      throw InvalidArgument("cannot stratify " + std::to_string(k) +
                            " folds: class " + std::to_string(label) +
                            " has only " + std::to_string(members.size()) +
                            " members");
    }
    shuffle(std::span(members), rng);
    for (std::size_t i = 0; i < members.size(); ++i) {
      fold_of[members[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
  }
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (int f = 0; f < k; ++f) {
      auto& fold = folds[static_cast<std::size_t>(f)];
      (fold_of[i] == f ? fold.valid : fold.train).push_back(i);
    }
  }
  return folds;
}

DatasetSplit split_dataset(const std::vector<ShotEvent>& events,
                           std::uint64_t seed) {
  if (events.empty()) throw InvalidArgument("split_dataset: no events");

  std::vector<std::size_t> order(events.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::tie(events[a].match_id, events[a].index) <
                            std::tie(events[b].match_id, events[b].index);
                   });

  std::array<std::vector<std::size_t>, 3> strata;
  for (std::size_t i : order) {
    strata[static_cast<std::size_t>(events[i].outcome)].push_back(i);
  }

  Rng rng(seed);
  std::vector<char> in_test(events.size(), 0);
  for (auto& members : strata) {
    shuffle(std::span(members), rng);
    const auto n_test = static_cast<std::size_t>(
        std::lround(kTestFraction * static_cast<double>(members.size())));
    for (std::size_t i = 0; i < n_test; ++i) in_test[members[i]] = 1;
  }

  DatasetSplit split;
  for (std::size_t i : order) {
    if (in_test[i]) {
      split.test.push_back(events[i]);
      split.test_index.push_back(i);
    } else {
      split.train.push_back(events[i]);
      split.train_index.push_back(i);
    }
  }
  std::vector<int> labels;
  labels.reserve(split.train.size());
  for (const auto& e : split.train) labels.push_back(static_cast<int>(e.outcome));
  split.folds = stratified_folds(labels, kNumFolds, derive_seed(seed, 1));
  return split;
}

}  // namespace shotgame
