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

#ifndef SHOTGAME_PIPELINE_HPP_
#define SHOTGAME_PIPELINE_HPP_

#include <filesystem>
#include <string_view>
#include <vector>

#include "shotgame/block_theory.hpp"
#include "shotgame/data_ingest.hpp"
#include "shotgame/metrics.hpp"
#include "shotgame/nnet.hpp"

namespace shotgame {

enum class ModelKind { kOff, kBlock };

std::string_view model_kind_name(ModelKind k);
ModelKind model_kind_from_name(std::string_view name);

// Labels: Off vs rest for kOff, Block vs rest for kBlock. The off model always
// uses basic features.
std::vector<nnet::FeatureRow> build_rows(std::span<const ShotEvent> events,
                                         const FrameMap& frames, ModelKind kind,
                                         nnet::FeatureSet features, const TheoryParams& theory);

// Tuned configurations shipped as defaults.
nnet::TrainConfig default_config(ModelKind kind);

std::vector<BlockExample> block_examples(std::span<const ShotEvent> events,
                                         const FrameMap& frames);

// model_off.json, model_block.json and theory_params.json in one directory.
MetricsEngine load_engine(const std::filesystem::path& models_dir);

}  // namespace shotgame

#endif  // SHOTGAME_PIPELINE_HPP_
