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

#include "shotgame/pipeline.hpp"

#include <string>

#include "shotgame/error.hpp"

namespace shotgame {

std::string_view model_kind_name(ModelKind k) { return k == ModelKind::kOff ? "off" : "block"; }

ModelKind model_kind_from_name(std::string_view name) {
  if (name == "off") return ModelKind::kOff;
  if (name == "block") return ModelKind::kBlock;
  throw InvalidArgument("unknown model '" + std::string(name) + "' (expected off or block)");
}

std::vector<nnet::FeatureRow> build_rows(std::span<const ShotEvent> events,
                                         const FrameMap& frames, ModelKind kind,
                                         nnet::FeatureSet features, const TheoryParams& theory) {
  std::vector<nnet::FeatureRow> rows;
  rows.reserve(events.size());
  for (const auto& e : events) {
    if (kind == ModelKind::kOff) {
      rows.push_back(nnet::build_features_off(e));
      continue;
    }
    const auto it = frames.find(e.event_id);
    const FreezeFrame* frame = it == frames.end() ? nullptr : &it->second;
    switch (features) {
      case nnet::FeatureSet::kProposed:
        rows.push_back(nnet::build_features_block(e, frame, theory));
        break;
      case nnet::FeatureSet::kUnprocessed:
        rows.push_back(nnet::build_features_unprocessed(e, frame));
        break;
      case nnet::FeatureSet::kBasic:
        rows.push_back({e.shooter_role, nnet::basic_numeric(e.location),
                        e.outcome == Outcome::kBlock ? 1 : 0});
        break;
    }
  }
  return rows;
}

nnet::TrainConfig default_config(ModelKind kind) {
  nnet::TrainConfig c;
  if (kind == ModelKind::kOff) {
    c.num_layers = 1;
    c.hidden_dim = 128;
    c.activation = nnet::Activation::kTanh;
    c.embedding_dim = 2;
  } else {
    c.num_layers = 2;
    c.hidden_dim = 64;
    c.activation = nnet::Activation::kSigmoid;
    c.embedding_dim = 1;
  }
  c.dropout_rate = 0.0;
  return c;
}

std::vector<BlockExample> block_examples(std::span<const ShotEvent> events,
                                         const FrameMap& frames) {
  std::vector<BlockExample> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    const auto it = frames.find(e.event_id);
    out.push_back(make_block_example(e.location, it == frames.end() ? nullptr : &it->second,
                                     e.outcome == Outcome::kBlock));
  }
  return out;
}

MetricsEngine load_engine(const std::filesystem::path& models_dir) {
  return MetricsEngine(nnet::MlpModel::load(models_dir / "model_off.json"),
                       nnet::MlpModel::load(models_dir / "model_block.json"),
                       load_theory_params(models_dir / "theory_params.json"));
}

}  // namespace shotgame
