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

#ifndef SHOTGAME_NNET_HPP_
#define SHOTGAME_NNET_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "shotgame/block_theory.hpp"
#include "shotgame/data_ingest.hpp"
#include "shotgame/random.hpp"

namespace shotgame::nnet {

// One model input: the shooter's role (embedded) plus numeric features.
struct FeatureRow {
  std::string role;
  std::vector<double> numeric;
  int label = 0;
};

enum class FeatureSet { kBasic, kProposed, kUnprocessed };

std::string_view feature_set_name(FeatureSet f);
FeatureSet feature_set_from_name(std::string_view name);

// (x, y, Dist2Goal, Ang2Goal) for a shooter at `location`.
std::vector<double> basic_numeric(const PitchPoint& location);

FeatureRow build_features_off(const ShotEvent& event);
FeatureRow build_features_block(const ShotEvent& event, const FreezeFrame* frame,
                                const TheoryParams& theory);
// Basic features plus 22 player slots of (role placeholder, x, y, teammate).
// Teammates come first, each group ordered by distance to the shooter.
FeatureRow build_features_unprocessed(const ShotEvent& event, const FreezeFrame* frame);

inline constexpr std::size_t kPlayerSlots = 22;
inline constexpr std::size_t kSlotWidth = 4;

// Role strings seen in training. Index 0 is reserved for unknown roles.
class RoleVocabulary {
 public:
  static constexpr int kUnknown = 0;

  RoleVocabulary() = default;
  explicit RoleVocabulary(std::vector<std::string> roles);
  static RoleVocabulary build(std::span<const FeatureRow> rows);

  int index(std::string_view role) const;
  std::size_t size() const { return roles_.size() + 1; }
  const std::vector<std::string>& roles() const { return roles_; }

 private:
  std::vector<std::string> roles_;  // sorted, unique
};

// Per-column z-scoring fitted on training rows only.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(std::span<const FeatureRow> rows);
  std::vector<double> apply(std::span<const double> numeric) const;
};

enum class Activation { kRelu, kSigmoid, kTanh };

std::string_view activation_name(Activation a);
Activation activation_from_name(std::string_view name);

struct ClassWeights {
  double negative = 1.0;
  double positive = 1.0;

  double of(int label) const { return label ? positive : negative; }
};

// w_c = N / (2 N_c).
ClassWeights inverse_class_weights(std::span<const int> labels);

struct TrainConfig {
  int num_layers = 1;
  int hidden_dim = 32;
  double dropout_rate = 0.0;
  Activation activation = Activation::kRelu;
  int embedding_dim = 1;
  double learning_rate = 1e-3;
  int epochs = 300;
  int batch_size = 32;
  std::uint64_t seed = 0;
  // Inverse-frequency weights from the training labels unless set.
  std::optional<ClassWeights> class_weights;

  std::string describe() const;
};

struct EncodedRow {
  int role_id = 0;
  std::vector<double> numeric;  // already standardized
  int label = 0;
};

class MlpModel {
 public:
  MlpModel() = default;
  MlpModel(RoleVocabulary vocab, Standardizer standardizer, std::size_t numeric_dim,
           const TrainConfig& config);

  // PyTorch-style default initialization.
  void initialize(Rng& rng);

  EncodedRow encode(const FeatureRow& row) const;

  // Eval-mode probability for a raw row.
  double predict(const FeatureRow& row) const;
  std::vector<double> predict(std::span<const FeatureRow> rows) const;

  // Probability for an encoded row. Dropout is applied only in train mode and
  // then requires `rng`.
  double forward(const EncodedRow& row, bool train_mode, Rng* rng) const;

  // Mean weighted cross-entropy over `batch` computed from logits, with its
  // gradient with respect to params() written to `grad` when non-null.
  double loss_and_gradient(std::span<const EncodedRow> batch, const ClassWeights& w,
                           Rng* dropout_rng, std::vector<double>* grad) const;

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  const RoleVocabulary& vocab() const { return vocab_; }
  const Standardizer& standardizer() const { return standardizer_; }
  std::size_t numeric_dim() const { return numeric_dim_; }
  std::size_t input_dim() const { return embedding_dim_ + numeric_dim_; }
  int num_layers() const { return num_layers_; }
  int hidden_dim() const { return hidden_dim_; }
  int embedding_dim() const { return static_cast<int>(embedding_dim_); }
  Activation activation() const { return activation_; }
  double dropout_rate() const { return dropout_; }

  std::string kind;         // "off" / "block"; informational
  FeatureSet features = FeatureSet::kBasic;

  void save(const std::filesystem::path& file) const;
  static MlpModel load(const std::filesystem::path& file);

 private:
  struct LayerShape {
    std::size_t in;
    std::size_t out;
    std::size_t weight_offset;
    std::size_t bias_offset;
  };
  void build_shapes();
  void check_finite() const;

  RoleVocabulary vocab_;
  Standardizer standardizer_;
  std::size_t numeric_dim_ = 0;
  std::size_t embedding_dim_ = 1;
  int num_layers_ = 1;
  int hidden_dim_ = 32;
  Activation activation_ = Activation::kRelu;
  double dropout_ = 0.0;
  std::vector<LayerShape> shapes_;  // hidden layers then the output layer
  std::vector<double> params_;      // embedding, then W/b per layer
};

// Probability for one row; dropout active only when train_mode is set, with
// masks drawn from `rng_seed`.
double mlp_forward(const MlpModel& model, const FeatureRow& row, bool train_mode,
                   std::uint64_t rng_seed);

// -mean_i w_{y_i} [y_i log p_i + (1 - y_i) log(1 - p_i)], p clamped to
// [1e-7, 1 - 1e-7].
double weighted_cel(std::span<const double> probs, std::span<const int> labels,
                    const ClassWeights& w = {});

struct TrainResult {
  MlpModel model;
  int best_epoch = 0;
  std::vector<double> train_loss;  // per epoch, weighted, eval mode
  std::vector<double> valid_loss;  // empty without validation rows
};

// Mini-batch Adam on the weighted cross-entropy. With validation rows the
// parameters from the epoch with the lowest validation loss are returned.
TrainResult train_mlp(std::span<const FeatureRow> rows, const TrainConfig& config,
                      std::span<const FeatureRow> valid = {});

struct FoldScores {
  std::vector<double> weighted;    // validation CEL with the fold's train weights
  std::vector<double> unweighted;  // plain validation CEL

  double mean_weighted() const;
  double std_weighted() const;
  double mean_unweighted() const;
  double std_unweighted() const;
};

FoldScores cross_validate_mlp(std::span<const FeatureRow> rows, std::span<const Fold> folds,
                              const TrainConfig& config);

struct GridSpace {
  std::vector<int> num_layers{1, 2, 3};
  std::vector<int> hidden_dim{32, 64, 128};
  std::vector<double> dropout_rate{0.0, 0.1, 0.2};
  std::vector<Activation> activation{Activation::kRelu, Activation::kSigmoid,
                                     Activation::kTanh};
  std::vector<int> embedding_dim{1, 2, 3};

  std::size_t size() const;
  std::vector<TrainConfig> expand(const TrainConfig& base) const;
};

struct GridEntry {
  TrainConfig config;
  FoldScores scores;
};

struct GridResult {
  TrainConfig best;
  std::vector<GridEntry> table;
};

// Trains every configuration on every fold (in parallel across jobs) and
// selects the lowest mean weighted validation loss. Each job gets a seed
// derived from (base seed, config index, fold).
GridResult grid_search_cv(std::span<const FeatureRow> rows, std::span<const Fold> folds,
                          const GridSpace& grid, const TrainConfig& base,
                          unsigned threads = 0);

// Constant predictor at the training positive rate.
struct HistoricalBaseline {
  double probability = 0.5;
  double predict(const FeatureRow&) const { return probability; }
};

HistoricalBaseline baseline_historical(std::span<const int> train_labels);

double soft_threshold(double z, double gamma);

struct ElasticNetOptions {
  double l1_ratio = 0.5;
  double strength = 1e-2;
  int max_sweeps = 100000;
  double tol = 1e-10;
};

struct LinearFit {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  int sweeps = 0;
};

// Coordinate descent for
//   (1/2N) ||y - b - Xw||^2 + strength (l1_ratio ||w||_1 + (1 - l1_ratio)/2 ||w||^2)
// with an unpenalized intercept. Throws NumericalError without convergence.
LinearFit elastic_net_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const ElasticNetOptions& opts);

struct ElasticNetModel {
  RoleVocabulary vocab;
  Standardizer standardizer;
  LinearFit fit;

  Eigen::VectorXd design_row(const FeatureRow& row) const;
  // Linear prediction clamped to [1e-7, 1 - 1e-7].
  double predict(const FeatureRow& row) const;
};

ElasticNetModel baseline_elastic_net(std::span<const FeatureRow> rows,
                                     const ElasticNetOptions& opts);

struct BaselineReport {
  std::string name;
  std::vector<double> fold_cel;
  double mean() const;
  double stddev() const;
};

BaselineReport cross_validate_historical(std::span<const FeatureRow> rows,
                                         std::span<const Fold> folds);

// Searches l1_ratio in {0.1, 0.5, 0.9} and strength in {1e-3, 1e-2, 1e-1} and
// reports the best setting's fold losses.
BaselineReport cross_validate_elastic_net(std::span<const FeatureRow> rows,
                                          std::span<const Fold> folds,
                                          ElasticNetOptions* best = nullptr);

std::vector<FeatureRow> select_rows(std::span<const FeatureRow> rows,
                                    std::span<const std::size_t> idx);
std::vector<int> labels_of(std::span<const FeatureRow> rows);

double mean_of(std::span<const double> v);
double stddev_of(std::span<const double> v);

}  // namespace shotgame::nnet

#endif  // SHOTGAME_NNET_HPP_
