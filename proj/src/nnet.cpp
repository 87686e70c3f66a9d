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

#include "shotgame/nnet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "shotgame/error.hpp"
#include "shotgame/geometry.hpp"
#include "shotgame/json_io.hpp"

namespace shotgame::nnet {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const RowMat>;
using MatMap = Eigen::Map<RowMat>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation a) {
  switch (a) {
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kSigmoid:
      return z.unaryExpr([](double v) { return sigmoid(v); });
    case Activation::kTanh:
      return z.array().tanh().matrix();
  }
  return z;
}

// Derivative of the activation given its pre-activation and output.
Eigen::MatrixXd activation_grad(const Eigen::MatrixXd& z, const Eigen::MatrixXd& a,
                                Activation act) {
  switch (act) {
    case Activation::kRelu:
      return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
    case Activation::kSigmoid:
      return (a.array() * (1.0 - a.array())).matrix();
    case Activation::kTanh:
      return (1.0 - a.array().square()).matrix();
  }
  return a;
}

double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

}  // namespace

// ---------------------------------------------------------------------------
// Features

std::string_view feature_set_name(FeatureSet f) {
  switch (f) {
    case FeatureSet::kBasic:
      return "basic";
    case FeatureSet::kProposed:
      return "proposed";
    case FeatureSet::kUnprocessed:
      return "unprocessed";
  }
  return "?";
}

FeatureSet feature_set_from_name(std::string_view name) {
  if (name == "basic") return FeatureSet::kBasic;
  if (name == "proposed") return FeatureSet::kProposed;
  if (name == "unprocessed") return FeatureSet::kUnprocessed;
  throw InvalidArgument("unknown feature set '" + std::string(name) + "'");
}

std::vector<double> basic_numeric(const PitchPoint& location) {
  return {location.x, location.y, dist2goal(location), ang2goal(location)};
}

FeatureRow build_features_off(const ShotEvent& event) {
  return {event.shooter_role, basic_numeric(event.location),
          event.outcome == Outcome::kOff ? 1 : 0};
}

FeatureRow build_features_block(const ShotEvent& event, const FreezeFrame* frame,
                                const TheoryParams& theory) {
  FeatureRow row{event.shooter_role, basic_numeric(event.location),
                 event.outcome == Outcome::kBlock ? 1 : 0};
  const double theory_prob =
      frame == nullptr ? 0.0 : shot_block_probability(event.location, frame->players, theory);
  row.numeric.push_back(theory_prob);
  return row;
}

FeatureRow build_features_unprocessed(const ShotEvent& event, const FreezeFrame* frame) {
  FeatureRow row{event.shooter_role, basic_numeric(event.location),
                 event.outcome == Outcome::kBlock ? 1 : 0};
  std::vector<PlayerSnapshot> players;
  if (frame != nullptr) players = frame->players;
  if (players.size() > kPlayerSlots) {
    throw DataError("frame " + event.event_id + " has " + std::to_string(players.size()) +
                    " players, at most 22 expected");
  }
  std::stable_sort(players.begin(), players.end(),
                   [&](const PlayerSnapshot& a, const PlayerSnapshot& b) {
                     if (a.teammate != b.teammate) return a.teammate;
                     return metric_distance(a.location, event.location) <
                            metric_distance(b.location, event.location);
                   });
  for (std::size_t slot = 0; slot < kPlayerSlots; ++slot) {
    if (slot < players.size()) {
      const auto& p = players[slot];
      row.numeric.insert(row.numeric.end(),
                         {0.0, p.location.x, p.location.y, p.teammate ? 1.0 : 0.0});
    } else {
      row.numeric.insert(row.numeric.end(), kSlotWidth, 0.0);
    }
  }
  return row;
}

// ---------------------------------------------------------------------------
// Vocabulary and standardization

RoleVocabulary::RoleVocabulary(std::vector<std::string> roles) : roles_(std::move(roles)) {
  std::sort(roles_.begin(), roles_.end());
  roles_.erase(std::unique(roles_.begin(), roles_.end()), roles_.end());
}

RoleVocabulary RoleVocabulary::build(std::span<const FeatureRow> rows) {
  std::vector<std::string> roles;
  for (const auto& r : rows) {
    if (!r.role.empty()) roles.push_back(r.role);
  }
  return RoleVocabulary(std::move(roles));
}

int RoleVocabulary::index(std::string_view role) const {
  const auto it = std::lower_bound(roles_.begin(), roles_.end(), role);
  if (it == roles_.end() || *it != role) return kUnknown;
  return static_cast<int>(it - roles_.begin()) + 1;
}

Standardizer Standardizer::fit(std::span<const FeatureRow> rows) {
  Standardizer s;
  if (rows.empty()) return s;
  const std::size_t d = rows.front().numeric.size();
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 0.0);
  for (const auto& r : rows) {
    if (r.numeric.size() != d) throw InvalidArgument("ragged feature rows");
    for (std::size_t k = 0; k < d; ++k) s.mean[k] += r.numeric[k];
  }
  const double n = static_cast<double>(rows.size());
  for (double& m : s.mean) m /= n;
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < d; ++k) {
      const double dv = r.numeric[k] - s.mean[k];
      s.scale[k] += dv * dv;
    }
  }
  for (double& v : s.scale) {
    v = std::sqrt(v / n);
    if (!(v > 1e-12)) v = 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> numeric) const {
  if (numeric.size() != mean.size()) {
    throw InvalidArgument("feature dimension " + std::to_string(numeric.size()) +
                          " does not match standardizer dimension " +
                          std::to_string(mean.size()));
  }
  std::vector<double> out(numeric.size());
  for (std::size_t k = 0; k < numeric.size(); ++k) {
    out[k] = (numeric[k] - mean[k]) / scale[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration helpers

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kTanh:
      return "tanh";
  }
  return "?";
}

Activation activation_from_name(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "tanh") return Activation::kTanh;
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

ClassWeights inverse_class_weights(std::span<const int> labels) {
  const double n = static_cast<double>(labels.size());
  const double pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double neg = n - pos;
  if (pos == 0.0 || neg == 0.0) {
    throw InvalidArgument("inverse_class_weights: both classes must be present");
  }
  return {n / (2.0 * neg), n / (2.0 * pos)};
}

std::string TrainConfig::describe() const {
  std::ostringstream os;
  os << "layers=" << num_layers << " hidden=" << hidden_dim << " dropout=" << dropout_rate
     << " act=" << activation_name(activation) << " emb=" << embedding_dim;
  return os.str();
}

// ---------------------------------------------------------------------------
// MLP

MlpModel::MlpModel(RoleVocabulary vocab, Standardizer standardizer, std::size_t numeric_dim,
                   const TrainConfig& config)
    : vocab_(std::move(vocab)),
      standardizer_(std::move(standardizer)),
      numeric_dim_(numeric_dim),
      embedding_dim_(static_cast<std::size_t>(config.embedding_dim)),
      num_layers_(config.num_layers),
      hidden_dim_(config.hidden_dim),
      activation_(config.activation),
      dropout_(config.dropout_rate) {
  if (config.num_layers < 0 || config.hidden_dim <= 0 || config.embedding_dim <= 0) {
    throw InvalidArgument("invalid MLP shape: " + config.describe());
  }
  if (!(config.dropout_rate >= 0.0 && config.dropout_rate < 1.0)) {
    throw InvalidArgument("dropout rate must lie in [0, 1)");
  }
  build_shapes();
}

void MlpModel::build_shapes() {
  shapes_.clear();
  std::size_t offset = vocab_.size() * embedding_dim_;
  std::size_t in = input_dim();
  for (int l = 0; l <= num_layers_; ++l) {
    const std::size_t out = l == num_layers_ ? 1 : static_cast<std::size_t>(hidden_dim_);
    shapes_.push_back({in, out, offset, offset + in * out});
    offset += in * out + out;
    in = out;
  }
  params_.assign(offset, 0.0);
}

void MlpModel::initialize(Rng& rng) {
  const std::size_t emb = vocab_.size() * embedding_dim_;
  for (std::size_t i = 0; i < emb; ++i) params_[i] = standard_normal(rng);
  for (const auto& s : shapes_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(s.in));
    for (std::size_t i = 0; i < s.in * s.out; ++i) {
      params_[s.weight_offset + i] = uniform(rng, -bound, bound);
    }
    for (std::size_t i = 0; i < s.out; ++i) {
      params_[s.bias_offset + i] = uniform(rng, -bound, bound);
    }
  }
}

void MlpModel::check_finite() const {
  for (double v : params_) {
    if (!std::isfinite(v)) throw NumericalError("MLP parameters contain NaN or infinity");
  }
}

EncodedRow MlpModel::encode(const FeatureRow& row) const {
  return {vocab_.index(row.role), standardizer_.apply(row.numeric), row.label};
}

namespace {

struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<Eigen::MatrixXd> pre;
  std::vector<Eigen::MatrixXd> post;
  std::vector<Eigen::MatrixXd> masks;  // empty matrix = no dropout
  Eigen::MatrixXd last;                // input to the output layer
};

}  // namespace

// Shared batch forward pass; returns logits.
static Eigen::VectorXd batch_logits(const std::vector<double>& params, std::size_t vocab_size,
                                    std::size_t emb_dim, std::size_t numeric_dim,
                                    int num_layers, Activation act, double dropout,
                                    std::span<const EncodedRow> batch, Rng* rng,
                                    ForwardCache* cache, std::span<const std::size_t> offsets) {
  const auto b = static_cast<Eigen::Index>(batch.size());
  const std::size_t in_dim = emb_dim + numeric_dim;
  ConstMatMap emb(params.data(), static_cast<Eigen::Index>(vocab_size),
                  static_cast<Eigen::Index>(emb_dim));
  Eigen::MatrixXd x(b, static_cast<Eigen::Index>(in_dim));
  for (Eigen::Index i = 0; i < b; ++i) {
    const EncodedRow& r = batch[static_cast<std::size_t>(i)];
    if (r.numeric.size() != numeric_dim) {
      throw InvalidArgument("row has " + std::to_string(r.numeric.size()) +
                            " numeric features, model expects " + std::to_string(numeric_dim));
    }
    if (r.role_id < 0 || static_cast<std::size_t>(r.role_id) >= vocab_size) {
      throw InvalidArgument("role index out of range");
    }
    x.row(i).head(static_cast<Eigen::Index>(emb_dim)) = emb.row(r.role_id);
    for (std::size_t k = 0; k < numeric_dim; ++k) {
      x(i, static_cast<Eigen::Index>(emb_dim + k)) = r.numeric[k];
    }
  }

  std::size_t in = in_dim;
  for (int l = 0; l < num_layers; ++l) {
    const std::size_t out = offsets[static_cast<std::size_t>(3 * l + 2)];
    ConstMatMap w(params.data() + offsets[static_cast<std::size_t>(3 * l)],
                  static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
    ConstVecMap bias(params.data() + offsets[static_cast<std::size_t>(3 * l + 1)],
                     static_cast<Eigen::Index>(out));
    Eigen::MatrixXd z = x * w.transpose();
    z.rowwise() += bias.transpose();
    Eigen::MatrixXd a = activate(z, act);
    Eigen::MatrixXd mask;
    Eigen::MatrixXd h = a;
    if (rng != nullptr && dropout > 0.0) {
      const double keep = 1.0 - dropout;
      mask.resize(z.rows(), z.cols());
      for (Eigen::Index c = 0; c < mask.cols(); ++c) {
        for (Eigen::Index r = 0; r < mask.rows(); ++r) {
          mask(r, c) = uniform01(*rng) < keep ? 1.0 / keep : 0.0;
        }
      }
      h = a.cwiseProduct(mask);
    }
    if (cache != nullptr) {
      cache->inputs.push_back(std::move(x));
      cache->pre.push_back(std::move(z));
      cache->post.push_back(std::move(a));
      cache->masks.push_back(std::move(mask));
    }
    x = std::move(h);
    in = out;
  }
  const auto lo = static_cast<std::size_t>(3 * num_layers);
  ConstMatMap w(params.data() + offsets[lo], 1, static_cast<Eigen::Index>(in));
  const double bias = params[offsets[lo + 1]];
  Eigen::VectorXd logits = (x * w.transpose()).col(0).array() + bias;
  if (cache != nullptr) cache->last = std::move(x);
  return logits;
}

namespace {

std::vector<std::size_t> flat_offsets(const auto& shapes) {
  std::vector<std::size_t> out;
  for (const auto& s : shapes) {
    out.push_back(s.weight_offset);
    out.push_back(s.bias_offset);
    out.push_back(s.out);
  }
  return out;
}

}  // namespace

double MlpModel::forward(const EncodedRow& row, bool train_mode, Rng* rng) const {
  if (train_mode && dropout_ > 0.0 && rng == nullptr) {
    throw InvalidArgument("train-mode forward with dropout needs an rng");
  }
  const auto offsets = flat_offsets(shapes_);
  const Eigen::VectorXd z =
      batch_logits(params_, vocab_.size(), embedding_dim_, numeric_dim_, num_layers_,
                   activation_, dropout_, std::span(&row, 1), train_mode ? rng : nullptr,
                   nullptr, offsets);
  return sigmoid(z(0));
}

double MlpModel::predict(const FeatureRow& row) const { return forward(encode(row), false, nullptr); }

std::vector<double> MlpModel::predict(std::span<const FeatureRow> rows) const {
  std::vector<EncodedRow> enc;
  enc.reserve(rows.size());
  for (const auto& r : rows) enc.push_back(encode(r));
  const auto offsets = flat_offsets(shapes_);
  const Eigen::VectorXd z = batch_logits(params_, vocab_.size(), embedding_dim_, numeric_dim_,
                                         num_layers_, activation_, dropout_, enc, nullptr,
                                         nullptr, offsets);
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = sigmoid(z(static_cast<Eigen::Index>(i)));
  return out;
}

double MlpModel::loss_and_gradient(std::span<const EncodedRow> batch, const ClassWeights& w,
                                   Rng* dropout_rng, std::vector<double>* grad) const {
  if (batch.empty()) return 0.0;
  const auto offsets = flat_offsets(shapes_);
  ForwardCache cache;
  const Eigen::VectorXd z =
      batch_logits(params_, vocab_.size(), embedding_dim_, numeric_dim_, num_layers_,
                   activation_, dropout_, batch, dropout_rng, grad ? &cache : nullptr, offsets);
  const auto b = static_cast<Eigen::Index>(batch.size());
  const double inv_b = 1.0 / static_cast<double>(b);
  double loss = 0.0;
  Eigen::VectorXd dz(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const EncodedRow& r = batch[static_cast<std::size_t>(i)];
    const double wi = w.of(r.label);
    loss += wi * (softplus(z(i)) - r.label * z(i));
    dz(i) = wi * (sigmoid(z(i)) - r.label) * inv_b;
  }
  loss *= inv_b;
  if (grad == nullptr) return loss;

  grad->assign(params_.size(), 0.0);
  std::vector<double>& g = *grad;
  const auto& out_shape = shapes_.back();
  {
    MatMap gw(g.data() + out_shape.weight_offset, 1, static_cast<Eigen::Index>(out_shape.in));
    gw = dz.transpose() * cache.last;
    g[out_shape.bias_offset] = dz.sum();
  }
  ConstMatMap wo(params_.data() + out_shape.weight_offset, 1,
                 static_cast<Eigen::Index>(out_shape.in));
  Eigen::MatrixXd dx = dz * wo;  // b x in
  for (int l = num_layers_ - 1; l >= 0; --l) {
    const auto& s = shapes_[static_cast<std::size_t>(l)];
    const auto li = static_cast<std::size_t>(l);
    Eigen::MatrixXd da = cache.masks[li].size() ? dx.cwiseProduct(cache.masks[li]) : dx;
    Eigen::MatrixXd dpre =
        da.cwiseProduct(activation_grad(cache.pre[li], cache.post[li], activation_));
    MatMap gw(g.data() + s.weight_offset, static_cast<Eigen::Index>(s.out),
              static_cast<Eigen::Index>(s.in));
    gw = dpre.transpose() * cache.inputs[li];
    VecMap gb(g.data() + s.bias_offset, static_cast<Eigen::Index>(s.out));
    gb = dpre.colwise().sum().transpose();
    ConstMatMap wl(params_.data() + s.weight_offset, static_cast<Eigen::Index>(s.out),
                   static_cast<Eigen::Index>(s.in));
    dx = dpre * wl;
  }
  MatMap gemb(g.data(), static_cast<Eigen::Index>(vocab_.size()),
              static_cast<Eigen::Index>(embedding_dim_));
  for (Eigen::Index i = 0; i < b; ++i) {
    gemb.row(batch[static_cast<std::size_t>(i)].role_id) +=
        dx.row(i).head(static_cast<Eigen::Index>(embedding_dim_));
  }
  return loss;
}

void MlpModel::save(const std::filesystem::path& file) const {
  Json j{{"format", "shotgame-mlp"},
         {"version", 1},
         {"kind", kind},
         {"features", std::string(feature_set_name(features))},
         {"num_layers", num_layers_},
         {"hidden_dim", hidden_dim_},
         {"embedding_dim", embedding_dim_},
         {"activation", std::string(activation_name(activation_))},
         {"dropout_rate", dropout_},
         {"numeric_dim", numeric_dim_},
         {"roles", vocab_.roles()},
         {"standardizer", {{"mean", standardizer_.mean}, {"scale", standardizer_.scale}}},
         {"params", params_}};
  write_json_file(file, j);
}

MlpModel MlpModel::load(const std::filesystem::path& file) {
  const Json j = read_json_file(file);
  require_version(j, 1, file.string());
  try {
    TrainConfig cfg;
    cfg.num_layers = j.at("num_layers").get<int>();
    cfg.hidden_dim = j.at("hidden_dim").get<int>();
    cfg.embedding_dim = j.at("embedding_dim").get<int>();
    cfg.activation = activation_from_name(j.at("activation").get<std::string>());
    cfg.dropout_rate = j.at("dropout_rate").get<double>();
    Standardizer st{j.at("standardizer").at("mean").get<std::vector<double>>(),
                    j.at("standardizer").at("scale").get<std::vector<double>>()};
    MlpModel m(RoleVocabulary(j.at("roles").get<std::vector<std::string>>()), std::move(st),
               j.at("numeric_dim").get<std::size_t>(), cfg);
    auto params = j.at("params").get<std::vector<double>>();
    if (params.size() != m.params_.size()) {
      throw DataError(file.string() + ": expected " + std::to_string(m.params_.size()) +
                      " parameters, found " + std::to_string(params.size()));
    }
    m.params_ = std::move(params);
    m.kind = j.value("kind", std::string{});
    m.features = feature_set_from_name(j.value("features", std::string("basic")));
    m.check_finite();
    return m;
  } catch (const Json::exception& e) {
    throw DataError("malformed model file " + file.string() + ": " + e.what());
  }
}

double mlp_forward(const MlpModel& model, const FeatureRow& row, bool train_mode,
                   std::uint64_t rng_seed) {
  for (double v : model.params()) {
    if (!std::isfinite(v)) throw NumericalError("MLP parameters contain NaN or infinity");
  }
  Rng rng(rng_seed);
  return model.forward(model.encode(row), train_mode, &rng);
}

double weighted_cel(std::span<const double> probs, std::span<const int> labels,
                    const ClassWeights& w) {
  if (probs.size() != labels.size()) {
    throw InvalidArgument("weighted_cel: probs and labels differ in length");
  }
  if (probs.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = clamp_prob(probs[i]);
    const int y = labels[i];
    sum += w.of(y) * (y ? -std::log(p) : -std::log1p(-p));
  }
  return sum / static_cast<double>(probs.size());
}

// ---------------------------------------------------------------------------
// Training

TrainResult train_mlp(std::span<const FeatureRow> rows, const TrainConfig& config,
                      std::span<const FeatureRow> valid) {
  if (rows.empty()) throw InvalidArgument("train_mlp: no training rows");
  const std::vector<int> labels = labels_of(rows);
  const ClassWeights weights =
      config.class_weights ? *config.class_weights : inverse_class_weights(labels);
  if (std::count(labels.begin(), labels.end(), 1) == 0 ||
      std::count(labels.begin(), labels.end(), 0) == 0) {
    throw InvalidArgument("train_mlp: both classes must be present");
  }
  if (config.batch_size <= 0 || config.epochs < 0) {
    throw InvalidArgument("train_mlp: invalid batch size or epoch count");
  }

  Rng rng(config.seed);
  MlpModel model(RoleVocabulary::build(rows), Standardizer::fit(rows), rows.front().numeric.size(),
                 config);
  model.initialize(rng);

  std::vector<EncodedRow> train;
  train.reserve(rows.size());
  for (const auto& r : rows) train.push_back(model.encode(r));
  std::vector<EncodedRow> val;
  for (const auto& r : valid) val.push_back(model.encode(r));

  std::vector<double>& params = model.params();
  std::vector<double> m1(params.size(), 0.0), m2(params.size(), 0.0), grad;
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::int64_t step = 0;

  TrainResult result;
  std::vector<double> best_params = params;
  double best_val = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<EncodedRow> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(std::span(order), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(train[order[k]]);
      const double loss = model.loss_and_gradient(batch, weights, &rng, &grad);
      if (!std::isfinite(loss)) {
        throw NumericalError("training diverged (non-finite loss) at epoch " +
                             std::to_string(epoch));
      }
      ++step;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t i = 0; i < params.size(); ++i) {
        m1[i] = kBeta1 * m1[i] + (1.0 - kBeta1) * grad[i];
        m2[i] = kBeta2 * m2[i] + (1.0 - kBeta2) * grad[i] * grad[i];
        params[i] -= config.learning_rate * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + kEps);
      }
    }
    const double train_loss = model.loss_and_gradient(train, weights, nullptr, nullptr);
    if (!std::isfinite(train_loss)) {
      throw NumericalError("training diverged (non-finite loss) at epoch " +
                           std::to_string(epoch));
    }
    result.train_loss.push_back(train_loss);
    if (!val.empty()) {
      const double vl = model.loss_and_gradient(val, weights, nullptr, nullptr);
      result.valid_loss.push_back(vl);
      if (vl < best_val) {
        best_val = vl;
        best_params = params;
        result.best_epoch = epoch;
      }
    }
  }
  if (!val.empty() && result.best_epoch > 0) {
    params = best_params;
  } else {
    result.best_epoch = config.epochs;
  }
  result.model = std::move(model);
  return result;
}

double FoldScores::mean_weighted() const { return mean_of(weighted); }
double FoldScores::std_weighted() const { return stddev_of(weighted); }
double FoldScores::mean_unweighted() const { return mean_of(unweighted); }
double FoldScores::std_unweighted() const { return stddev_of(unweighted); }

namespace {

void score_fold(std::span<const FeatureRow> rows, const Fold& fold, const TrainConfig& config,
                double& weighted, double& unweighted) {
  const auto train = select_rows(rows, fold.train);
  const auto valid = select_rows(rows, fold.valid);
  const TrainResult tr = train_mlp(train, config, valid);
  const auto train_labels = labels_of(train);
  const ClassWeights w =
      config.class_weights ? *config.class_weights : inverse_class_weights(train_labels);
  const auto probs = tr.model.predict(valid);
  const auto labels = labels_of(valid);
  weighted = weighted_cel(probs, labels, w);
  unweighted = weighted_cel(probs, labels);
}

}  // namespace

FoldScores cross_validate_mlp(std::span<const FeatureRow> rows, std::span<const Fold> folds,
                              const TrainConfig& config) {
  FoldScores s;
  s.weighted.resize(folds.size());
  s.unweighted.resize(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    TrainConfig c = config;
    c.seed = derive_seed(config.seed, f);
    score_fold(rows, folds[f], c, s.weighted[f], s.unweighted[f]);
  }
  return s;
}

std::size_t GridSpace::size() const {
  return num_layers.size() * hidden_dim.size() * dropout_rate.size() * activation.size() *
         embedding_dim.size();
}

std::vector<TrainConfig> GridSpace::expand(const TrainConfig& base) const {
  std::vector<TrainConfig> out;
  out.reserve(size());
  for (int nl : num_layers)
    for (int hd : hidden_dim)
      for (double dr : dropout_rate)
        for (Activation act : activation)
          for (int emb : embedding_dim) {
            TrainConfig c = base;
            c.num_layers = nl;
            c.hidden_dim = hd;
            c.dropout_rate = dr;
            c.activation = act;
            c.embedding_dim = emb;
            out.push_back(c);
          }
  return out;
}

GridResult grid_search_cv(std::span<const FeatureRow> rows, std::span<const Fold> folds,
                          const GridSpace& grid, const TrainConfig& base, unsigned threads) {
  const std::vector<TrainConfig> configs = grid.expand(base);
  if (configs.empty()) throw InvalidArgument("grid_search_cv: empty grid");
  const std::size_t nf = folds.size();
  const std::size_t jobs = configs.size() * nf;

  GridResult result;
  result.table.resize(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    result.table[c].config = configs[c];
    result.table[c].scores.weighted.resize(nf);
    result.table[c].scores.unweighted.resize(nf);
  }

  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t c = job / nf, f = job % nf;
      try {
        TrainConfig cfg = configs[c];
        cfg.seed = derive_seed(derive_seed(base.seed, c), f);
        auto& s = result.table[c].scores;
        score_fold(rows, folds[f], cfg, s.weighted[f], s.unweighted[f]);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < configs.size(); ++c) {
    if (result.table[c].scores.mean_weighted() < result.table[best].scores.mean_weighted()) {
      best = c;
    }
  }
  result.best = result.table[best].config;
  result.best.seed = base.seed;
  return result;
}

// ---------------------------------------------------------------------------
// Baselines

HistoricalBaseline baseline_historical(std::span<const int> train_labels) {
  if (train_labels.empty()) throw InvalidArgument("baseline_historical: no labels");
  const double pos = static_cast<double>(std::count(train_labels.begin(), train_labels.end(), 1));
  return {clamp_prob(pos / static_cast<double>(train_labels.size()))};
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

LinearFit elastic_net_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const ElasticNetOptions& opts) {
  if (x.rows() != y.size() || x.rows() == 0) {
    throw InvalidArgument("elastic_net_fit: design and target sizes differ");
  }
  if (!(opts.strength >= 0.0) || !(opts.l1_ratio >= 0.0 && opts.l1_ratio <= 1.0)) {
    throw InvalidArgument("elastic_net_fit: invalid penalty");
  }
  const double n = static_cast<double>(x.rows());
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  const Eigen::Index p = x.cols();
  const Eigen::VectorXd col_sq = xc.colwise().squaredNorm().transpose() / n;
  const double l1 = opts.strength * opts.l1_ratio;
  const double l2 = opts.strength * (1.0 - opts.l1_ratio);

  LinearFit fit;
  fit.weights = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd resid = yc;
  bool converged = false;
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq(j) <= 1e-14) continue;
      const double old = fit.weights(j);
      const double z = xc.col(j).dot(resid) / n + col_sq(j) * old;
      const double updated = soft_threshold(z, l1) / (col_sq(j) + l2);
      if (updated != old) {
        resid -= (updated - old) * xc.col(j);
        fit.weights(j) = updated;
        max_delta = std::max(max_delta, std::abs(updated - old) * std::sqrt(col_sq(j)));
      }
    }
    fit.sweeps = sweep;
    if (max_delta <= opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericalError("elastic net did not converge within " +
                         std::to_string(opts.max_sweeps) + " sweeps");
  }
  fit.intercept = y_mean - x_mean.dot(fit.weights);
  return fit;
}

Eigen::VectorXd ElasticNetModel::design_row(const FeatureRow& row) const {
  const std::vector<double> z = standardizer.apply(row.numeric);
  const auto nd = static_cast<Eigen::Index>(z.size());
  const auto nr = static_cast<Eigen::Index>(vocab.roles().size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(nd + nr);
  for (Eigen::Index k = 0; k < nd; ++k) v(k) = z[static_cast<std::size_t>(k)];
  const int role = vocab.index(row.role);
  if (role != RoleVocabulary::kUnknown) v(nd + role - 1) = 1.0;
  return v;
}

double ElasticNetModel::predict(const FeatureRow& row) const {
  return clamp_prob(fit.intercept + design_row(row).dot(fit.weights));
}

ElasticNetModel baseline_elastic_net(std::span<const FeatureRow> rows,
                                     const ElasticNetOptions& opts) {
  if (rows.empty()) throw InvalidArgument("baseline_elastic_net: no rows");
  ElasticNetModel m;
  m.vocab = RoleVocabulary::build(rows);
  m.standardizer = Standardizer::fit(rows);
  const Eigen::Index dim = m.design_row(rows.front()).size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), dim);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = m.design_row(rows[i]).transpose();
    y(static_cast<Eigen::Index>(i)) = rows[i].label;
  }
  m.fit = elastic_net_fit(x, y, opts);
  return m;
}

double BaselineReport::mean() const { return mean_of(fold_cel); }
double BaselineReport::stddev() const { return stddev_of(fold_cel); }

BaselineReport cross_validate_historical(std::span<const FeatureRow> rows,
                                         std::span<const Fold> folds) {
  BaselineReport rep{"Historical percentage", {}};
  for (const Fold& fold : folds) {
    const auto train = select_rows(rows, fold.train);
    const auto valid = select_rows(rows, fold.valid);
    const HistoricalBaseline h = baseline_historical(labels_of(train));
    const std::vector<double> probs(valid.size(), h.probability);
    rep.fold_cel.push_back(weighted_cel(probs, labels_of(valid)));
  }
  return rep;
}

BaselineReport cross_validate_elastic_net(std::span<const FeatureRow> rows,
                                          std::span<const Fold> folds,
                                          ElasticNetOptions* best_out) {
  BaselineReport best{"ElasticNet", {}};
  double best_mean = std::numeric_limits<double>::infinity();
  for (double ratio : {0.1, 0.5, 0.9}) {
    for (double strength : {1e-3, 1e-2, 1e-1}) {
      ElasticNetOptions opts;
      opts.l1_ratio = ratio;
      opts.strength = strength;
      opts.tol = 1e-8;
      BaselineReport rep{"ElasticNet", {}};
      for (const Fold& fold : folds) {
        const auto train = select_rows(rows, fold.train);
        const auto valid = select_rows(rows, fold.valid);
        const ElasticNetModel m = baseline_elastic_net(train, opts);
        std::vector<double> probs;
        for (const auto& r : valid) probs.push_back(m.predict(r));
        rep.fold_cel.push_back(weighted_cel(probs, labels_of(valid)));
      }
      if (rep.mean() < best_mean) {
        best_mean = rep.mean();
        best = rep;
        if (best_out != nullptr) *best_out = opts;
      }
    }
  }
  return best;
}

std::vector<FeatureRow> select_rows(std::span<const FeatureRow> rows,
                                    std::span<const std::size_t> idx) {
  std::vector<FeatureRow> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(rows[i]);
  return out;
}

std::vector<int> labels_of(std::span<const FeatureRow> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.label);
  return out;
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace shotgame::nnet
