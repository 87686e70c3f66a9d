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

#ifndef SHOTGAME_BLOCK_THEORY_HPP_
#define SHOTGAME_BLOCK_THEORY_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include "shotgame/data_ingest.hpp"
#include "shotgame/geometry.hpp"
#include "shotgame/optim.hpp"

namespace shotgame {

// Parameters of the geometric shot-block model.
//   angle_scale (c1, degrees) rescales the angular offset to a defender,
//   sigma_slope (c2, per meter) and sigma_intercept (c4) set the spread
//   sigma = c4 + c2 * distance, output_scale (c3) multiplies the averaged
//   block probability, and lower_bound (a < 0) truncates the density to
//   (a, -a).
struct TheoryParams {
  double angle_scale = 36.9463;
  double sigma_slope = 12.3579;
  double output_scale = 0.4998;
  double sigma_intercept = 0.1577;
  double lower_bound = -2.3098;

  // Optimized values shipped as the default parameter file.
  static TheoryParams reference() { return {}; }
  // Starting point for fitting.
  static TheoryParams initial_guess() { return {30.0, 10.0, 0.5, 0.2, -2.0}; }

  bool valid() const;
  void validate() const;  // throws InvalidArgument

  std::vector<double> to_vector() const;
  static TheoryParams from_vector(std::span<const double> v);

  friend bool operator==(const TheoryParams&, const TheoryParams&) = default;
};

TheoryParams load_theory_params(const std::filesystem::path& file);
void save_theory_params(const TheoryParams& p, const std::filesystem::path& file);

struct Defender {
  double theta_deg;
  double distance_m;
};

// Opponents (non-keeper) inside the feasible zone, ordered by distance to the
// shooter, ties by angle.
using FilteredDefenders = std::vector<Defender>;

FilteredDefenders filter_defenders(const PitchPoint& shooter,
                                   std::span<const PlayerSnapshot> players);

// Truncated-normal block density for one defender, clamped to [0, 1].
double defender_block_density(double theta_deg, double theta_d,
                              double distance_m, const TheoryParams& p);

// Probability that some defender blocks a shot fired at angle theta, with
// defenders taking turns in stored order.
double block_prob_given_angle(double theta_deg, std::span<const Defender> defenders,
                              const TheoryParams& p);

// Angles {0, 1, ..., floor(n), n} used for the trapezoidal integration.
std::vector<double> angle_grid(double span_deg, double step_deg = 1.0);

struct CurvePoint {
  double theta_deg;
  double block_prob;
};

std::vector<CurvePoint> block_probability_curve(const PitchPoint& shooter,
                                                std::span<const PlayerSnapshot> players,
                                                const TheoryParams& p);

// c3 / n * integral over [0, n] of block_prob_given_angle. Zero when no
// defender survives filtering or the span is degenerate.
double shot_block_probability(const PitchPoint& shooter,
                              std::span<const PlayerSnapshot> players,
                              const TheoryParams& p, double step_deg = 1.0);

// Geometry of one training example; independent of the parameters so the
// loss can be re-evaluated cheaply.
struct BlockExample {
  double span_deg = 0.0;
  FilteredDefenders defenders;
  bool blocked = false;
};

BlockExample make_block_example(const PitchPoint& shooter, const FreezeFrame* frame,
                                bool blocked);

double shot_block_probability(const BlockExample& ex, const TheoryParams& p);

inline constexpr double kProbEps = 1e-7;

// Mean binary cross-entropy with probabilities clamped to [eps, 1 - eps],
// accumulated with compensated summation.
double block_cel(std::span<const BlockExample> examples, std::span<const std::size_t> idx,
                 const TheoryParams& p);

struct TheoryFit {
  TheoryParams params;                 // fit on all training examples
  std::vector<double> fold_valid_cel;  // one per fold
  std::vector<double> fold_train_cel;
  std::vector<TheoryParams> fold_params;
  optim::OptimResult final_result;

  double mean_valid_cel() const;
  double std_valid_cel() const;
};

// Fits the parameters by minimizing the training cross-entropy on each fold,
// reporting validation loss per fold, then refits on every example.
TheoryFit fit_theory_params(std::span<const BlockExample> examples,
                            std::span<const Fold> folds, optim::Method method,
                            const TheoryParams& start = TheoryParams::initial_guess(),
                            const optim::Options& opts = {1e-8, 200});

// Objective used by fit_theory_params, exposed for tests and benchmarks.
optim::ObjectiveSpec theory_objective(std::span<const BlockExample> examples,
                                      std::span<const std::size_t> idx);

}  // namespace shotgame

#endif  // SHOTGAME_BLOCK_THEORY_HPP_
