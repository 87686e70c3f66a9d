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

#include "shotgame/block_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "shotgame/error.hpp"
#include "shotgame/json_io.hpp"

namespace shotgame {
namespace {

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) {
  return 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
}

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Per-defender quantities that do not depend on the shot angle.
struct DefenderTerms {
  double theta_d;
  double sigma;
  double norm;  // 1 / (sigma * (Phi(-a/sigma) - Phi(a/sigma)))
};

DefenderTerms defender_terms(const Defender& d, const TheoryParams& p) {
  const double sigma = p.sigma_intercept + d.distance_m * p.sigma_slope;
  if (!(sigma > 0.0)) {
    throw InvalidArgument("defender_block_density: sigma = " +
                          std::to_string(sigma) + " is not positive");
  }
  const double a = p.lower_bound;
  const double b = -a;
  const double mass = std_normal_cdf(b / sigma) - std_normal_cdf(a / sigma);
  return {d.theta_deg, sigma, 1.0 / (sigma * mass)};
}

double density(double theta, const DefenderTerms& t, const TheoryParams& p) {
  const double x = (theta - t.theta_d) / p.angle_scale;
  const double a = p.lower_bound;
  if (!(x > a && x < -a)) return 0.0;
  return std::min(1.0, t.norm * std_normal_pdf(x / t.sigma));
}

double chain(double theta, std::span<const DefenderTerms> terms,
             const TheoryParams& p) {
  double survive = 1.0;
  double blocked = 0.0;
  for (const auto& t : terms) {
    const double q = density(theta, t, p);
    blocked += survive * q;
    survive *= 1.0 - q;
  }
  return blocked;
}

double integrate(double span_deg, std::span<const Defender> defenders,
                 const TheoryParams& p, double step_deg) {
  if (defenders.empty() || !(span_deg > 0.0)) return 0.0;
  std::vector<DefenderTerms> terms;
  terms.reserve(defenders.size());
  for (const auto& d : defenders) terms.push_back(defender_terms(d, p));

  const std::vector<double> grid = angle_grid(span_deg, step_deg);
  double area = 0.0;
  double prev = chain(grid[0], terms, p);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = chain(grid[i], terms, p);
    area += 0.5 * (prev + cur) * (grid[i] - grid[i - 1]);
    prev = cur;
  }
  return p.output_scale * area / span_deg;
}

}  // namespace

bool TheoryParams::valid() const {
  return angle_scale > 0.0 && sigma_slope >= 0.0 && output_scale > 0.0 &&
         output_scale <= 1.0 && sigma_intercept > 0.0 && lower_bound < 0.0 &&
         std::isfinite(angle_scale) && std::isfinite(sigma_slope) &&
         std::isfinite(sigma_intercept) && std::isfinite(lower_bound);
}

void TheoryParams::validate() const {
  if (!valid()) {
    throw InvalidArgument(
        "invalid theory parameters: need c1 > 0, c2 >= 0, 0 < c3 <= 1, "
        "c4 > 0, a < 0");
  }
}

std::vector<double> TheoryParams::to_vector() const {
  return {angle_scale, sigma_slope, output_scale, sigma_intercept, lower_bound};
}

TheoryParams TheoryParams::from_vector(std::span<const double> v) {
  if (v.size() != 5) throw InvalidArgument("theory parameter vector needs 5 values");
  return {v[0], v[1], v[2], v[3], v[4]};
}

TheoryParams load_theory_params(const std::filesystem::path& file) {
  const Json j = read_json_file(file);
  require_version(j, 1, file.string());
  TheoryParams p;
  try {
    p.angle_scale = j.at("c1").get<double>();
    p.sigma_slope = j.at("c2").get<double>();
    p.output_scale = j.at("c3").get<double>();
    p.sigma_intercept = j.at("c4").get<double>();
    p.lower_bound = j.at("a").get<double>();
  } catch (const Json::exception& e) {
    throw DataError("malformed theory parameters " + file.string() + ": " + e.what());
  }
  p.validate();
  return p;
}

void save_theory_params(const TheoryParams& p, const std::filesystem::path& file) {
  write_json_file(file, Json{{"c1", p.angle_scale},
                             {"c2", p.sigma_slope},
                             {"c3", p.output_scale},
                             {"c4", p.sigma_intercept},
                             {"a", p.lower_bound},
                             {"version", 1}});
}

FilteredDefenders filter_defenders(const PitchPoint& shooter,
                                   std::span<const PlayerSnapshot> players) {
  FilteredDefenders out;
  for (const auto& s : players) {
    if (s.teammate || s.keeper) continue;
    if (!feasible_zone_contains(shooter, s.location)) continue;
    if (s.location == shooter) continue;
    const DefenderAngle da = defender_angle_distance(shooter, s.location);
    out.push_back({da.theta_deg, da.distance_m});
  }
  std::sort(out.begin(), out.end(), [](const Defender& a, const Defender& b) {
    if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
    return a.theta_deg < b.theta_deg;
  });
  return out;
}

double defender_block_density(double theta_deg, double theta_d, double distance_m,
                              const TheoryParams& p) {
  if (!(distance_m > 0.0)) {
    throw InvalidArgument("defender_block_density: distance must be positive");
  }
  return density(theta_deg, defender_terms({theta_d, distance_m}, p), p);
}

double block_prob_given_angle(double theta_deg, std::span<const Defender> defenders,
                              const TheoryParams& p) {
  std::vector<DefenderTerms> terms;
  terms.reserve(defenders.size());
  for (const auto& d : defenders) terms.push_back(defender_terms(d, p));
  return chain(theta_deg, terms, p);
}

std::vector<double> angle_grid(double span_deg, double step_deg) {
  if (!(step_deg > 0.0)) throw InvalidArgument("angle_grid: step must be positive");
  std::vector<double> grid;
  if (!(span_deg > 0.0)) return {0.0};
  const auto whole = static_cast<std::size_t>(std::floor(span_deg / step_deg));
  grid.reserve(whole + 2);
  for (std::size_t i = 0; i <= whole; ++i) grid.push_back(static_cast<double>(i) * step_deg);
  if (grid.back() < span_deg) grid.push_back(span_deg);
  return grid;
}

std::vector<CurvePoint> block_probability_curve(const PitchPoint& shooter,
                                                std::span<const PlayerSnapshot> players,
                                                const TheoryParams& p) {
  const double span = shooter.x < pitch::kLength ? feasible_angle_span(shooter) : 0.0;
  const FilteredDefenders defenders = filter_defenders(shooter, players);
  std::vector<CurvePoint> curve;
  if (!(span > 0.0)) return curve;
  for (double theta : angle_grid(span)) {
    curve.push_back({theta, block_prob_given_angle(theta, defenders, p)});
  }
  return curve;
}

double shot_block_probability(const PitchPoint& shooter,
                              std::span<const PlayerSnapshot> players,
                              const TheoryParams& p, double step_deg) {
  if (shooter.x >= pitch::kLength) return 0.0;
  const FilteredDefenders defenders = filter_defenders(shooter, players);
  if (defenders.empty()) return 0.0;
  return integrate(feasible_angle_span(shooter), defenders, p, step_deg);
}

BlockExample make_block_example(const PitchPoint& shooter, const FreezeFrame* frame,
                                bool blocked) {
  BlockExample ex;
  ex.blocked = blocked;
  if (frame == nullptr || shooter.x >= pitch::kLength) return ex;
  ex.span_deg = feasible_angle_span(shooter);
  ex.defenders = filter_defenders(shooter, frame->players);
  return ex;
}

double shot_block_probability(const BlockExample& ex, const TheoryParams& p) {
  return integrate(ex.span_deg, ex.defenders, p, 1.0);
}

double block_cel(std::span<const BlockExample> examples, std::span<const std::size_t> idx,
                 const TheoryParams& p) {
  if (idx.empty()) return 0.0;
  CompensatedSum sum;
  for (std::size_t i : idx) {
    const BlockExample& ex = examples[i];
    const double prob = std::clamp(shot_block_probability(ex, p), kProbEps, 1.0 - kProbEps);
    sum.add(ex.blocked ? -std::log(prob) : -std::log1p(-prob));
  }
  return sum.value() / static_cast<double>(idx.size());
}

optim::ObjectiveSpec theory_objective(std::span<const BlockExample> examples,
                                      std::span<const std::size_t> idx) {
  optim::ObjectiveSpec spec;
  spec.dimension = 5;
  spec.eval = [examples, idx](std::span<const double> v) {
    const TheoryParams p = TheoryParams::from_vector(v);
    if (!p.valid()) return std::numeric_limits<double>::infinity();
    return block_cel(examples, idx, p);
  };
  return spec;
}

double TheoryFit::mean_valid_cel() const {
  if (fold_valid_cel.empty()) return 0.0;
  return std::accumulate(fold_valid_cel.begin(), fold_valid_cel.end(), 0.0) /
         static_cast<double>(fold_valid_cel.size());
}

double TheoryFit::std_valid_cel() const {
  if (fold_valid_cel.size() < 2) return 0.0;
  const double m = mean_valid_cel();
  double ss = 0.0;
  for (double v : fold_valid_cel) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(fold_valid_cel.size()));
}

TheoryFit fit_theory_params(std::span<const BlockExample> examples,
                            std::span<const Fold> folds, optim::Method method,
                            const TheoryParams& start, const optim::Options& opts) {
  start.validate();
  const std::vector<double> x0 = start.to_vector();
  TheoryFit fit;
  for (const Fold& fold : folds) {
    const optim::ObjectiveSpec spec = theory_objective(examples, fold.train);
    const optim::OptimResult r = optim::minimize(method, spec, x0, opts);
    const TheoryParams p = TheoryParams::from_vector(r.x_star);
    fit.fold_params.push_back(p);
    fit.fold_train_cel.push_back(r.f_star);
    fit.fold_valid_cel.push_back(block_cel(examples, fold.valid, p));
  }
  std::vector<std::size_t> all(examples.size());
  std::iota(all.begin(), all.end(), 0);
  fit.final_result = optim::minimize(method, theory_objective(examples, all), x0, opts);
  fit.params = TheoryParams::from_vector(fit.final_result.x_star);
  return fit;
}

}  // namespace shotgame
