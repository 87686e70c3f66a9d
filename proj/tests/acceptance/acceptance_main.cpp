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

// Acceptance runner: one PASS / FAIL / NOT RUN line per criterion.
//
// usage: shotgame_acceptance <shotgame-cli> <unit-test-binary>
//
// Data-dependent criteria use the corpus under $SHOTGAME_DATA when set and
// otherwise fall back to the bundled synthetic fixture where that is
// meaningful.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shotgame/analysis.hpp"
#include "shotgame/block_theory.hpp"
#include "shotgame/data_ingest.hpp"
#include "shotgame/game.hpp"
#include "shotgame/metrics.hpp"
#include "shotgame/nnet.hpp"
#include "shotgame/pipeline.hpp"

namespace fs = std::filesystem;
using namespace shotgame;

namespace {

enum class Verdict { kPass, kFail, kNotRun };

struct Result {
  Verdict verdict;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const fs::path kSource = SHOTGAME_SOURCE_DIR;
const fs::path kFixtures = kSource / "data" / "fixtures";

// Corpus selection shared by the data-dependent criteria.
struct Corpus {
  Dataset data;
  bool full = false;
  std::string name;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    const char* env = std::getenv("SHOTGAME_DATA");
    const fs::path root = env && *env ? fs::path(env) : kFixtures / "corpus";
    out.full = env && *env;
    out.name = out.full ? root.string() : "bundled fixture";
    out.data = load_dataset(root, [](const std::string&) {});
    return out;
  }();
  return c;
}

struct TheoryStage {
  DatasetSplit split;
  TheoryFit fit;
};

const TheoryStage& theory_stage() {
  static const TheoryStage t = [] {
    TheoryStage s;
    s.split = split_dataset(corpus().data.events, kDefaultSeed);
    const auto examples = block_examples(s.split.train, corpus().data.frames);
    s.fit = fit_theory_params(examples, s.split.folds, optim::Method::kPowell);
    return s;
  }();
  return t;
}

// Mean CV cross-entropy of the block network; with `per_fold_theory` the
// theory feature of each fold comes from parameters fitted on that fold.
double block_cv(const DatasetSplit& split, nnet::FeatureSet features, std::uint64_t seed,
                const TheoryParams& theory, const std::vector<TheoryParams>* per_fold_theory) {
  nnet::TrainConfig cfg = default_config(ModelKind::kBlock);
  cfg.seed = seed;
  const auto& frames = corpus().data.frames;
  if (per_fold_theory == nullptr) {
    const auto rows = build_rows(split.train, frames, ModelKind::kBlock, features, theory);
    return nnet::cross_validate_mlp(rows, split.folds, cfg).mean_unweighted();
  }
  std::vector<double> losses;
  for (std::size_t f = 0; f < split.folds.size(); ++f) {
    const auto rows =
        build_rows(split.train, frames, ModelKind::kBlock, features, (*per_fold_theory)[f]);
    const std::array<Fold, 1> one{split.folds[f]};
    cfg.seed = derive_seed(seed, f);
    const auto s = nnet::cross_validate_mlp(rows, one, cfg);
    losses.push_back(s.unweighted.front());
  }
  return nnet::mean_of(losses);
}

Result chi_square() {
  const auto counts = to_counts(load_contingency(kFixtures / "outcome_sequence_counts.json"));
  ChiSquareResult r;
  std::vector<double> us;
  for (int i = 0; i < 25; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    r = chi_square_independence(counts);
    us.push_back(
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count());
  }
  std::nth_element(us.begin(), us.begin() + 12, us.end());
  const double median_us = us[12];
  const bool ok = std::abs(r.statistic - 0.6163) <= 1e-3 && r.df == 4 &&
                  std::abs(r.p_value - 0.9612) <= 1e-3 && median_us < 1000.0;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "statistic " + fmt(r.statistic) + ", df " + std::to_string(r.df) + ", p " +
              fmt(r.p_value) + ", " + fmt(median_us, 1) + " us"};
}

Result composition() {
  struct Row {
    const char* who;
    double on, off, block;
    std::optional<double> control;
  };
  const Row rows[] = {{"9", 0.27, 0.32, 0.22, 0.59},  {"20", 0.23, 0.60, 0.03, 0.63},
                      {"14", 0.17, 0.67, 0.16, 0.99}, {"12", 0.15, 0.63, 0.20, 0.89},
                      {"6", 0.05, 0.53, 0.18, 0.17},  {"shooter", 0.03, 0.51, 0.46, std::nullopt},
                      {"8", 0.00, 0.61, 0.40, 0.60}};
  double worst = 0.0;
  std::string bad;
  for (const auto& r : rows) {
    const double p = compose_p_on(r.off, r.block, r.control.value_or(1.0));
    const double err = std::abs(p - r.on);
    worst = std::max(worst, err);
    if (err > 0.005 + 1e-12) bad += std::string(" ") + r.who;
  }
  return {bad.empty() ? Verdict::kPass : Verdict::kFail,
          "7 rows, max |error| " + fmt(worst) + (bad.empty() ? "" : ", off:" + bad)};
}

Result nash() {
  const auto t = PayoffTable::from_rows(0.0866, 0.2508, 0.2456, 0.2481);
  const auto pure = pure_nash(t);
  const bool exact = pure.size() == 1 &&
                     pure[0] == Profile{ShooterStrategy::kPass, DefenderStrategy::kBlocking};
  const double gain = max_deviation_gain(t, 0.0, 1.0);
  const bool ok = exact && gain <= kTieTolerance;
  std::string profiles;
  for (const auto& p : pure) {
    profiles += "(" + std::string(strategy_name(p.shooter)) + ", " +
                std::string(strategy_name(p.defender)) + ")";
  }
  return {ok ? Verdict::kPass : Verdict::kFail,
          "pure " + (profiles.empty() ? std::string("none") : profiles) +
              ", max deviation gain " + fmt(gain, 6)};
}

Result theory_fit() {
  const auto& st = theory_stage();
  const double theory_cel = st.fit.mean_valid_cel();
  const double dnn_cel = block_cv(st.split, nnet::FeatureSet::kProposed, kDefaultSeed,
                                  st.fit.params, &st.fit.fold_params);
  const bool ranking = dnn_cel < theory_cel;
  std::string detail = corpus().name + ": theory CV CEL " + fmt(theory_cel) +
                       ", network with theory feature " + fmt(dnn_cel);
  if (!corpus().full) {
    return {ranking ? Verdict::kPass : Verdict::kFail,
            detail + " (ranking only; full corpus not available)"};
  }
  const bool band = std::abs(theory_cel - 0.92) <= 0.05;
  return {ranking && band ? Verdict::kPass : Verdict::kFail, detail};
}

Result ablation() {
  const TheoryParams theory = theory_stage().fit.params;
  std::string detail;
  bool ok = true;
  for (std::uint64_t seed : {0, 1, 2}) {
    const DatasetSplit split = split_dataset(corpus().data.events, seed);
    const double proposed = block_cv(split, nnet::FeatureSet::kProposed, seed, theory, nullptr);
    const double basic = block_cv(split, nnet::FeatureSet::kBasic, seed, theory, nullptr);
    ok = ok && proposed < basic;
    detail += (detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(seed) + " " +
              fmt(proposed) + " < " + fmt(basic);
  }
  return {ok ? Verdict::kPass : Verdict::kFail, corpus().name + ": " + detail};
}

Result correlation() {
  if (!corpus().full) {
    return {Verdict::kNotRun, "needs the full open-data corpus (set SHOTGAME_DATA)"};
  }
  const auto& data = corpus().data;
  const auto& st = theory_stage();
  const auto off_rows = build_rows(st.split.train, data.frames, ModelKind::kOff,
                                   nnet::FeatureSet::kBasic, st.fit.params);
  const auto block_rows = build_rows(st.split.train, data.frames, ModelKind::kBlock,
                                     nnet::FeatureSet::kProposed, st.fit.params);
  nnet::TrainConfig off_cfg = default_config(ModelKind::kOff);
  nnet::TrainConfig block_cfg = default_config(ModelKind::kBlock);
  off_cfg.seed = block_cfg.seed = kDefaultSeed;
  nnet::MlpModel off = nnet::train_mlp(off_rows, off_cfg).model;
  nnet::MlpModel block = nnet::train_mlp(block_rows, block_cfg).model;
  off.features = nnet::FeatureSet::kBasic;
  block.features = nnet::FeatureSet::kProposed;
  const MetricsEngine engine(std::move(off), std::move(block), st.fit.params);
  const auto shots = score_shots(data.events, data.frames, engine);
  const TeamStudy study = team_study(shots, read_teams_xg(kFixtures / "teams_xg.csv"));
  auto find = [&](const std::string& a, const std::string& b) -> std::optional<double> {
    for (const auto& c : study.correlations) {
      if (c.first == a && c.second == b) return c.r;
    }
    return std::nullopt;
  };
  const auto xg_max = find("xG", "max_prob");
  const auto goal_xsot = find("Avg Goal", "xSOT");
  const auto goal_xg = find("Avg Goal", "xG");
  if (!xg_max || !goal_xsot || !goal_xg) return {Verdict::kFail, "correlations undefined"};
  const bool ok = *xg_max >= 0.85 && *goal_xsot > *goal_xg;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "corr(xG, max_prob) " + fmt(*xg_max, 3) + ", corr(Avg Goal, xSOT) " +
              fmt(*goal_xsot, 3) + " vs corr(Avg Goal, xG) " + fmt(*goal_xg, 3)};
}

std::string quote(const fs::path& p) { return "\"" + p.string() + "\""; }

Result properties(const fs::path& unit_binary) {
  const std::string suites = "optim,block_theory,nnet,pitch_control,game,data_ingest,geometry";
  const std::string cmd = quote(unit_binary) + " --test-suite=" + suites +
                          " --no-intro=true --minimal=true > " +
                          quote(fs::temp_directory_path() / "shotgame_properties.log") + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return {rc == 0 ? Verdict::kPass : Verdict::kFail,
          "suites " + suites + (rc == 0 ? "" : " (exit " + std::to_string(rc) + ")")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result cli_determinism(const fs::path& cli) {
  const fs::path out = fs::temp_directory_path() / "shotgame_acceptance_eval";
  const std::string id = "italy-wales-pass-options";
  const std::string cmd = quote(cli) + " evaluate --event " + id + " --models-dir " +
                          quote(kSource / "data" / "models") + " --fixtures-dir " +
                          quote(kFixtures / "scenarios") + " --out " + quote(out) + " > " +
                          quote(fs::temp_directory_path() / "shotgame_evaluate.log") + " 2>&1";
  std::string runs[2];
  for (auto& r : runs) {
    fs::remove_all(out);
    if (std::system(cmd.c_str()) != 0) return {Verdict::kFail, "evaluate exited non-zero"};
    r = slurp(out / ("evaluate_" + id + ".json"));
  }
  fs::remove_all(out);
  const bool ok = !runs[0].empty() && runs[0] == runs[1];
  return {ok ? Verdict::kPass : Verdict::kFail,
          std::to_string(runs[0].size()) + " bytes, " + (ok ? "identical" : "different")};
}

Result guarded(const std::function<Result()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {Verdict::kFail, std::string("error: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: shotgame_acceptance <shotgame-cli> <unit-test-binary>\n";
    return 2;
  }
  const fs::path cli = argv[1];
  const fs::path unit = argv[2];

  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"chi-square reproduction", chi_square},
      {"breakdown composition", composition},
      {"nash solution", nash},
      {"theory-model fit", theory_fit},
      {"ablation ordering", ablation},
      {"correlation regime", correlation},
      {"property suites", [&] { return properties(unit); }},
      {"end-to-end determinism", [&] { return cli_determinism(cli); }},
  };

  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const Result o = guarded(run);
    const char* tag = o.verdict == Verdict::kPass   ? "PASS"
                      : o.verdict == Verdict::kFail ? "FAIL"
                                                    : "NOT RUN";
    failures += o.verdict == Verdict::kFail;
    std::cout << tag << "  " << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
