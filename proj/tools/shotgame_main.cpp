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

#include <Eigen/Core>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "shotgame/analysis.hpp"
#include "shotgame/block_theory.hpp"
#include "shotgame/data_ingest.hpp"
#include "shotgame/error.hpp"
#include "shotgame/game.hpp"
#include "shotgame/json_io.hpp"
#include "shotgame/metrics.hpp"
#include "shotgame/nnet.hpp"
#include "shotgame/pipeline.hpp"
#include "shotgame/scenario.hpp"
#include "shotgame/service.hpp"
#include "shotgame/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace shotgame;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct RunConfig {
  std::string data_dir;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "out";
  std::string method = "powell";
  std::string model = "block";
  std::string features = "proposed";
  std::string grid = "none";
  double threshold = 0.5;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string models_dir = "data/models";
  std::string fixtures_dir = "data/fixtures/scenarios";
  std::string theory_params = "data/fixtures/theory_params.json";
  std::string table = "data/fixtures/outcome_sequence_counts.json";
  std::string teams_xg = "data/fixtures/teams_xg.csv";
  std::string event;
  std::string analysis;
  bool remove_closest = false;
  int epochs = 300;
  int max_iter = 200;
  double tol = 1e-8;
  double dt = 0.04;
  unsigned threads = 0;

  Json to_json() const {
    return {{"data_dir", data_dir},         {"seed", seed},
            {"out", out},                   {"method", method},
            {"model", model},               {"features", features},
            {"grid", grid},                 {"threshold", threshold},
            {"port", port},                 {"host", host},
            {"models_dir", models_dir},     {"fixtures_dir", fixtures_dir},
            {"theory_params", theory_params}, {"table", table},
            {"teams_xg", teams_xg},         {"event", event},
            {"analysis", analysis},         {"remove_closest", remove_closest},
            {"epochs", epochs},             {"max_iter", max_iter},
            {"tol", tol},                   {"dt", dt}};
  }
};

class Run {
 public:
  Run(std::string command, const RunConfig& cfg) : command_(std::move(command)), cfg_(cfg) {}

  fs::path output(const std::string& name) {
    outputs_.push_back(name);
    return fs::path(cfg_.out) / name;
  }

  void write(const std::string& name, const Json& j) { write_json_file(output(name), j); }

  void finish() const {
    const std::string eigen = std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
    const std::string json_version = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                     std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                     std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    Json m{{"format", "shotgame-manifest"},
           {"version", 1},
           {"tool_version", SHOTGAME_VERSION},
           {"command", command_},
           {"config", cfg_.to_json()},
           {"seeds", {{"split", cfg_.seed}, {"folds", derive_seed(cfg_.seed, 1)}}},
           {"libraries", {{"eigen", eigen}, {"nlohmann_json", json_version}, {"cli11", CLI11_VERSION}}},
           {"outputs", outputs_}};
    write_json_file(fs::path(cfg_.out) / (command_ + ".manifest.json"), m);
  }

 private:
  std::string command_;
  const RunConfig& cfg_;
  std::vector<std::string> outputs_;
};

Dataset load_data(const RunConfig& cfg) {
  return load_dataset(cfg.data_dir, [](const std::string& msg) {
    std::cerr << "warning: " << msg << '\n';
  });
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Json outcome_counts(std::span<const ShotEvent> events) {
  std::map<std::string, int> c{{"On", 0}, {"Off", 0}, {"Block", 0}};
  for (const auto& e : events) ++c[std::string(outcome_name(e.outcome))];
  return c;
}

int cmd_ingest(const RunConfig& cfg) {
  Run run("ingest", cfg);
  const Dataset ds = load_data(cfg);
  save_dataset(ds, run.output("dataset.json"));
  const DatasetSplit split = split_dataset(ds.events, cfg.seed);
  const Json counts = outcome_counts(ds.events);
  run.write("ingest_report.json", {{"events", ds.events.size()},
                                   {"frames", ds.frames.size()},
                                   {"outcomes", counts},
                                   {"train", split.train.size()},
                                   {"test", split.test.size()}});
  std::cout << "events " << ds.events.size() << " (On " << counts["On"] << ", Off "
            << counts["Off"] << ", Block " << counts["Block"] << "), frames " << ds.frames.size()
            << ", split " << split.train.size() << "/" << split.test.size() << '\n';
  run.finish();
  return 0;
}

int cmd_fit_theory(const RunConfig& cfg) {
  Run run("fit-theory", cfg);
  const Dataset ds = load_data(cfg);
  const DatasetSplit split = split_dataset(ds.events, cfg.seed);
  const auto train = block_examples(split.train, ds.frames);
  const auto test = block_examples(split.test, ds.frames);
  const auto method = optim::method_from_name(cfg.method);
  const TheoryFit fit = fit_theory_params(train, split.folds, method, TheoryParams::initial_guess(),
                                         {cfg.tol, cfg.max_iter});
  save_theory_params(fit.params, run.output("theory_params.json"));

  std::vector<std::size_t> test_idx(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) test_idx[i] = i;
  Json folds = Json::array();
  for (std::size_t f = 0; f < fit.fold_valid_cel.size(); ++f) {
    const auto v = fit.fold_params[f].to_vector();
    folds.push_back({{"fold", f},
                     {"valid_cel", round6(fit.fold_valid_cel[f])},
                     {"train_cel", round6(fit.fold_train_cel[f])},
                     {"params", {round6(v[0]), round6(v[1]), round6(v[2]), round6(v[3]), round6(v[4])}}});
  }
  const double test_cel = block_cel(test, test_idx, fit.params);
  run.write("theory_fit.json",
            {{"method", optim::method_name(method)},
             {"folds", std::move(folds)},
             {"mean_valid_cel", round6(fit.mean_valid_cel())},
             {"std_valid_cel", round6(fit.std_valid_cel())},
             {"final", {{"train_cel", round6(fit.final_result.f_star)},
                        {"n_evals", fit.final_result.n_evals},
                        {"iterations", fit.final_result.iterations},
                        {"converged", fit.final_result.converged}}},
             {"test_cel", round6(test_cel)}});
  const auto& p = fit.params;
  std::cout << "method " << optim::method_name(method) << ": CV CEL " << fmt(fit.mean_valid_cel())
            << " +/- " << fmt(fit.std_valid_cel()) << ", test CEL " << fmt(test_cel) << '\n'
            << "c1 " << fmt(p.angle_scale) << "  c2 " << fmt(p.sigma_slope) << "  c3 "
            << fmt(p.output_scale) << "  c4 " << fmt(p.sigma_intercept) << "  a "
            << fmt(p.lower_bound) << '\n';
  run.finish();
  return 0;
}

nnet::GridSpace grid_for(const std::string& name) {
  nnet::GridSpace g;
  if (name == "full") return g;
  if (name == "small") {
    g.num_layers = {1, 2};
    g.hidden_dim = {32, 64};
    g.dropout_rate = {0.0};
    g.activation = {nnet::Activation::kRelu, nnet::Activation::kTanh};
    g.embedding_dim = {1, 2};
    return g;
  }
  throw InvalidArgument("unknown grid '" + name + "' (expected none, small or full)");
}

Json scores_json(const nnet::FoldScores& s) {
  return {{"fold_cel", s.unweighted},
          {"mean_cel", round6(s.mean_unweighted())},
          {"std_cel", round6(s.std_unweighted())},
          {"fold_weighted_cel", s.weighted},
          {"mean_weighted_cel", round6(s.mean_weighted())}};
}

Json confusion_json(const ConfusionMatrix& m, double threshold) {
  return {{"threshold", threshold},
          {"counts", m.counts},
          {"percent", {{round6(m.percent[0][0]), round6(m.percent[0][1])},
                       {round6(m.percent[1][0]), round6(m.percent[1][1])}}}};
}

int cmd_train(const RunConfig& cfg) {
  Run run("train", cfg);
  const ModelKind kind = model_kind_from_name(cfg.model);
  const auto features = kind == ModelKind::kOff ? nnet::FeatureSet::kBasic
                                                : nnet::feature_set_from_name(cfg.features);
  const TheoryParams theory = load_theory_params(cfg.theory_params);
  const Dataset ds = load_data(cfg);
  const DatasetSplit split = split_dataset(ds.events, cfg.seed);
  const auto rows = build_rows(split.train, ds.frames, kind, features, theory);
  const auto test_rows = build_rows(split.test, ds.frames, kind, features, theory);

  nnet::TrainConfig config = default_config(kind);
  config.epochs = cfg.epochs;
  config.seed = cfg.seed;
  Json grid_json = nullptr;
  if (cfg.grid != "none") {
    const auto grid = nnet::grid_search_cv(rows, split.folds, grid_for(cfg.grid), config,
                                           cfg.threads);
    config = grid.best;
    grid_json = Json::array();
    for (const auto& e : grid.table) {
      grid_json.push_back({{"config", e.config.describe()},
                           {"mean_weighted_cel", round6(e.scores.mean_weighted())},
                           {"mean_cel", round6(e.scores.mean_unweighted())}});
    }
  }

  const auto cv = nnet::cross_validate_mlp(rows, split.folds, config);
  const auto hist = nnet::cross_validate_historical(rows, split.folds);
  nnet::ElasticNetOptions en_best;
  const auto en = nnet::cross_validate_elastic_net(rows, split.folds, &en_best);

  nnet::TrainResult final = nnet::train_mlp(rows, config);
  final.model.kind = std::string(model_kind_name(kind));
  final.model.features = features;
  final.model.save(run.output("model_" + final.model.kind + ".json"));

  const auto probs = final.model.predict(test_rows);
  const auto labels = nnet::labels_of(test_rows);
  const double test_cel = nnet::weighted_cel(probs, labels);
  const auto cm = confusion_matrix(probs, labels, cfg.threshold);

  run.write("train_" + final.model.kind + ".json",
            {{"model", final.model.kind},
             {"features", nnet::feature_set_name(features)},
             {"config", config.describe()},
             {"cv", scores_json(cv)},
             {"baselines",
              {{"historical", {{"fold_cel", hist.fold_cel}, {"mean_cel", round6(hist.mean())}}},
               {"elastic_net",
                {{"fold_cel", en.fold_cel},
                 {"mean_cel", round6(en.mean())},
                 {"l1_ratio", en_best.l1_ratio},
                 {"strength", en_best.strength}}}}},
             {"grid", grid_json},
             {"test_cel", round6(test_cel)},
             {"confusion", confusion_json(cm, cfg.threshold)}});

  std::cout << "model " << final.model.kind << " (" << nnet::feature_set_name(features) << ", "
            << config.describe() << ")\n"
            << "  CV CEL " << fmt(cv.mean_unweighted()) << " +/- " << fmt(cv.std_unweighted())
            << "\n  historical " << fmt(hist.mean()) << ", elastic net " << fmt(en.mean())
            << "\n  test CEL " << fmt(test_cel) << ", confusion [[" << fmt(cm.percent[0][0], 2)
            << "%, " << fmt(cm.percent[0][1], 2) << "%], [" << fmt(cm.percent[1][0], 2) << "%, "
            << fmt(cm.percent[1][1], 2) << "%]]\n";
  run.finish();
  return 0;
}

MetricsEngine engine_for(const RunConfig& cfg) {
  ControlParams control;
  control.dt = cfg.dt;
  MetricsEngine base = load_engine(cfg.models_dir);
  return MetricsEngine(base.off_model(), base.block_model(), base.theory(), control);
}

// A fixture by id or source event id, else a dataset event by uuid.
std::pair<std::string, ScenarioRequest> find_scenario(const RunConfig& cfg) {
  if (cfg.event.empty()) throw InvalidArgument("--event is required");
  if (fs::is_directory(cfg.fixtures_dir)) {
    for (const auto& f : load_fixtures(cfg.fixtures_dir)) {
      if (f.id == cfg.event || f.event_id == cfg.event) return {f.id, f.request};
    }
  }
  const Dataset ds = load_data(cfg);
  for (const auto& e : ds.events) {
    if (e.event_id == cfg.event) {
      ScenarioRequest req;
      req.scenario = scenario_from_event(e, ds.frame_for(e.event_id));
      return {e.event_id, req};
    }
  }
  throw DataError("no fixture or event with id '" + cfg.event + "'");
}

int cmd_evaluate(const RunConfig& cfg) {
  Run run("evaluate", cfg);
  const MetricsEngine engine = engine_for(cfg);
  auto [id, req] = find_scenario(cfg);
  req.remove_closest = req.remove_closest || cfg.remove_closest;
  const Json resp = evaluate_scenario(engine, req);
  run.write("evaluate_" + id + ".json", resp);

  std::cout << "Jersey    P(Shot On)  P(Shot Off)  P(Shot Block)  P(Control)\n";
  for (const auto& b : resp.at("breakdowns")) {
    std::string label = b.at("label").get<std::string>();
    if (label.empty()) label = "#" + std::to_string(b.at("player_index").get<int>());
    char line[160];
    std::snprintf(line, sizeof line, "%-9s %10.2f %12.2f %14.2f %11s\n", label.c_str(),
                  b.at("p_on").get<double>(), b.at("p_off").get<double>(),
                  b.at("p_block").get<double>(),
                  b.at("p_control").is_null() ? "-"
                                              : fmt(b.at("p_control").get<double>(), 2).c_str());
    std::cout << line;
  }
  const auto& t = resp.at("payoff_table");
  std::cout << "payoff  Shoot: " << fmt(t["Shoot"]["Blocking"]) << " / "
            << fmt(t["Shoot"]["NotBlocking"]) << "   Pass: " << fmt(t["Pass"]["Blocking"])
            << " / " << fmt(t["Pass"]["NotBlocking"]) << '\n';
  for (const auto& p : resp.at("nash").at("pure")) {
    std::cout << "equilibrium (" << p.at("shooter").get<std::string>() << ", "
              << p.at("defender").get<std::string>() << ")\n";
  }
  run.finish();
  return 0;
}

Json table_json(const PayoffTable& t) { return payoff_to_json(t); }

int cmd_payoff_study(const RunConfig& cfg) {
  Run run("payoff-study", cfg);
  const MetricsEngine engine = engine_for(cfg);
  const Dataset ds = load_data(cfg);

  std::vector<Scenario> scenarios;
  for (const auto& e : ds.events) {
    const FreezeFrame* frame = ds.frame_for(e.event_id);
    if (frame == nullptr || e.location.x >= 120.0) continue;
    if (filter_defenders(e.location, frame->players).empty()) continue;
    scenarios.push_back(scenario_from_event(e, frame));
  }
  if (scenarios.empty()) throw DataError("no shots with a defender in the feasible zone");
  std::vector<PayoffTable> tables(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    tables[i] = build_payoff_table(engine, scenarios[i]).table;
  }
  const PayoffTable avg = average_tables(tables);
  const NashSolution nash = solve_game(avg);
  double gain = 0.0;
  for (const auto& p : nash.pure) {
    gain = std::max(gain, max_deviation_gain(avg, p.shooter == ShooterStrategy::kShoot ? 1 : 0,
                                             p.defender == DefenderStrategy::kBlocking ? 1 : 0));
  }
  if (nash.mixed) gain = max_deviation_gain(avg, nash.mixed->p_shoot, nash.mixed->q_block);
  run.write("payoff_study.json", {{"events", ds.events.size()},
                                  {"scenarios", scenarios.size()},
                                  {"payoff_table", table_json(avg)},
                                  {"nash", nash_to_json(nash)},
                                  {"max_deviation_gain", round6(gain)}});
  std::cout << "scenarios with |D| >= 1: " << scenarios.size() << " of " << ds.events.size()
            << "\n            Blocking  NotBlocking\n  Shoot     " << fmt(avg.shooter[0][0])
            << "    " << fmt(avg.shooter[0][1]) << "\n  Pass      " << fmt(avg.shooter[1][0])
            << "    " << fmt(avg.shooter[1][1]) << '\n';
  for (const auto& p : nash.pure) {
    std::cout << "pure equilibrium (" << strategy_name(p.shooter) << ", "
              << strategy_name(p.defender) << ")\n";
  }
  if (nash.mixed) {
    std::cout << "mixed equilibrium p_shoot " << fmt(nash.mixed->p_shoot) << ", q_block "
              << fmt(nash.mixed->q_block) << ", value " << fmt(nash.mixed->value) << '\n';
  }
  run.finish();
  return 0;
}

Json chi_json(const ChiSquareResult& r) {
  return {{"statistic", round6(r.statistic)}, {"df", r.df}, {"p_value", round6(r.p_value)}};
}

int cmd_analyze(const RunConfig& cfg) {
  Run run("analyze", cfg);
  if (cfg.analysis == "chi-square") {
    const ContingencyTable t = load_contingency(cfg.table);
    const ChiSquareResult r = chi_square_independence(to_counts(t));
    run.write("chi_square.json", {{"table", t}, {"result", chi_json(r)}});
    std::cout << "statistic " << fmt(r.statistic) << ", df " << r.df << ", p " << fmt(r.p_value)
              << '\n';
  } else if (cfg.analysis == "contingency") {
    const Dataset ds = load_data(cfg);
    Json out;
    for (bool cross : {false, true}) {
      const ContingencyTable t = build_contingency(ds.events, cross);
      const ChiSquareResult r = chi_square_independence(to_counts(t));
      out[cross ? "cross_match" : "within_match"] = {{"table", t}, {"result", chi_json(r)}};
      std::cout << (cross ? "cross-match  " : "within-match ") << "statistic "
                << fmt(r.statistic) << ", df " << r.df << ", p " << fmt(r.p_value) << '\n';
    }
    run.write("contingency.json", out);
  } else if (cfg.analysis == "teams") {
    const MetricsEngine engine = engine_for(cfg);
    const Dataset ds = load_data(cfg);
    const auto shots = score_shots(ds.events, ds.frames, engine, cfg.threads);
    const TeamStudy study = team_study(shots, read_teams_xg(cfg.teams_xg));
    Json teams = Json::array();
    for (const auto& t : study.teams) {
      teams.push_back({{"team", t.team},
                       {"matches", t.matches},
                       {"xsot", round6(t.xsot)},
                       {"xosot", round6(t.xosot)},
                       {"max_prob", round6(t.max_prob)},
                       {"avg_goal", t.avg_goal ? Json(*t.avg_goal) : Json(nullptr)},
                       {"xg", t.xg ? Json(*t.xg) : Json(nullptr)}});
      std::cout << t.team << ": xSOT " << fmt(t.xsot, 2) << ", xOSOT " << fmt(t.xosot, 2)
                << ", max_prob " << fmt(t.max_prob, 2) << '\n';
    }
    Json corr = Json::array();
    for (const auto& c : study.correlations) {
      corr.push_back({{"pair", {c.first, c.second}}, {"r", c.r ? Json(round6(*c.r)) : Json(nullptr)}});
      std::cout << "corr(" << c.first << ", " << c.second << ") = "
                << (c.r ? fmt(*c.r, 2) : std::string("undefined")) << '\n';
    }
    for (const auto& m : study.missing) std::cerr << "warning: no external xG for " << m << '\n';
    run.write("team_study.json",
              {{"teams", teams}, {"correlations", corr}, {"missing", study.missing}});
  } else if (cfg.analysis == "confusion") {
    const ModelKind kind = model_kind_from_name(cfg.model);
    const auto model =
        nnet::MlpModel::load(fs::path(cfg.models_dir) / ("model_" + cfg.model + ".json"));
    const TheoryParams theory = load_theory_params(fs::path(cfg.models_dir) / "theory_params.json");
    const Dataset ds = load_data(cfg);
    const DatasetSplit split = split_dataset(ds.events, cfg.seed);
    const auto rows = build_rows(split.test, ds.frames, kind, model.features, theory);
    const auto m = confusion_matrix(model.predict(rows), nnet::labels_of(rows), cfg.threshold);
    run.write("confusion_" + cfg.model + ".json", confusion_json(m, cfg.threshold));
    std::cout << "actual 0: " << fmt(m.percent[0][0], 2) << "% / " << fmt(m.percent[0][1], 2)
              << "%\nactual 1: " << fmt(m.percent[1][0], 2) << "% / " << fmt(m.percent[1][1], 2)
              << "%\n";
  } else {
    throw InvalidArgument("unknown analysis '" + cfg.analysis + "'");
  }
  run.finish();
  return 0;
}

int cmd_plot(const RunConfig& cfg) {
  Run run("plot", cfg);
  const MetricsEngine engine = engine_for(cfg);
  auto [id, req] = find_scenario(cfg);
  req.remove_closest = req.remove_closest || cfg.remove_closest;
  const Json resp = evaluate_scenario(engine, req);
  const fs::path out = run.output("plot_" + id + ".svg");
  write_scenario_svg(req.scenario, resp, out);
  std::cout << "wrote " << out.string() << '\n';
  run.finish();
  return 0;
}

int cmd_serve(const RunConfig& cfg) {
  ScenarioService service(engine_for(cfg), load_fixtures(cfg.fixtures_dir));
  service.serve(cfg.host, cfg.port, [&](int port) {
    std::cout << "listening on http://" << cfg.host << ":" << port << std::endl;
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shot-taking decision analysis: model fitting, metrics and what-if evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI run configuration");
  app.allow_config_extras(CLI::config_extras_mode::error);

  RunConfig cfg;
  if (const char* env = std::getenv("SHOTGAME_DATA")) cfg.data_dir = env;
  if (cfg.data_dir.empty()) cfg.data_dir = "data/fixtures/corpus";

  app.add_option("--data-dir", cfg.data_dir, "Corpus root with events/ and three-sixty/")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Split and training seed")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

  auto* ingest = app.add_subcommand("ingest", "Load events and frames, write the dataset");

  auto* fit = app.add_subcommand("fit-theory", "Fit the theory-based block model");
  fit->add_option("--method", cfg.method, "Optimizer")
      ->check(CLI::IsMember({"powell", "nelder-mead", "fd-cg"}))
      ->capture_default_str();
  fit->add_option("--tol", cfg.tol, "Optimizer tolerance")->capture_default_str();
  fit->add_option("--max-iter", cfg.max_iter, "Optimizer iteration cap")->capture_default_str();

  auto* train = app.add_subcommand("train", "Train an outcome classifier with baselines");
  train->add_option("--model", cfg.model)->check(CLI::IsMember({"off", "block"}))
      ->capture_default_str();
  train->add_option("--features", cfg.features, "Block model feature set")
      ->check(CLI::IsMember({"basic", "proposed", "unprocessed"}))
      ->capture_default_str();
  train->add_option("--grid", cfg.grid, "Hyperparameter search")
      ->check(CLI::IsMember({"none", "small", "full"}))
      ->capture_default_str();
  train->add_option("--epochs", cfg.epochs)->check(CLI::NonNegativeNumber)->capture_default_str();
  train->add_option("--theory-params", cfg.theory_params)->capture_default_str();
  train->add_option("--threshold", cfg.threshold)->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  auto add_scenario_opts = [&](CLI::App* sub) {
    sub->add_option("--event", cfg.event, "Fixture id, fixture event id or dataset event uuid")
        ->required();
    sub->add_option("--models-dir", cfg.models_dir)->capture_default_str();
    sub->add_option("--fixtures-dir", cfg.fixtures_dir)->capture_default_str();
    sub->add_flag("--remove-closest", cfg.remove_closest, "Drop the closest defender");
    sub->add_option("--dt", cfg.dt, "Pitch-control time step")->check(CLI::PositiveNumber);
  };
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one scenario");
  add_scenario_opts(evaluate);
  auto* plot = app.add_subcommand("plot", "Render one scenario as SVG");
  add_scenario_opts(plot);

  auto* payoff = app.add_subcommand("payoff-study", "Average payoff table and its equilibrium");
  payoff->add_option("--models-dir", cfg.models_dir)->capture_default_str();
  payoff->add_option("--dt", cfg.dt)->check(CLI::PositiveNumber);

  auto* analyze = app.add_subcommand("analyze", "Statistical analyses");
  analyze->add_option("analysis", cfg.analysis, "chi-square | contingency | teams | confusion")
      ->required()
      ->check(CLI::IsMember({"chi-square", "contingency", "teams", "confusion"}));
  analyze->add_option("--table", cfg.table, "Contingency table JSON")->capture_default_str();
  analyze->add_option("--teams-xg", cfg.teams_xg, "External team figures CSV")
      ->capture_default_str();
  analyze->add_option("--models-dir", cfg.models_dir)->capture_default_str();
  analyze->add_option("--model", cfg.model)->check(CLI::IsMember({"off", "block"}));
  analyze->add_option("--threshold", cfg.threshold)->check(CLI::Range(0.0, 1.0));

  auto* serve = app.add_subcommand("serve", "Run the scenario HTTP service");
  serve->add_option("--port", cfg.port)->check(CLI::Range(0, 65535))->capture_default_str();
  serve->add_option("--host", cfg.host)->capture_default_str();
  serve->add_option("--models-dir", cfg.models_dir)->capture_default_str();
  serve->add_option("--fixtures-dir", cfg.fixtures_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(cfg);
    if (*fit) return cmd_fit_theory(cfg);
    if (*train) return cmd_train(cfg);
    if (*evaluate) return cmd_evaluate(cfg);
    if (*payoff) return cmd_payoff_study(cfg);
    if (*analyze) return cmd_analyze(cfg);
    if (*plot) return cmd_plot(cfg);
    if (*serve) return cmd_serve(cfg);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  std::cerr << app.help();
  return kExitUsage;
}
