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

#include "shotgame/analysis.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "shotgame/error.hpp"
#include "shotgame/json_io.hpp"

namespace shotgame {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Power series for P(s, x); converges quickly for x < s + 1.
double gamma_p_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
  }
  throw NumericalError("incomplete gamma series did not converge");
}

// Continued fraction for Q(s, x) (modified Lentz); used for x >= s + 1.
double gamma_q_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
    }
  }
  throw NumericalError("incomplete gamma continued fraction did not converge");
}

void check_gamma_args(double s, double x) {
  if (!(s > 0.0) || !(x >= 0.0) || !std::isfinite(s)) {
    throw InvalidArgument("incomplete gamma needs s > 0 and x >= 0");
  }
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::filesystem::path& file, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw DataError(file.string() + ":" + std::to_string(line) + ": bad number '" + field + "'");
  }
}

}  // namespace

double regularized_gamma_p(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) return gamma_p_series(s, x);
  return 1.0 - gamma_q_fraction(s, x);
}

double regularized_gamma_q(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_fraction(s, x);
}

double chi_square_sf(double statistic, int df) {
  if (df <= 0) throw InvalidArgument("chi-square needs df >= 1");
  if (statistic <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * statistic);
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& counts) {
  const std::size_t r = counts.size();
  if (r < 2) throw InvalidArgument("chi-square needs at least 2 rows");
  const std::size_t c = counts.front().size();
  if (c < 2) throw InvalidArgument("chi-square needs at least 2 columns");
  std::vector<double> rows(r, 0.0), cols(c, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    if (counts[i].size() != c) throw InvalidArgument("chi-square table is ragged");
    for (std::size_t j = 0; j < c; ++j) {
      const double v = counts[i][j];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument("chi-square counts must be finite and non-negative");
      }
      rows[i] += v;
      cols[j] += v;
      total += v;
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i] == 0.0) throw InvalidArgument("row " + std::to_string(i) + " has a zero marginal");
  }
  for (std::size_t j = 0; j < c; ++j) {
    if (cols[j] == 0.0) {
      throw InvalidArgument("column " + std::to_string(j) + " has a zero marginal");
    }
  }
  ChiSquareResult res;
  res.expected.assign(r, std::vector<double>(c));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double e = rows[i] * cols[j] / total;
      res.expected[i][j] = e;
      res.statistic += (counts[i][j] - e) * (counts[i][j] - e) / e;
    }
  }
  res.df = static_cast<int>((r - 1) * (c - 1));
  res.p_value = chi_square_sf(res.statistic, res.df);
  return res;
}

int contingency_index(Outcome o) {
  switch (o) {
    case Outcome::kOff:
      return 0;
    case Outcome::kOn:
      return 1;
    case Outcome::kBlock:
      return 2;
  }
  return 0;
}

std::vector<std::vector<double>> to_counts(const ContingencyTable& t) {
  std::vector<std::vector<double>> out(3, std::vector<double>(3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i][j] = static_cast<double>(t[i][j]);
  }
  return out;
}

ContingencyTable build_contingency(std::span<const ShotEvent> events, bool cross_match) {
  std::vector<const ShotEvent*> ordered;
  ordered.reserve(events.size());
  for (const auto& e : events) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(), [](const ShotEvent* a, const ShotEvent* b) {
    if (a->match_id != b->match_id) return a->match_id < b->match_id;
    return a->index < b->index;
  });
  ContingencyTable t{};
  for (std::size_t k = 1; k < ordered.size(); ++k) {
    const ShotEvent& prev = *ordered[k - 1];
    const ShotEvent& next = *ordered[k];
    if (!cross_match && prev.match_id != next.match_id) continue;
    ++t[contingency_index(prev.outcome)][contingency_index(next.outcome)];
  }
  return t;
}

ContingencyTable load_contingency(const std::filesystem::path& file) {
  const Json j = read_json_file(file);
  require_version(j, 1, file.string());
  ContingencyTable t{};
  try {
    const auto& rows = j.at("counts");
    if (rows.size() != 3) throw DataError(file.string() + ": counts must be 3x3");
    for (int i = 0; i < 3; ++i) {
      if (rows[i].size() != 3) throw DataError(file.string() + ": counts must be 3x3");
      for (int k = 0; k < 3; ++k) {
        t[i][k] = rows[i][k].get<long>();
        if (t[i][k] < 0) throw DataError(file.string() + ": negative count");
      }
    }
  } catch (const Json::exception& e) {
    throw DataError("malformed contingency file " + file.string() + ": " + e.what());
  }
  return t;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("pearson: inputs differ in length");
  if (xs.size() < 2) throw InvalidArgument("pearson: need at least 2 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

long ConfusionMatrix::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

ConfusionMatrix confusion_matrix(std::span<const double> probs, std::span<const int> labels,
                                 double threshold) {
  if (probs.size() != labels.size()) {
    throw InvalidArgument("confusion_matrix: probs and labels differ in length");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const int actual = labels[i] ? 1 : 0;
    const int predicted = probs[i] >= threshold ? 1 : 0;
    ++m.counts[actual][predicted];
  }
  for (int a = 0; a < 2; ++a) {
    const long row = m.counts[a][0] + m.counts[a][1];
    for (int p = 0; p < 2; ++p) {
      m.percent[a][p] = row == 0 ? 0.0 : 100.0 * static_cast<double>(m.counts[a][p]) / row;
    }
  }
  return m;
}

std::vector<TeamXg> read_teams_xg(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw DataError("cannot open " + csv.string());
  std::vector<TeamXg> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    if (line_no == 1) {
      if (fields != std::vector<std::string>{"team", "placement", "avg_goal", "xg"}) {
        throw DataError(csv.string() + ": expected header team,placement,avg_goal,xg");
      }
      continue;
    }
    if (fields.size() != 4) {
      throw DataError(csv.string() + ":" + std::to_string(line_no) + ": expected 4 fields");
    }
    out.push_back({fields[0], fields[1], parse_double(fields[2], csv, line_no),
                   parse_double(fields[3], csv, line_no)});
  }
  return out;
}

std::vector<ShotMetrics> score_shots(std::span<const ShotEvent> events, const FrameMap& frames,
                                     const MetricsEngine& engine, unsigned threads) {
  std::vector<ShotMetrics> out(events.size());
  std::vector<std::exception_ptr> errors(events.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < events.size(); i = next++) {
      try {
        const ShotEvent& e = events[i];
        const auto it = frames.find(e.event_id);
        const Scenario s = scenario_from_event(e, it == frames.end() ? nullptr : &it->second);
        out[i] = {e.event_id, e.team_name, e.match_id, engine.xsot(s, false).value,
                  engine.xosot(s, false).value};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, events.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<CorrelationEntry> team_correlations(std::span<const TeamAggregate> teams) {
  std::vector<double> goal, xg, xsot, xosot, maxp;
  for (const auto& t : teams) {
    if (!t.avg_goal || !t.xg) continue;
    goal.push_back(*t.avg_goal);
    xg.push_back(*t.xg);
    xsot.push_back(t.xsot);
    xosot.push_back(t.xosot);
    maxp.push_back(t.max_prob);
  }
  auto corr = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::optional<double> r;
    try {
      r = pearson(a, b);
    } catch (const InvalidArgument&) {
    }
    return r;
  };
  return {{"Avg Goal", "xG", corr(goal, xg)},
          {"Avg Goal", "xSOT", corr(goal, xsot)},
          {"xG", "xSOT", corr(xg, xsot)},
          {"xG", "xOSOT", corr(xg, xosot)},
          {"xG", "max_prob", corr(xg, maxp)}};
}

TeamStudy team_study(std::span<const ShotMetrics> shots, std::span<const TeamXg> external) {
  struct Acc {
    std::set<std::int64_t> matches;
    double xsot = 0.0, xosot = 0.0, max_prob = 0.0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& s : shots) {
    Acc& a = acc[s.team];
    a.matches.insert(s.match_id);
    a.xsot += s.xsot;
    a.xosot += s.xosot;
    a.max_prob += s.max_prob();
  }
  std::map<std::string, const TeamXg*> ext;
  for (const auto& t : external) ext[t.team] = &t;

  TeamStudy study;
  for (const auto& [team, a] : acc) {
    TeamAggregate agg;
    agg.team = team;
    agg.matches = static_cast<int>(a.matches.size());
    const double m = static_cast<double>(agg.matches);
    agg.xsot = a.xsot / m;
    agg.xosot = a.xosot / m;
    agg.max_prob = a.max_prob / m;
    if (const auto it = ext.find(team); it != ext.end()) {
      agg.avg_goal = it->second->avg_goal;
      agg.xg = it->second->xg;
    } else {
      study.missing.push_back(team);
    }
    study.teams.push_back(std::move(agg));
  }
  study.correlations = team_correlations(study.teams);
  return study;
}

}  // namespace shotgame
