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

#ifndef SHOTGAME_OPTIM_HPP_
#define SHOTGAME_OPTIM_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shotgame::optim {

using Vector = std::vector<double>;
using Objective = std::function<double(std::span<const double>)>;

struct Bound {
  double lo;
  double hi;
};

// `eval` must be deterministic. Infeasible points may return +infinity; NaN
// is treated as an error. When `bounds` is set, points outside them are
// rejected with +infinity before `eval` is called.
struct ObjectiveSpec {
  std::size_t dimension = 0;
  Objective eval;
  std::optional<std::vector<Bound>> bounds;
};

struct TracePoint {
  int iteration;
  double best_f;
};

struct OptimResult {
  Vector x_star;
  double f_star = 0.0;
  int n_evals = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;  // best f after each iteration, 0 = start
};

struct Options {
  double tol = 1e-8;
  int max_iter = 1000;
};

// Powell's conjugate-direction method. Each direction is searched with a
// bracketing step followed by Brent's method. Stops when one sweep improves
// f by less than tol * (|f_old| + |f_new|) / 2.
OptimResult minimize_powell(const ObjectiveSpec& obj, const Vector& x0,
                            const Options& opts = {});

// Nelder-Mead with reflection 1, expansion 2, contraction 0.5, shrink 0.5.
// Converged once both the f-spread and the simplex extent are below tol.
OptimResult minimize_nelder_mead(const ObjectiveSpec& obj, const Vector& x0,
                                 const Options& opts = {});

struct CgOptions : Options {
  double fd_step = 1e-6;  // relative central-difference step
};

// Polak-Ribiere (PR+) nonlinear conjugate gradients on central-difference
// gradients, with a backtracking line search refined by quadratic
// interpolation.
OptimResult minimize_fd_cg(const ObjectiveSpec& obj, const Vector& x0,
                           const CgOptions& opts = {});

// Central differences with step `rel_step * max(1, |x_i|)`.
Vector central_difference_gradient(const Objective& f, std::span<const double> x,
                                   double rel_step);

enum class Method { kPowell, kNelderMead, kFdCg };

Method method_from_name(std::string_view name);
std::string_view method_name(Method m);

OptimResult minimize(Method method, const ObjectiveSpec& obj, const Vector& x0,
                     const Options& opts = {});

}  // namespace shotgame::optim

#endif  // SHOTGAME_OPTIM_HPP_
