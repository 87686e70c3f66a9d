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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "shotgame/error.hpp"
#include "shotgame/optim.hpp"

using namespace shotgame;
using namespace shotgame::optim;

namespace {

ObjectiveSpec bowl(double cx = 3.0, double cy = -1.0) {
  return {2, [=](std::span<const double> x) {
            return (x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy);
          }};
}

ObjectiveSpec rosenbrock() {
  return {2, [](std::span<const double> x) {
            const double a = 1 - x[0], b = x[1] - x[0] * x[0];
            return a * a + 100 * b * b;
          }};
}

void check_trace(const OptimResult& r) {
  REQUIRE_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].best_f <= r.trace[i - 1].best_f);
  }
}

}  // namespace

TEST_SUITE("optim") {
  TEST_CASE("quadratic bowl") {
    const auto p = minimize_powell(bowl(), {0, 0});
    CHECK(p.x_star[0] == doctest::Approx(3).epsilon(1e-6));
    CHECK(std::abs(p.x_star[1] + 1) < 1e-6);
    CHECK(p.f_star == doctest::Approx(bowl().eval(p.x_star)));
    const auto nm = minimize_nelder_mead(bowl(), {0, 0});
    CHECK(std::abs(nm.x_star[0] - 3) < 1e-5);
    CHECK(std::abs(nm.x_star[1] + 1) < 1e-5);
    const auto cg = minimize_fd_cg(bowl(), {0, 0});
    CHECK(std::abs(cg.x_star[0] - 3) < 1e-6);
    CHECK(std::abs(cg.x_star[1] + 1) < 1e-6);
    CHECK(cg.iterations <= 3);
    for (const auto* r : {&p, &nm, &cg}) check_trace(*r);
  }

  TEST_CASE("rosenbrock") {
    const auto p = minimize_powell(rosenbrock(), {-1.2, 1});
    CHECK(std::abs(p.x_star[0] - 1) < 1e-3);
    CHECK(std::abs(p.x_star[1] - 1) < 1e-3);
    Options nm_opts;
    nm_opts.tol = 1e-10;
    nm_opts.max_iter = 5000;
    const auto nm = minimize_nelder_mead(rosenbrock(), {-1.2, 1}, nm_opts);
    CHECK(std::abs(nm.x_star[0] - 1) < 1e-3);
    CHECK(std::abs(nm.x_star[1] - 1) < 1e-3);
    CgOptions cg_opts;
    cg_opts.max_iter = 5000;
    const auto cg = minimize_fd_cg(rosenbrock(), {-1.2, 1}, cg_opts);
    CHECK(std::abs(cg.x_star[0] - 1) < 1e-2);
    CHECK(std::abs(cg.x_star[1] - 1) < 1e-2);
    for (const auto* r : {&p, &nm, &cg}) check_trace(*r);
  }

  TEST_CASE("constant objective") {
    const ObjectiveSpec flat{3, [](std::span<const double>) { return 4.0; }};
    const Vector x0{1, 2, 3};
    const auto r = minimize_powell(flat, x0);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.x_star == x0);
  }

  TEST_CASE("nelder-mead on |x| matches the hand simplex") {
    const ObjectiveSpec abs1{1, [](std::span<const double> x) { return std::abs(x[0]); }};
    const auto r = minimize_nelder_mead(abs1, {5.0});
    CHECK(std::abs(r.x_star[0]) < 1e-4);
    REQUIRE(r.trace.size() >= 4);
    CHECK(r.trace[0].best_f == doctest::Approx(5.0));
    CHECK(r.trace[1].best_f == doctest::Approx(4.5));
    CHECK(r.trace[2].best_f == doctest::Approx(3.5));
    CHECK(r.trace[3].best_f == doctest::Approx(1.5));
  }

  TEST_CASE("NaN objective is reported") {
    const ObjectiveSpec bad{1, [](std::span<const double>) {
                              return std::numeric_limits<double>::quiet_NaN();
                            }};
    for (Method m : {Method::kPowell, Method::kNelderMead, Method::kFdCg}) {
      CHECK_THROWS_AS(minimize(m, bad, {1.0}), NumericalError);
    }
  }

  TEST_CASE("finite-difference gradient on a quadratic") {
    const auto f = [](std::span<const double> x) {
      return 2 * x[0] * x[0] + x[0] * x[1] + 3 * x[1] * x[1];
    };
    const Vector x{1.5, -0.7};
    const Vector g = central_difference_gradient(f, x, 1e-6);
    const double g0 = 4 * x[0] + x[1], g1 = x[0] + 6 * x[1];
    CHECK(std::abs(g[0] - g0) / std::abs(g0) < 1e-6);
    CHECK(std::abs(g[1] - g1) / std::abs(g1) < 1e-6);
  }

  TEST_CASE("bounds reject points without calling eval") {
    int outside = 0;
    ObjectiveSpec spec{1, [&](std::span<const double> x) {
                         if (x[0] < 0 || x[0] > 2) ++outside;
                         return (x[0] - 5) * (x[0] - 5);
                       }};
    spec.bounds = std::vector<Bound>{{0.0, 2.0}};
    const auto r = minimize_powell(spec, {1.0});
    CHECK(outside == 0);
    CHECK(r.x_star[0] <= 2.0);
    CHECK(r.x_star[0] > 1.9);
  }

  TEST_CASE("determinism and translation equivariance") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
      const double cx = uniform(rng, -5, 5), cy = uniform(rng, -5, 5);
      for (Method m : {Method::kPowell, Method::kNelderMead, Method::kFdCg}) {
        const auto base = minimize(m, bowl(3, -1), {0.5, 0.5});
        const auto again = minimize(m, bowl(3, -1), {0.5, 0.5});
        CHECK(base.x_star == again.x_star);
        CHECK(base.n_evals == again.n_evals);
        const auto moved = minimize(m, bowl(3 + cx, -1 + cy), {0.5 + cx, 0.5 + cy});
        CHECK(moved.x_star[0] == doctest::Approx(base.x_star[0] + cx).epsilon(1e-5));
        CHECK(moved.x_star[1] == doctest::Approx(base.x_star[1] + cy).epsilon(1e-5));
      }
    }
  }

  TEST_CASE("method names") {
    CHECK(method_from_name("powell") == Method::kPowell);
    CHECK(method_from_name("nelder_mead") == Method::kNelderMead);
    CHECK(method_from_name("fd_cg") == Method::kFdCg);
    CHECK_THROWS_AS(method_from_name("bfgs"), InvalidArgument);
  }
}
