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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <string>

#include "shotgame/analysis.hpp"
#include "shotgame/block_theory.hpp"
#include "shotgame/error.hpp"
#include "shotgame/game.hpp"
#include "shotgame/geometry.hpp"
#include "shotgame/json_io.hpp"
#include "shotgame/metrics.hpp"
#include "shotgame/pipeline.hpp"
#include "shotgame/pitch_control.hpp"
#include "shotgame/scenario.hpp"

namespace py = pybind11;
using namespace shotgame;

namespace {

std::vector<PlayerSnapshot> snapshots(const std::vector<std::tuple<double, double, bool, bool>>& players) {
  std::vector<PlayerSnapshot> out;
  for (const auto& [x, y, teammate, keeper] : players) out.push_back({{x, y}, teammate, false, keeper});
  return out;
}

// Engine plus JSON in and out, mirroring the HTTP service.
class Evaluator {
 public:
  explicit Evaluator(const std::filesystem::path& models_dir) : engine_(load_engine(models_dir)) {}
  std::string evaluate(const std::string& request_json) const {
    return evaluate_scenario(engine_, parse_scenario_request(Json::parse(request_json))).dump();
  }

 private:
  MetricsEngine engine_;
};

}  // namespace

PYBIND11_MODULE(_shotgame, m) {
  m.doc() = "Shot-taking decision engine";
  m.attr("__version__") = SHOTGAME_VERSION;

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_IOError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<RequestError>(m, "RequestError", PyExc_ValueError);

  m.def("dist2goal", [](double x, double y) { return dist2goal({x, y}); }, py::arg("x"), py::arg("y"));
  m.def("ang2goal", [](double x, double y) { return ang2goal({x, y}); }, py::arg("x"), py::arg("y"));
  m.def("feasible_angle_span", [](double x, double y) { return feasible_angle_span({x, y}); },
        py::arg("x"), py::arg("y"));
  m.def("in_feasible_zone",
        [](double sx, double sy, double qx, double qy) { return feasible_zone_contains({sx, sy}, {qx, qy}); });

  py::class_<TheoryParams>(m, "TheoryParams")
      .def(py::init<>())
      .def(py::init([](double c1, double c2, double c3, double c4, double a) {
             TheoryParams p{c1, c2, c3, c4, a};
             p.validate();
             return p;
           }),
           py::arg("c1"), py::arg("c2"), py::arg("c3"), py::arg("c4"), py::arg("a"))
      .def_readwrite("c1", &TheoryParams::angle_scale)
      .def_readwrite("c2", &TheoryParams::sigma_slope)
      .def_readwrite("c3", &TheoryParams::output_scale)
      .def_readwrite("c4", &TheoryParams::sigma_intercept)
      .def_readwrite("a", &TheoryParams::lower_bound)
      .def_static("reference", &TheoryParams::reference)
      .def("to_list", &TheoryParams::to_vector);

  // players: list of (x, y, teammate, keeper)
  m.def(
      "shot_block_probability",
      [](double x, double y, const std::vector<std::tuple<double, double, bool, bool>>& players,
         const TheoryParams& p) { return shot_block_probability({x, y}, snapshots(players), p); },
      py::arg("x"), py::arg("y"), py::arg("players"), py::arg("params") = TheoryParams::reference());

  m.def("compose_p_on", &compose_p_on, py::arg("p_off"), py::arg("p_block"),
        py::arg("p_control") = 1.0);

  m.def("ppcf", [](double tx, double ty, const std::vector<std::tuple<double, double, bool>>& players,
                   double horizon) {
    std::vector<ControlPlayer> cp;
    for (const auto& [x, y, attacking] : players) cp.push_back({{x, y}, attacking});
    return ppcf_at({tx, ty}, cp, horizon, ControlParams{}).probability;
  });

  m.def(
      "chi_square",
      [](const std::vector<std::vector<double>>& counts) {
        const auto r = chi_square_independence(counts);
        return py::make_tuple(r.statistic, r.df, r.p_value);
      },
      py::arg("counts"));
  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });

  m.def(
      "solve_game",
      [](double a, double b, double c, double d) {
        const NashSolution s = solve_game(PayoffTable::from_rows(a, b, c, d));
        py::list pure;
        for (const auto& p : s.pure) {
          pure.append(py::make_tuple(std::string(strategy_name(p.shooter)),
                                     std::string(strategy_name(p.defender))));
        }
        py::object mixed = py::none();
        if (s.mixed) mixed = py::make_tuple(s.mixed->p_shoot, s.mixed->q_block, s.mixed->value);
        return py::make_tuple(pure, mixed);
      },
      "Payoffs for the shooter: (Shoot,Blocking), (Shoot,NotBlocking), (Pass,Blocking), "
      "(Pass,NotBlocking).");

  py::class_<Evaluator>(m, "Evaluator")
      .def(py::init<const std::filesystem::path&>(), py::arg("models_dir"))
      .def("evaluate_json", &Evaluator::evaluate, py::arg("request_json"));
}
