# Copyright 2026 The shotgame Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import os
import pathlib

import pytest

import shotgame

SOURCE = pathlib.Path(os.environ.get("SHOTGAME_SOURCE_DIR", pathlib.Path(__file__).parents[2]))


def test_geometry():
    assert shotgame.dist2goal(120, 40) == pytest.approx(0.0)
    assert shotgame.dist2goal(90, 20) == pytest.approx(math.hypot(26.25, 17.0))
    assert shotgame.feasible_angle_span(108, 40) == pytest.approx(35.89, abs=0.01)
    assert shotgame.in_feasible_zone(100, 40, 110, 40)
    assert not shotgame.in_feasible_zone(100, 40, 90, 40)


def test_block_probability_bounds():
    p = shotgame.TheoryParams.reference()
    assert p.c1 == pytest.approx(36.9463)
    assert shotgame.shot_block_probability(100, 40, []) == 0.0
    value = shotgame.shot_block_probability(100, 40, [(110, 40, False, False)], p)
    assert 0.0 < value <= p.c3
    with pytest.raises(ValueError):
        shotgame.TheoryParams(30, 10, 0.5, 0.2, 1.0)


def test_game_and_statistics():
    pure, mixed = shotgame.solve_game(0.0866, 0.2508, 0.2456, 0.2481)
    assert pure == [("Pass", "Blocking")]
    assert mixed is None
    pure, mixed = shotgame.solve_game(1, -1, -1, 1)
    assert pure == []
    assert mixed == pytest.approx((0.5, 0.5, 0.0))
    stat, df, p = shotgame.chi_square([[427, 341, 275], [343, 286, 220], [273, 222, 187]])
    assert df == 4
    assert stat == pytest.approx(0.6163, abs=1e-3)
    assert p == pytest.approx(0.9612, abs=1e-3)
    assert shotgame.compose_p_on(0.32, 0.22, 0.59) == pytest.approx(0.2714)


def test_ppcf_conservation():
    probs = shotgame.ppcf(100, 40, [(98, 40, True), (103, 42, False)], 2.0)
    assert len(probs) == 2
    assert sum(probs) <= 1.0 + 1e-12
    assert all(v >= 0 for v in probs)


def test_evaluate_fixture():
    evaluator = shotgame.Evaluator(SOURCE / "data" / "models")
    fixture = json.loads((SOURCE / "data" / "fixtures" / "scenarios" / "italy-wales-pass-options.json").read_text())
    out = shotgame.evaluate(evaluator, fixture["request"])
    assert out["payoff_table"]["Shoot"]["Blocking"] == out["xsot"]
    assert len(out["breakdowns"]) == 7
    assert out == shotgame.evaluate(evaluator, fixture["request"])
    bad = dict(fixture["request"], shooter={"x": 130, "y": 40})
    with pytest.raises(ValueError, match="shooter.x"):
        shotgame.evaluate(evaluator, bad)
