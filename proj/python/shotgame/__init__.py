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

"""Python bindings for the shot-taking decision engine."""

import json as _json

from ._shotgame import (  # noqa: F401
    DataError,
    Evaluator,
    InvalidArgument,
    NumericalError,
    RequestError,
    TheoryParams,
    __version__,
    ang2goal,
    chi_square,
    compose_p_on,
    dist2goal,
    feasible_angle_span,
    in_feasible_zone,
    pearson,
    ppcf,
    shot_block_probability,
    solve_game,
)


def evaluate(evaluator, request):
    """Evaluate a scenario request given as a dict; returns the response dict."""
    return _json.loads(evaluator.evaluate_json(_json.dumps(request)))
