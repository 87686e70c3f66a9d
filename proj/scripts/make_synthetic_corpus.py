#!/usr/bin/env python3
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

"""Writes a small synthetic corpus in StatsBomb open-data layout.

Block outcomes follow the angular block model with fixed generator
parameters, off-target outcomes become likelier with distance. Output is
fully determined by --seed.
"""

import argparse
import json
import math
import pathlib
import uuid

import numpy as np

XS, YS = 105.0 / 120.0, 68.0 / 80.0
LEFT_POST, RIGHT_POST = (120.0, 36.0), (120.0, 44.0)
BOX_LEFT, BOX_RIGHT = (120.0, 18.0), (120.0, 62.0)

GEN = dict(c1=20.0, c2=0.05, c3=0.9, c4=0.3, a=-2.5)

TEAMS = [
    (771, "France"), (779, "Argentina"), (781, "Brazil"), (768, "England"),
    (772, "Spain"), (780, "Portugal"), (785, "Croatia"), (788, "Morocco"),
]
ROLES = [
    "Center Forward", "Left Wing", "Right Wing", "Center Attacking Midfield",
    "Left Center Midfield", "Right Center Midfield", "Center Back",
    "Left Center Forward", "Right Center Forward", "Left Back", "Right Back",
]
ON_NAMES = ["Goal", "Saved"]
OFF_NAMES = ["Off T", "Wayward", "Post", "Saved Off Target"]


def delta(a, b):
    return ((b[0] - a[0]) * XS, (b[1] - a[1]) * YS)


def span_deg(s):
    d1 = math.hypot(*delta(s, LEFT_POST))
    d2 = math.hypot(*delta(s, RIGHT_POST))
    w = math.hypot(*delta(LEFT_POST, RIGHT_POST))
    c = max(-1.0, min(1.0, (d1 * d1 + d2 * d2 - w * w) / (2 * d1 * d2)))
    return math.degrees(math.acos(c))


def orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def in_zone(s, q):
    d = [orient(s, BOX_LEFT, q), orient(BOX_LEFT, BOX_RIGHT, q), orient(BOX_RIGHT, s, q)]
    return not (any(v < 0 for v in d) and any(v > 0 for v in d))


def angle_dist(s, q):
    v = delta(s, q)
    left, right = delta(s, LEFT_POST), delta(s, RIGHT_POST)
    cross = lambda a, b: a[0] * b[1] - a[1] * b[0]
    sense = 1.0 if cross(left, right) >= 0 else -1.0
    theta = math.atan2(sense * cross(left, v), left[0] * v[0] + left[1] * v[1])
    return math.degrees(theta), math.hypot(*v)


def phi(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)


def Phi(x):
    return 0.5 * (1 + math.erf(x / math.sqrt(2)))


def theory(s, defenders, p):
    if not defenders:
        return 0.0
    n = span_deg(s)
    terms = []
    for q in sorted((angle_dist(s, q) for q in defenders), key=lambda t: (t[1], t[0])):
        sigma = p["c4"] + q[1] * p["c2"]
        terms.append((q[0], sigma, 1.0 / (sigma * (Phi(-p["a"] / sigma) - Phi(p["a"] / sigma)))))

    def chain(theta):
        survive, blocked = 1.0, 0.0
        for td, sigma, norm in terms:
            x = (theta - td) / p["c1"]
            q = min(1.0, norm * phi(x / sigma)) if p["a"] < x < -p["a"] else 0.0
            blocked += survive * q
            survive *= 1 - q
        return blocked

    grid = [float(i) for i in range(int(math.floor(n)) + 1)]
    if grid[-1] < n:
        grid.append(n)
    area = sum(0.5 * (chain(a) + chain(b)) * (b - a) for a, b in zip(grid, grid[1:]))
    return p["c3"] * area / n


def point_in_zone(rng, s):
    # Uniform in the triangle, pulled towards the shooter.
    while True:
        u, v = rng.random(2)
        if u + v > 1:
            u, v = 1 - u, 1 - v
        u, v = 0.6 * u, 0.6 * v
        q = (s[0] + u * (BOX_LEFT[0] - s[0]) + v * (BOX_RIGHT[0] - s[0]),
             s[1] + u * (BOX_LEFT[1] - s[1]) + v * (BOX_RIGHT[1] - s[1]))
        if q != s and q[0] < 120:
            return (round(q[0], 1), round(q[1], 1))


def point_near(rng, s, spread, lo_x=60.0):
    x = float(np.clip(s[0] + rng.normal(0, spread), lo_x, 119.5))
    y = float(np.clip(s[1] + rng.normal(0, spread * 1.3), 0.5, 79.5))
    return (round(x, 1), round(y, 1))


def make_uuid(rng):
    return str(uuid.UUID(bytes=rng.bytes(16), version=4))


def shot_event(rng, idx, team, role, loc, outcome, period=1):
    return {
        "id": make_uuid(rng), "index": idx, "period": period,
        "type": {"id": 16, "name": "Shot"},
        "team": {"id": team[0], "name": team[1]},
        "position": {"name": role},
        "location": [loc[0], loc[1]],
        "shot": {"outcome": {"name": outcome}},
    }


def make_frame(rng, s):
    players = [{"location": [s[0], s[1]], "teammate": True, "actor": True, "keeper": False}]
    n_zone = int(rng.choice([0, 1, 1, 2, 2, 3]))
    defenders = [point_in_zone(rng, s) for _ in range(n_zone)]
    for _ in range(int(rng.integers(2, 6))):
        q = point_near(rng, s, 9.0)
        if not in_zone(s, q) and q != s:
            defenders.append(q)
    for q in defenders:
        players.append({"location": list(q), "teammate": False, "actor": False, "keeper": False})
    keeper = (round(float(119 - rng.random()), 1), round(float(40 + rng.normal(0, 1.5)), 1))
    players.append({"location": list(keeper), "teammate": False, "actor": False, "keeper": True})
    for _ in range(int(rng.integers(1, 5))):
        q = point_near(rng, s, 11.0)
        if q != s:
            players.append({"location": list(q), "teammate": True, "actor": False, "keeper": False})
    return players, [q for q in defenders if in_zone(s, q)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/fixtures/corpus")
    ap.add_argument("--shots", type=int, default=200)
    ap.add_argument("--matches", type=int, default=12)
    ap.add_argument("--seed", type=int, default=20260101)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    out = pathlib.Path(args.out)
    (out / "events").mkdir(parents=True, exist_ok=True)
    (out / "three-sixty").mkdir(parents=True, exist_ok=True)

    per_match = [[] for _ in range(args.matches)]
    for k in range(args.shots):
        per_match[k % args.matches].append(k)

    counts = {"On": 0, "Off": 0, "Block": 0}
    for m in range(args.matches):
        match_id = 3900000 + m
        home, away = TEAMS[m % len(TEAMS)], TEAMS[(m * 3 + 1) % len(TEAMS)]
        if home == away:
            away = TEAMS[(m + 1) % len(TEAMS)]
        events, frames = [], []
        idx = 10
        for k in per_match[m]:
            idx += int(rng.integers(5, 60))
            team = home if rng.random() < 0.5 else away
            s = (round(float(rng.uniform(88, 116)), 1),
                 round(float(np.clip(rng.normal(40, 9), 4, 76)), 1))
            role = ROLES[int(rng.integers(len(ROLES)))]
            players, zone = make_frame(rng, s)
            p_block = 0.03 + 0.85 * theory(s, zone, GEN)
            dist = math.hypot(*delta(s, (120.0, 40.0)))
            p_off = 0.2 + 0.55 / (1 + math.exp(-(dist - 18.0) / 5.0))
            if rng.random() < p_block:
                grouped, raw = "Block", "Blocked"
            elif rng.random() < p_off:
                grouped, raw = "Off", OFF_NAMES[int(rng.integers(len(OFF_NAMES)))]
            else:
                grouped, raw = "On", ON_NAMES[int(rng.integers(len(ON_NAMES)))]
            counts[grouped] += 1
            ev = shot_event(rng, idx, team, role, s, raw)
            events.append(ev)
            # A few shots have no 360 coverage.
            if k % 37 != 5:
                frames.append({"event_uuid": ev["id"], "visible_area": [], "freeze_frame": players})
            # Non-shot filler so the loader's type filter is exercised.
            events.append({"id": make_uuid(rng), "index": idx + 1, "period": 1,
                           "type": {"id": 30, "name": "Pass"},
                           "team": {"id": team[0], "name": team[1]}, "location": [60.0, 40.0]})
        if m == 0:
            events.append(shot_event(rng, idx + 5, home, "Center Forward", (110.0, 38.0),
                                     "Saved to Post"))
        if m == 1:
            for j in range(3):
                events.append(shot_event(rng, idx + 10 + j, away, "Center Forward",
                                         (108.0, 40.0), ["Goal", "Saved", "Off T"][j], period=5))
        with open(out / "events" / f"{match_id}.json", "w") as f:
            json.dump(events, f, indent=1)
            f.write("\n")
        with open(out / "three-sixty" / f"{match_id}.json", "w") as f:
            json.dump(frames, f, indent=1)
            f.write("\n")
    print(json.dumps(counts))


if __name__ == "__main__":
    main()
