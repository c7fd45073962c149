#!/usr/bin/env python3
# Copyright 2026 The nodsearch Authors
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
"""Regenerates corpus/maps and corpus/seeds.

Lane centers sit on planner lattice cell centers: every center coordinate is
0.25 m past a multiple of 0.5 m measured from the map's bounding-box minimum.
Route lanes also sit at least 0.75 m inside a 2 m grid row, so that a
half-meter swerve does not change the covered cells.
"""

import json
import math
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "corpus"
W = 3.5


def lane(lane_id, pts, width=W, successors=(), left=None, right=None):
    return {
        "id": lane_id,
        "centerline": [{"x": float(x), "y": float(y)} for x, y in pts],
        "width_m": width,
        "successors": list(successors),
        "left_neighbor": left,
        "right_neighbor": right,
    }


def arc(cx, cy, r, a0, a1, n=12):
    return [(cx + r * math.cos(a0 + (a1 - a0) * i / n), cy + r * math.sin(a0 + (a1 - a0) * i / n)) for i in range(n + 1)]


def static(pid, x, y, heading=0.0, length=0.6, width=0.6):
    return {
        "id": pid,
        "kind": "static_obstacle",
        "footprint": {"length_m": length, "width_m": width},
        "origin": "seed",
        "trajectory": [{"t_s": 0.0, "x": x, "y": y, "heading_rad": heading, "v_mps": 0.0, "a_mps2": 0.0}],
    }


def npc(pid, x, y, heading, speed, duration, step=1.0):
    traj = []
    n = int(round(duration / step))
    for i in range(n + 1):
        t = i * step
        traj.append({
            "t_s": t,
            "x": x + speed * t * math.cos(heading),
            "y": y + speed * t * math.sin(heading),
            "heading_rad": heading,
            "v_mps": speed,
            "a_mps2": 0.0,
        })
    return {
        "id": pid,
        "kind": "npc_vehicle",
        "footprint": {"length_m": 4.5, "width_m": 2.0},
        "origin": "seed",
        "trajectory": traj,
    }


def scenario(sid, map_id, start, dest, participants, time_limit=30.0):
    return {
        "id": sid,
        "map_id": map_id,
        "task": {
            "start": {"x": start[0], "y": start[1], "heading_rad": start[2]},
            "destination": {"x": dest[0], "y": dest[1]},
            "goal_radius_m": 2.0,
            "time_limit_s": time_limit,
        },
        "participants": participants,
    }


def intersection_map():
    # Two-way crossroads; east/west lanes at y = -+1.75, north/south at x = +-1.75.
    e, r = 39.25, 6.25
    return {
        "id": "crossroads",
        "lanes": [
            lane("eb", [(-e, -1.75), (e, -1.75)]),
            lane("wb", [(e, 1.75), (-e, 1.75)]),
            lane("nb", [(1.75, -e), (1.75, e)]),
            lane("sb", [(-1.75, e), (-1.75, -e)]),
            # Right turn eastbound -> southbound.
            lane("eb_sb", arc(-1.75 - r, -1.75 - r, r, math.pi / 2, 0.0)),
            # Left turn eastbound -> northbound.
            lane("eb_nb", arc(1.75 - 9.75, -1.75 + 9.75, 9.75, -math.pi / 2, 0.0)),
        ],
    }


def lane_follow_map():
    # One-way two-lane road with a paved shoulder on the right.
    return {
        "id": "shoulder_road",
        "lanes": [
            lane("r0", [(0.0, 1.75), (70.0, 1.75)], left="r1", right="sh"),
            lane("r1", [(0.0, 5.25), (70.0, 5.25)], right="r0"),
            lane("sh", [(0.0, -1.75), (70.0, -1.75)], left="r0"),
        ],
    }


def u_turn_map():
    # Divided road; the only way back is the turnaround loop at x = 40.
    r = 6.25
    return {
        "id": "turnaround",
        "lanes": [
            lane("east", [(0.0, 1.75), (40.0, 1.75)], successors=["loop"], right="sh"),
            lane("sh", [(0.0, -1.5), (40.0, -1.5)], width=3.0, left="east"),
            lane("loop", arc(40.0, 8.0, r, -math.pi / 2, math.pi / 2, 16), successors=["west"]),
            lane("west", [(40.0, 14.25), (0.0, 14.25)]),
        ],
    }


def driveway_map():
    r = 6.25
    return {
        "id": "driveway",
        "lanes": [
            lane("eb", [(-39.5, -1.75), (39.5, -1.75)]),
            lane("wb", [(39.5, 1.75), (-39.5, 1.75)]),
            lane("dw", [(0.0, -15.25), (0.0, -4.0)], successors=["exit"]),
            lane("exit", arc(r, -8.0, r, math.pi, math.pi / 2), successors=["eb"]),
        ],
    }


def main():
    maps = {
        "crossroads": intersection_map(),
        "shoulder_road": lane_follow_map(),
        "turnaround": u_turn_map(),
        "driveway": driveway_map(),
    }
    seeds = {
        "S1_left_turn": scenario(
            "S1_left_turn", "crossroads", (-30.0, -1.75, 0.0), (1.75, 30.0),
            [npc("oncoming", 12.0, 1.75, math.pi, 6.0, 8.0), static("cone_ne", 3.0, 34.0)]),
        "S2_right_turn": scenario(
            "S2_right_turn", "crossroads", (-30.0, -1.75, 0.0), (-1.75, -30.0),
            [npc("crossing", 1.75, 20.0, math.pi / 2, 6.0, 5.0), static("cone_sw", -3.0, -36.0)]),
        "S3_lane_follow": scenario(
            "S3_lane_follow", "shoulder_road", (5.0, 1.75, 0.0), (62.0, 1.75),
            [static("cone_a", 20.0, -2.0), static("cone_b", 35.0, -2.0), static("cone_c", 50.0, -2.0)]),
        "S4_u_turn": scenario(
            "S4_u_turn", "turnaround", (5.0, 1.75, 0.0), (5.0, 14.25),
            [static("cone_w", 2.0, 15.7)]),
        "S5_crossing": scenario(
            "S5_crossing", "crossroads", (1.75, -30.0, math.pi / 2), (1.75, 30.0),
            [npc("cross_traffic", 4.0, -1.75, 0.0, 7.0, 5.0), static("cone_n", 3.0, 36.0)]),
        "S6_driveway_exit": scenario(
            "S6_driveway_exit", "driveway", (0.0, -11.0, math.pi / 2), (30.0, -1.75),
            [npc("passing", -10.0, 1.75, math.pi, 6.0, 5.0), static("mailbox", -1.4, -15.0)]),
    }
    (ROOT / "maps").mkdir(parents=True, exist_ok=True)
    (ROOT / "seeds").mkdir(parents=True, exist_ok=True)
    for name, m in maps.items():
        (ROOT / "maps" / f"{name}.json").write_text(json.dumps(m, indent=2) + "\n")
    for name, s in seeds.items():
        (ROOT / "seeds" / f"{name}.json").write_text(json.dumps(s, indent=2) + "\n")


if __name__ == "__main__":
    main()
