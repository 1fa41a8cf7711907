"""Readers for the ctql delimited text outputs.

The formats are documented in the ctql README: comma-separated, fixed
header, floats at nine significant digits. This package parses the files
directly and never imports the simulator.
"""

from __future__ import annotations

import csv
from typing import NamedTuple

TRAJECTORY_HEADER = ["t", "trial", "agent_kind", "agent_id", "x", "y",
                     "radial", "in_goal", "action_source", "reward"]
METRICS_HEADER = ["trial", "containment_fraction", "cumulative_reward",
                  "final_all_in_goal", "n_tutor", "n_qgreedy", "n_random",
                  "n_chase"]


class TrajectoryPoint(NamedTuple):
    t: float
    trial: int
    agent_kind: str
    agent_id: int
    radial: float


class MetricsPoint(NamedTuple):
    trial: int
    containment_fraction: float
    cumulative_reward: float


def read_trajectory(path: str) -> list[TrajectoryPoint]:
    points = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != TRAJECTORY_HEADER:
            raise ValueError(f"{path}: not a ctql trajectory file "
                             f"(header {reader.fieldnames})")
        for rec in reader:
            points.append(TrajectoryPoint(
                t=float(rec["t"]), trial=int(rec["trial"]),
                agent_kind=rec["agent_kind"], agent_id=int(rec["agent_id"]),
                radial=float(rec["radial"])))
    if not points:
        raise ValueError(f"{path}: empty trajectory")
    return points


def read_metrics(path: str) -> list[MetricsPoint]:
    points = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != METRICS_HEADER:
            raise ValueError(f"{path}: not a ctql metrics file "
                             f"(header {reader.fieldnames})")
        for rec in reader:
            points.append(MetricsPoint(
                trial=int(rec["trial"]),
                containment_fraction=float(rec["containment_fraction"]),
                cumulative_reward=float(rec["cumulative_reward"])))
    if not points:
        raise ValueError(f"{path}: empty metrics series")
    return points
