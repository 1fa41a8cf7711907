"""Delimited text outputs: trajectories, per-trial metrics, aggregates.

All files are comma-separated with a fixed header row and floats at nine
significant digits. Writers go through a temp-file-and-rename so a failed
write never leaves a partial file behind.
"""

from __future__ import annotations

import csv
import os
import tempfile
from contextlib import contextmanager
from typing import Iterable, NamedTuple


def fmt_float(x: float) -> str:
    return format(x, ".9g")


@contextmanager
def atomic_write(path: str):
    """Yield a text handle for `path`; the file appears only on clean exit."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            yield handle
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


class TrajectoryRow(NamedTuple):
    """One agent at one recorded control step."""

    t: float
    trial: int
    agent_kind: str          # "target" | "herder"
    agent_id: int
    x: float
    y: float
    radial: float            # distance to the goal center
    in_goal: int             # 0/1
    action_source: str       # Tutor | QGreedy | Random | Chase | None
    reward: float | None     # empty for targets and chase steps


class TrialMetrics(NamedTuple):
    """Per-training-trial summary row."""

    trial: int
    containment_fraction: float
    cumulative_reward: float
    final_all_in_goal: int   # 0/1
    n_tutor: int
    n_qgreedy: int
    n_random: int
    n_chase: int


class EvalAggregate(NamedTuple):
    """Aggregate over a batch of evaluation episodes."""

    mode: str
    eval_trials: int
    success_rate: float
    containment_mean: float
    containment_min: float
    containment_std: float


class CompareRow(NamedTuple):
    """One policy mode's line in the comparison report."""

    mode: str
    train_trials: int
    success_rate: float
    containment_mean: float
    containment_min: float
    containment_std: float


TRAJECTORY_HEADER = list(TrajectoryRow._fields)
METRICS_HEADER = list(TrialMetrics._fields)
AGGREGATE_HEADER = list(EvalAggregate._fields)
COMPARE_HEADER = list(CompareRow._fields)


def _writer(handle):
    return csv.writer(handle, lineterminator="\n")


def write_trajectory(path: str, rows: Iterable[TrajectoryRow]) -> None:
    with atomic_write(path) as handle:
        out = _writer(handle)
        out.writerow(TRAJECTORY_HEADER)
        for r in rows:
            out.writerow([
                fmt_float(r.t), r.trial, r.agent_kind, r.agent_id,
                fmt_float(r.x), fmt_float(r.y), fmt_float(r.radial),
                r.in_goal, r.action_source,
                "" if r.reward is None else fmt_float(r.reward),
            ])


def read_trajectory(path: str) -> list[TrajectoryRow]:
    rows = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != TRAJECTORY_HEADER:
            raise ValueError(f"{path}: unexpected trajectory header "
                             f"{reader.fieldnames}")
        for rec in reader:
            rows.append(TrajectoryRow(
                t=float(rec["t"]), trial=int(rec["trial"]),
                agent_kind=rec["agent_kind"], agent_id=int(rec["agent_id"]),
                x=float(rec["x"]), y=float(rec["y"]),
                radial=float(rec["radial"]), in_goal=int(rec["in_goal"]),
                action_source=rec["action_source"],
                reward=None if rec["reward"] == "" else float(rec["reward"]),
            ))
    return rows


def write_metrics(path: str, series: Iterable[TrialMetrics]) -> None:
    with atomic_write(path) as handle:
        out = _writer(handle)
        out.writerow(METRICS_HEADER)
        for m in series:
            out.writerow([
                m.trial, fmt_float(m.containment_fraction),
                fmt_float(m.cumulative_reward), m.final_all_in_goal,
                m.n_tutor, m.n_qgreedy, m.n_random, m.n_chase,
            ])


def read_metrics(path: str) -> list[TrialMetrics]:
    series = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != METRICS_HEADER:
            raise ValueError(f"{path}: unexpected metrics header "
                             f"{reader.fieldnames}")
        for rec in reader:
            series.append(TrialMetrics(
                trial=int(rec["trial"]),
                containment_fraction=float(rec["containment_fraction"]),
                cumulative_reward=float(rec["cumulative_reward"]),
                final_all_in_goal=int(rec["final_all_in_goal"]),
                n_tutor=int(rec["n_tutor"]), n_qgreedy=int(rec["n_qgreedy"]),
                n_random=int(rec["n_random"]), n_chase=int(rec["n_chase"]),
            ))
    return series


def _write_stat_rows(path: str, header: list[str], rows, int_fields) -> None:
    with atomic_write(path) as handle:
        out = _writer(handle)
        out.writerow(header)
        for row in rows:
            out.writerow([
                val if name in int_fields or isinstance(val, str)
                else fmt_float(val)
                for name, val in zip(header, row)
            ])


def write_aggregate(path: str, agg: EvalAggregate) -> None:
    _write_stat_rows(path, AGGREGATE_HEADER, [agg], {"eval_trials"})


def read_aggregate(path: str) -> EvalAggregate:
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != AGGREGATE_HEADER:
            raise ValueError(f"{path}: unexpected aggregate header "
                             f"{reader.fieldnames}")
        rec = next(iter(reader))
    return EvalAggregate(
        mode=rec["mode"], eval_trials=int(rec["eval_trials"]),
        success_rate=float(rec["success_rate"]),
        containment_mean=float(rec["containment_mean"]),
        containment_min=float(rec["containment_min"]),
        containment_std=float(rec["containment_std"]),
    )


def write_comparison(path: str, rows: Iterable[CompareRow]) -> None:
    _write_stat_rows(path, COMPARE_HEADER, rows, {"train_trials"})


def read_comparison(path: str) -> list[CompareRow]:
    rows = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != COMPARE_HEADER:
            raise ValueError(f"{path}: unexpected comparison header "
                             f"{reader.fieldnames}")
        for rec in reader:
            rows.append(CompareRow(
                mode=rec["mode"], train_trials=int(rec["train_trials"]),
                success_rate=float(rec["success_rate"]),
                containment_mean=float(rec["containment_mean"]),
                containment_min=float(rec["containment_min"]),
                containment_std=float(rec["containment_std"]),
            ))
    return rows
