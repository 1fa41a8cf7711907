"""Figure rendering: radial-coordinate traces and training curves.

Conventions follow the simulator's outputs: target curves red, herder
curves black, the goal radius as a solid green horizontal line. Rendering
is deterministic for fixed inputs (Agg backend, fixed geometry).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .data import TrajectoryPoint, read_metrics, read_trajectory

TARGET_COLOR = "tab:red"
HERDER_COLOR = "black"
GOAL_COLOR = "green"


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: inputs, window, agent selection, and output path."""

    inputs: tuple[str, ...]
    output: str
    goal_radius: float = 1.5
    trial: int | None = None            # default: first trial in the data
    agents: tuple[str, ...] = ()        # "kind:id" filters; empty = all
    t_min: float | None = None
    t_max: float | None = None
    inset: tuple[float, float] | None = None
    two_panel: bool = False
    dpi: int = 130
    size: tuple[float, float] = (8.0, 4.5)


def _series(spec: FigureSpec) -> dict[tuple[str, str, int], list[TrajectoryPoint]]:
    """Per-agent time series, keyed (label prefix, kind, id)."""
    multi = len(spec.inputs) > 1
    out: dict[tuple[str, str, int], list[TrajectoryPoint]] = {}
    for path in spec.inputs:
        points = read_trajectory(path)
        trial = spec.trial if spec.trial is not None else points[0].trial
        prefix = path if multi else ""
        got_trial = False
        for p in points:
            if p.trial != trial:
                continue
            got_trial = True
            out.setdefault((prefix, p.agent_kind, p.agent_id), []).append(p)
        if not got_trial:
            raise ValueError(f"{path}: no rows for trial {trial}")
    return out


def _select_agents(series, agents: tuple[str, ...]):
    if not agents:
        return series
    wanted = set()
    for token in agents:
        kind, _, ident = token.partition(":")
        if kind not in ("target", "herder") or not ident.isdigit():
            raise ValueError(f"bad agent selector {token!r}; "
                             "expected e.g. target:0 or herder:1")
        wanted.add((kind, int(ident)))
    available = {(k, i) for (_, k, i) in series}
    unknown = wanted - available
    if unknown:
        raise ValueError(f"unknown agent ids {sorted(unknown)}; "
                         f"available: {sorted(available)}")
    return {key: pts for key, pts in series.items()
            if (key[1], key[2]) in wanted}


def _apply_window(series, t_min, t_max):
    all_t = [p.t for pts in series.values() for p in pts]
    lo, hi = min(all_t), max(all_t)
    if t_min is not None and (t_min < lo - 1e-9 or t_min > hi):
        raise ValueError(f"t_min {t_min} outside trajectory span [{lo}, {hi}]")
    if t_max is not None and (t_max > hi + 1e-9 or t_max < lo):
        raise ValueError(f"t_max {t_max} outside trajectory span [{lo}, {hi}]")
    if t_min is None and t_max is None:
        return series
    lo = lo if t_min is None else t_min
    hi = hi if t_max is None else t_max
    out = {key: [p for p in pts if lo <= p.t <= hi]
           for key, pts in series.items()}
    return {key: pts for key, pts in out.items() if pts}


def _draw(ax, series, goal_radius, kinds=("target", "herder")):
    for (prefix, kind, ident), pts in sorted(series.items()):
        if kind not in kinds:
            continue
        color = TARGET_COLOR if kind == "target" else HERDER_COLOR
        label = f"{kind} {ident}" + (f" ({prefix})" if prefix else "")
        ax.plot([p.t for p in pts], [p.radial for p in pts],
                color=color, linewidth=0.9, label=label)
    ax.axhline(goal_radius, color=GOAL_COLOR, linewidth=1.4)
    ax.set_ylabel("distance to goal center")
    ax.set_ylim(bottom=0.0)


def plot_radial(spec: FigureSpec) -> str:
    """Radial coordinate of the selected agents versus time.

    Single panel by default with an optional zoom inset over a sub-window;
    two stacked panels (herders above, targets below) when requested.
    Returns the output path.
    """
    series = _apply_window(_select_agents(_series(spec), spec.agents),
                           spec.t_min, spec.t_max)
    if not series:
        raise ValueError("nothing to plot after filtering")

    if spec.two_panel:
        fig, (ax_h, ax_t) = plt.subplots(
            2, 1, figsize=(spec.size[0], spec.size[1] * 1.5), sharex=True)
        _draw(ax_h, series, spec.goal_radius, kinds=("herder",))
        _draw(ax_t, series, spec.goal_radius, kinds=("target",))
        ax_h.set_title("(a) herders")
        ax_t.set_title("(b) targets")
        ax_t.set_xlabel("t [s]")
    else:
        fig, ax = plt.subplots(figsize=spec.size)
        _draw(ax, series, spec.goal_radius)
        ax.set_xlabel("t [s]")
        if len(series) <= 6:
            ax.legend(loc="upper right", fontsize="small")
        if spec.inset is not None:
            a, b = spec.inset
            zoom = _apply_window(series, a, b)
            axins = ax.inset_axes([0.52, 0.5, 0.44, 0.44])
            _draw(axins, zoom, spec.goal_radius)
            axins.set_ylabel("")
            axins.set_xlim(a, b)
            axins.tick_params(labelsize="x-small")

    fig.tight_layout()
    fig.savefig(spec.output, dpi=spec.dpi)
    plt.close(fig)
    return spec.output


def plot_training_curve(metrics_path: str, output: str, dpi: int = 130) -> str:
    """Containment fraction and cumulative reward against the trial index."""
    points = read_metrics(metrics_path)
    trials = [p.trial for p in points]
    marker = "o" if len(points) == 1 else None

    fig, ax = plt.subplots(figsize=(8.0, 4.0))
    ax.plot(trials, [p.containment_fraction for p in points],
            color="tab:blue", marker=marker, label="containment fraction")
    ax.set_xlabel("trial")
    ax.set_ylabel("containment fraction", color="tab:blue")
    ax.set_ylim(-0.02, 1.02)
    ax2 = ax.twinx()
    ax2.plot(trials, [p.cumulative_reward for p in points],
             color="tab:orange", marker=marker, label="cumulative reward")
    ax2.set_ylabel("cumulative reward", color="tab:orange")
    fig.tight_layout()
    fig.savefig(output, dpi=dpi)
    plt.close(fig)
    return output
