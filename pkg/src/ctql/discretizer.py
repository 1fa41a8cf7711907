"""State-space binning and the finite herder action set.

A herder's observation is reduced to three indices: the distance to its
target, the herder's bearing around the target measured from the
goal-to-target ray (which makes the encoding rotation-invariant about the
goal), and the target's speed.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .geometry import TWO_PI, Vec2, from_polar

ZERO_VEC = Vec2(0.0, 0.0)


class DiscreteState(NamedTuple):
    dist_bin: int
    angle_bin: int
    speed_bin: int


@dataclass(frozen=True)
class StateGrid:
    """Bin edges for distance and speed plus the angular sector count.

    Each edge list is open-ended: values at or above the last edge land in
    an overflow bin, so the bin count is len(edges) + 1.
    """

    dist_edges: tuple[float, ...] = (0.5, 1.0, 1.5, 2.0)
    angle_bins: int = 8
    speed_edges: tuple[float, ...] = (0.2, 0.6)

    @property
    def n_dist_bins(self) -> int:
        return len(self.dist_edges) + 1

    @property
    def n_speed_bins(self) -> int:
        return len(self.speed_edges) + 1

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.n_dist_bins, self.angle_bins, self.n_speed_bins)

    @property
    def n_states(self) -> int:
        return self.n_dist_bins * self.angle_bins * self.n_speed_bins

    def validate(self, prefix: str = "grid") -> list[str]:
        errs = []
        for name, minimum in (("dist_edges", 1), ("speed_edges", 1)):
            edges = getattr(self, name)
            if len(edges) < minimum:
                errs.append(f"{prefix}.{name}: got {list(edges)}, requires at "
                            f"least {minimum + 1} bins ({minimum}+ edges)")
            if any(b <= a for a, b in zip(edges, edges[1:])):
                errs.append(f"{prefix}.{name}: got {list(edges)}, requires "
                            "strictly increasing edges")
        if self.angle_bins < 4:
            errs.append(f"{prefix}.angle_bins: got {self.angle_bins}, "
                        "requires angle_bins >= 4")
        return errs


def flatten_state(s: DiscreteState, dims: tuple[int, int, int]) -> int:
    """Row-major index of a discrete state for dense table storage."""
    return (s.dist_bin * dims[1] + s.angle_bin) * dims[2] + s.speed_bin


def bearing_about_goal_ray(x_t: Vec2, x_h: Vec2, x_g: Vec2) -> float:
    """Herder direction around the target, measured from the goal-to-target
    ray, in [0, 2*pi). Degenerate geometries (herder on top of the target,
    or target exactly at the goal center) fall back to a zero reference
    angle, so the value is total."""
    rel = x_h - x_t
    if rel.x == 0.0 and rel.y == 0.0:
        return 0.0
    ref = x_t - x_g
    ref_angle = 0.0 if (ref.x == 0.0 and ref.y == 0.0) else ref.angle()
    return (rel.angle() - ref_angle) % TWO_PI


def encode_state(x_t: Vec2, x_h: Vec2, target_speed: float, grid: StateGrid,
                 x_g: Vec2 = ZERO_VEC) -> DiscreteState:
    """Bin a continuous herder observation.

    Angular sectors are centered on the goal-to-target ray: sector 0 covers
    bearings within half a sector width of 0, so the pushing position
    (herder directly beyond the target) sits in the middle of its bin and
    mirror-image geometries land in mirror-image bins.
    """
    rel = x_h - x_t
    dist_bin = bisect_right(grid.dist_edges, rel.norm())
    bearing = bearing_about_goal_ray(x_t, x_h, x_g)
    half_sector = math.pi / grid.angle_bins
    shifted = (bearing + half_sector) % TWO_PI
    angle_bin = int(shifted * grid.angle_bins / TWO_PI)
    if angle_bin >= grid.angle_bins:   # shifted bearing rounded up to 2*pi
        angle_bin = 0
    speed_bin = bisect_right(grid.speed_edges, target_speed)
    return DiscreteState(dist_bin, angle_bin, speed_bin)


@dataclass(frozen=True)
class ActionSet:
    """Finite menu of herder velocity commands; index 0 is always 'stay'."""

    actions: tuple[Vec2, ...]

    def __len__(self) -> int:
        return len(self.actions)

    def __getitem__(self, idx: int) -> Vec2:
        return self.actions[idx]

    def __iter__(self):
        return iter(self.actions)


def build_action_set(n_dirs: int, speeds: Sequence[float],
                     v_h_max: float) -> ActionSet:
    """Zero action plus n_dirs equally spaced headings at each speed."""
    if n_dirs < 4:
        raise ValueError(f"n_dirs must be >= 4, got {n_dirs}")
    for s in speeds:
        if not 0.0 < s <= v_h_max:
            raise ValueError(
                f"action speed {s} outside (0, v_h_max={v_h_max}]")
    actions = [Vec2(0.0, 0.0)]
    for s in speeds:
        for m in range(n_dirs):
            actions.append(from_polar(s, TWO_PI * m / n_dirs))
    if len(set(actions)) != len(actions):
        raise ValueError("duplicate actions in the set; check speeds")
    return ActionSet(tuple(actions))


def nearest_action(v: Vec2, actions: ActionSet) -> int:
    """Index of the action closest to v; ties go to the lowest index."""
    best = 0
    best_d2 = float("inf")
    for idx, a in enumerate(actions.actions):
        dx = v.x - a.x
        dy = v.y - a.y
        d2 = dx * dx + dy * dy
        if d2 < best_d2:
            best = idx
            best_d2 = d2
    return best
