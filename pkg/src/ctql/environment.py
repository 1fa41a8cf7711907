"""Ground-truth herding dynamics.

Targets feel an inverse-square repulsion from every herder inside the
influence radius plus a piecewise-constant random drift; their speed is
capped. Herders are velocity-controlled integrators with a speed clamp.
Integration is explicit Euler at a fixed step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .geometry import TWO_PI, Vec2, clamp_norm, from_polar


class CoincidentAgentsError(RuntimeError):
    """A herder sits exactly on a target, where the repulsion kernel is singular."""


@dataclass(frozen=True)
class EnvParams:
    """Physical constants of the herding world. Defaults are desk-scale."""

    mu: float = 0.5                  # herder-target coupling gain, m^3/s
    rho_t: float = 2.5               # true influence radius, m
    v_t_max: float = 0.8             # target speed cap, m/s
    v_h_max: float = 2.0             # herder speed cap, m/s
    beta_max: float = 0.5            # drift magnitude cap, m/s
    drift_resample_dt: float = 0.1   # drift redraw interval, s
    sim_dt: float = 0.01             # integration step, s
    x_g: Vec2 = Vec2(0.0, 0.0)       # goal center
    rho_g: float = 1.5               # goal radius, m
    n_targets: int = 1
    n_herders: int = 1

    def validate(self, prefix: str = "env") -> list[str]:
        errs = []
        for name in ("mu", "rho_t", "v_t_max", "v_h_max", "rho_g", "sim_dt",
                     "drift_resample_dt"):
            val = getattr(self, name)
            if not val > 0:
                errs.append(f"{prefix}.{name}: got {val}, requires {name} > 0")
        if self.beta_max < 0:
            errs.append(f"{prefix}.beta_max: got {self.beta_max}, requires beta_max >= 0")
        if self.sim_dt > self.drift_resample_dt:
            errs.append(
                f"{prefix}.sim_dt: got {self.sim_dt}, requires sim_dt <= "
                f"drift_resample_dt ({self.drift_resample_dt})")
        for name in ("n_targets", "n_herders"):
            val = getattr(self, name)
            if not (isinstance(val, int) and val >= 1):
                errs.append(f"{prefix}.{name}: got {val!r}, requires integer >= 1")
        return errs


class DriftState(NamedTuple):
    """One target's current random-drift draw; constant between resamples."""

    beta: float                  # magnitude in [0, beta_max], m/s
    theta: float                 # heading in [0, 2*pi), rad
    time_since_resample: float   # s


@dataclass(frozen=True)
class WorldState:
    """Positions of all agents plus per-target drift and the simulation clock."""

    targets: tuple[Vec2, ...]
    herders: tuple[Vec2, ...]
    drifts: tuple[DriftState, ...]
    t: float


def step_interaction(x_t: Vec2, x_h: Vec2, rho: float) -> int:
    """1 if the herder is strictly inside the influence radius, else 0."""
    return 1 if (x_t - x_h).norm() < rho else 0


def herder_repulsion(x_t: Vec2, herders: Sequence[Vec2], mu: float,
                     rho_t: float) -> Vec2:
    """Summed inverse-square push on a target from all herders within range."""
    fx = fy = 0.0
    for x_h in herders:
        dx = x_t.x - x_h.x
        dy = x_t.y - x_h.y
        d = math.hypot(dx, dy)
        if d == 0.0:
            raise CoincidentAgentsError(
                f"herder coincides with target at ({x_t.x}, {x_t.y})")
        if d >= rho_t:
            continue
        w = mu / (d * d * d)
        fx += w * dx
        fy += w * dy
    return Vec2(fx, fy)


def resample_drift(drift: DriftState, rng, params: EnvParams) -> DriftState:
    """Redraw magnitude ~ U(0, beta_max) and heading ~ U(0, 2*pi)."""
    beta = rng.random() * params.beta_max
    theta = rng.random() * TWO_PI
    return DriftState(beta, theta, 0.0)


def drift_vector(drift: DriftState) -> Vec2:
    return from_polar(drift.beta, drift.theta)


def target_velocity(i: int, state: WorldState, params: EnvParams) -> Vec2:
    """Repulsion plus drift, capped at v_t_max with direction preserved."""
    f = herder_repulsion(state.targets[i], state.herders, params.mu, params.rho_t)
    f = f + drift_vector(state.drifts[i])
    n = f.norm()
    if n < params.v_t_max:
        return f
    return f * (params.v_t_max / n)


def clamp_herder_input(u: Vec2, v_h_max: float) -> Vec2:
    """Safety clamp on the commanded herder velocity."""
    return clamp_norm(u, v_h_max)


def env_step(state: WorldState, herder_inputs: Sequence[Vec2],
             params: EnvParams, rng) -> WorldState:
    """One explicit Euler step of every agent; drifts are redrawn when due.

    A drift is redrawn on the first step whose accumulated time reaches the
    resample interval, tested with half-step slack so float accumulation of
    sim_dt cannot postpone the redraw by one step.
    """
    if len(herder_inputs) != len(state.herders):
        raise ValueError(
            f"expected {len(state.herders)} herder inputs, got {len(herder_inputs)}")
    dt = params.sim_dt
    due = params.drift_resample_dt - 0.5 * dt
    drifts = tuple(
        resample_drift(d, rng, params) if d.time_since_resample + dt >= due
        else DriftState(d.beta, d.theta, d.time_since_resample + dt)
        for d in state.drifts)
    staged = WorldState(state.targets, state.herders, drifts, state.t)
    targets = tuple(
        x + target_velocity(i, staged, params) * dt
        for i, x in enumerate(state.targets))
    herders = tuple(
        x + clamp_herder_input(u, params.v_h_max) * dt
        for x, u in zip(state.herders, herder_inputs))
    return WorldState(targets, herders, drifts, state.t + dt)


def in_goal(x: Vec2, params: EnvParams) -> bool:
    """True when strictly inside the open goal disk."""
    return (x - params.x_g).norm() < params.rho_g
