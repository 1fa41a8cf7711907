"""Action selection: the CTQL switching rule, its two baselines, the
chase/engage herder controller, reward shaping, and target assignment.

Discrete actions are defined in a goal-anchored frame: direction 0 points
along the goal-to-target ray (outward), so the same action index means the
same maneuver relative to the pushing geometry regardless of where the
pair sits in the plane. This matches the rotation-invariant state encoding;
the executed world-frame velocity is the selected action rotated by the
ray angle.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .discretizer import ActionSet, DiscreteState, StateGrid, encode_state
from .environment import (CoincidentAgentsError, EnvParams, WorldState,
                          clamp_herder_input, in_goal)
from .geometry import Vec2, rotated, unit
from .learner import QTable, _pi_q_tagged
from .tutor import TutorParams, _pi_t_tagged, tutor_control


class PolicyMode(Enum):
    CTQL = "ctql"
    PURE_Q = "pureq"
    PURE_TUTOR = "puretutor"


class ActionSource(Enum):
    """Which selector produced an action. The public tag collapses the two
    exploration draws to 'Random'; the branch stays distinguishable so the
    switching rule can be audited from logs."""

    TUTOR = "tutor"
    QGREEDY = "qgreedy"
    RANDOM_TUTOR = "random_tutor"
    RANDOM_Q = "random_q"

    @property
    def tag(self) -> str:
        if self in (ActionSource.RANDOM_TUTOR, ActionSource.RANDOM_Q):
            return "Random"
        return "Tutor" if self is ActionSource.TUTOR else "QGreedy"

    @property
    def from_tutor_branch(self) -> bool:
        return self in (ActionSource.TUTOR, ActionSource.RANDOM_TUTOR)


@dataclass(frozen=True)
class RewardParams:
    w_goal: float = 10.0      # weight on the target's progress toward the goal
    w_chase: float = 1.0      # weight on herder-target separation beyond engage range
    w_trespass: float = 2.0   # penalty when the herder ends up inside the goal

    def validate(self, prefix: str = "reward") -> list[str]:
        errs = []
        if not self.w_goal > 0:
            errs.append(f"{prefix}.w_goal: got {self.w_goal}, requires w_goal > 0")
        for name in ("w_chase", "w_trespass"):
            val = getattr(self, name)
            if val < 0:
                errs.append(f"{prefix}.{name}: got {val}, requires {name} >= 0")
        return errs


def ctql_select(s: DiscreteState | int, table: QTable, v: Vec2,
                actions: ActionSet, epsilon: float,
                rng) -> tuple[int, ActionSource]:
    """Switching rule: the Q policy once some value in the row is strictly
    positive, otherwise the tutor's projected suggestion."""
    if table.max_q(s) > 0.0:
        idx, was_random = _pi_q_tagged(table, s, epsilon, rng)
        return idx, (ActionSource.RANDOM_Q if was_random else ActionSource.QGREEDY)
    idx, was_random = _pi_t_tagged(v, actions, epsilon, rng)
    return idx, (ActionSource.RANDOM_TUTOR if was_random else ActionSource.TUTOR)


def baseline_select(mode: PolicyMode, s: DiscreteState | int, table: QTable,
                    v: Vec2, actions: ActionSet, epsilon: float,
                    v_h_max: float, rng) -> tuple[Vec2 | int, ActionSource]:
    """Mode dispatch. Pure tutor returns a continuous clamped input; the
    learning modes return an action index."""
    if mode is PolicyMode.PURE_TUTOR:
        return clamp_herder_input(v, v_h_max), ActionSource.TUTOR
    if mode is PolicyMode.PURE_Q:
        idx, was_random = _pi_q_tagged(table, s, epsilon, rng)
        return idx, (ActionSource.RANDOM_Q if was_random else ActionSource.QGREEDY)
    return ctql_select(s, table, v, actions, epsilon, rng)


@dataclass(frozen=True)
class HerderDecision:
    """Outcome of one herder's control-step decision."""

    input: Vec2
    chase: bool
    engaged: bool = False        # inside the estimated influence radius
    state: DiscreteState | None = None
    action_index: int | None = None   # set only when learning may use it
    source: ActionSource | None = None
    max_q: float | None = None   # row max at selection time, for audits


def _goal_ray_angle(x_t: Vec2, x_g: Vec2) -> float:
    ref = x_t - x_g
    return 0.0 if (ref.x == 0.0 and ref.y == 0.0) else ref.angle()


def herder_command(world: WorldState, herder_idx: int, target_idx: int,
                   xdot_est: Vec2, mode: PolicyMode, table: QTable,
                   grid: StateGrid, actions: ActionSet, env: EnvParams,
                   tutor: TutorParams, epsilon: float, rng) -> HerderDecision:
    """One herder's control decision for its assigned target.

    Tutor-driven modes chase the target at full speed while outside the
    estimated influence radius and pick an action inside it. Pure Q-learning
    has no chase controller: the Q policy drives the herder everywhere, but
    a learning tuple is emitted only inside the influence radius, where the
    interaction actually happens.
    """
    x_h = world.herders[herder_idx]
    x_t = world.targets[target_idx]
    rel = x_t - x_h
    d = rel.norm()
    if d == 0.0:
        raise CoincidentAgentsError(
            f"herder {herder_idx} coincides with target {target_idx}")
    engaged = d <= tutor.rho_t_hat
    if not engaged and mode is not PolicyMode.PURE_Q:
        return HerderDecision(input=unit(rel) * env.v_h_max, chase=True)
    s = encode_state(x_t, x_h, xdot_est.norm(), grid, env.x_g)
    ray = _goal_ray_angle(x_t, env.x_g)
    if mode is PolicyMode.PURE_Q:
        idx, was_random = _pi_q_tagged(table, s, epsilon, rng)
        source = ActionSource.RANDOM_Q if was_random else ActionSource.QGREEDY
        return HerderDecision(input=rotated(actions[idx], ray), chase=False,
                              engaged=engaged, state=s,
                              action_index=idx if engaged else None,
                              source=source, max_q=table.max_q(s))
    v = tutor_control(xdot_est, tutor)
    selected, source = baseline_select(mode, s, table, rotated(v, -ray),
                                       actions, epsilon, env.v_h_max, rng)
    if isinstance(selected, Vec2):
        # pure tutor: the continuous law needs no frame round-trip
        return HerderDecision(input=clamp_herder_input(v, env.v_h_max),
                              chase=False, engaged=True, state=s,
                              source=source)
    return HerderDecision(input=rotated(actions[selected], ray), chase=False,
                          engaged=True, state=s, action_index=selected,
                          source=source, max_q=table.max_q(s))


def reward(x_t_before: Vec2, x_t_after: Vec2, x_h_after: Vec2,
           params: RewardParams, env: EnvParams, rho_t_hat: float) -> float:
    """Progress of the target toward the goal, minus a separation penalty
    beyond the engage radius, minus a fixed penalty for a trespassing herder."""
    progress = (x_t_before - env.x_g).norm() - (x_t_after - env.x_g).norm()
    separation = (x_t_after - x_h_after).norm()
    r = params.w_goal * progress
    r -= params.w_chase * max(0.0, separation - rho_t_hat)
    if in_goal(x_h_after, env):
        r -= params.w_trespass
    return r


def assign_targets(herders: Sequence[Vec2], targets: Sequence[Vec2],
                   env: EnvParams, secure_margin: float = 0.0) -> list[int]:
    """Greedy nearest-pending assignment, recomputed every control step.

    A target is pending while its goal distance is at least
    rho_g - secure_margin; with margin 0 that is exactly "outside the goal
    region". Herders claim pending targets in herder-index order, skipping
    claimed ones while unclaimed ones remain. With nothing pending, each
    herder patrols its nearest target, also claim-skipped so patrol anchors
    spread across the flock.
    """
    secure_radius = env.rho_g - secure_margin
    pending = [i for i, x in enumerate(targets)
               if (x - env.x_g).norm() >= secure_radius]
    assignment: list[int] = []
    claimed: set[int] = set()
    for x_h in herders:
        pool_base = pending if pending else list(range(len(targets)))
        unclaimed = [i for i in pool_base if i not in claimed]
        pool = unclaimed if unclaimed else pool_base
        best = min(pool, key=lambda i: ((targets[i].x - x_h.x) ** 2
                                        + (targets[i].y - x_h.y) ** 2, i))
        assignment.append(best)
        claimed.add(best)
    return assignment
