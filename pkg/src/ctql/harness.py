"""Experiment orchestration: seeded episodes, training across trials with a
persistent Q-table, greedy evaluation, and mode comparison on matched seeds.

Training applies an exploration curriculum: the per-trial exploration
probability decays linearly from the configured value to a small floor over
the trials, so late trials run near-greedy and correct spuriously positive
entries before the table is frozen for evaluation.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from statistics import mean, pstdev
from typing import Callable, Sequence

from .discretizer import ActionSet, StateGrid, build_action_set, encode_state
from .environment import (CoincidentAgentsError, DriftState, EnvParams,
                          WorldState, env_step, in_goal, resample_drift)
from .fileio import CompareRow, EvalAggregate, TrajectoryRow, TrialMetrics
from .geometry import Vec2
from .learner import LearnParams, QTable
from .policy import (HerderDecision, PolicyMode, RewardParams, assign_targets,
                     herder_command, reward)
from .tutor import TutorParams, VelocityEstimator, surrogate_velocity

log = logging.getLogger(__name__)

# Evaluation episodes draw seeds from a disjoint block so that runs with
# different training budgets still evaluate on identical initial conditions.
EVAL_SEED_OFFSET = 1_000_000

# Exploration floor reached on the last training trial.
EPSILON_FINAL = 0.02


class HarnessConfigError(ValueError):
    """A run was requested with an invalid or inconsistent configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Everything a reproducible run needs, seed included."""

    env: EnvParams = EnvParams()
    grid: StateGrid = StateGrid()
    learn: LearnParams = LearnParams()
    tutor: TutorParams = TutorParams()
    reward: RewardParams = RewardParams()
    action_dirs: int = 8
    action_speeds: tuple[float, ...] = (1.0, 2.0)
    mode: PolicyMode = PolicyMode.CTQL
    n_trials: int = 50
    steps_per_trial: int = 3000
    seed: int = 1234
    eval_trials: int = 20
    control_dt: float = 0.1        # action hold time; integer multiple of sim_dt
    spawn_half_width: float = 5.0  # half-width of the square spawn region
    record_every: int = 1          # trajectory thinning factor
    secure_margin: float = 0.0     # assignment works targets to rho_g - margin
    share_table: bool = False      # one table for all herders instead of one each

    def action_set(self) -> ActionSet:
        return build_action_set(self.action_dirs, self.action_speeds,
                                self.env.v_h_max)

    def substeps(self) -> int:
        return max(1, round(self.control_dt / self.env.sim_dt))

    def validate(self) -> list[str]:
        errs = []
        errs += self.env.validate("env")
        errs += self.grid.validate("grid")
        errs += self.learn.validate("learn")
        errs += self.tutor.validate("tutor")
        errs += self.reward.validate("reward")
        if self.action_dirs < 4:
            errs.append(f"actions.n_dirs: got {self.action_dirs}, "
                        "requires n_dirs >= 4")
        for s in self.action_speeds:
            if not 0.0 < s <= self.env.v_h_max:
                errs.append(f"actions.speeds: got {s}, requires speeds in "
                            f"(0, v_h_max={self.env.v_h_max}]")
        if self.tutor.rho_t_hat >= self.env.rho_t:
            errs.append(
                f"tutor.rho_t_hat: got {self.tutor.rho_t_hat}, requires a "
                f"conservative estimate rho_t_hat < env.rho_t ({self.env.rho_t})")
        for name, minimum in (("n_trials", 1), ("steps_per_trial", 1),
                              ("eval_trials", 1), ("record_every", 1)):
            val = getattr(self, name)
            if not (isinstance(val, int) and val >= minimum):
                errs.append(f"run.{name}: got {val!r}, requires integer "
                            f">= {minimum}")
        if isinstance(self.n_trials, int) and self.n_trials >= EVAL_SEED_OFFSET:
            errs.append(f"run.n_trials: got {self.n_trials}, requires "
                        f"< {EVAL_SEED_OFFSET} to keep trial seeds disjoint "
                        "from evaluation seeds")
        if self.control_dt <= 0:
            errs.append(f"run.control_dt: got {self.control_dt}, requires > 0")
        elif self.env.sim_dt > 0:
            ratio = self.control_dt / self.env.sim_dt
            if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
                errs.append(
                    f"run.control_dt: got {self.control_dt}, requires a "
                    f"whole multiple of env.sim_dt ({self.env.sim_dt})")
        if self.spawn_half_width <= 0:
            errs.append(f"run.spawn_half_width: got {self.spawn_half_width}, "
                        "requires > 0")
        if not 0.0 <= self.secure_margin < self.env.rho_g:
            errs.append(f"run.secure_margin: got {self.secure_margin}, "
                        f"requires 0 <= margin < rho_g ({self.env.rho_g})")
        return errs

    def validated(self) -> "RunConfig":
        errs = self.validate()
        if errs:
            raise HarnessConfigError("\n".join(errs))
        return self


@dataclass
class EpisodeResult:
    """Full record of one episode at control-step resolution."""

    seed: int
    trial: int
    containment_fraction: float = 0.0
    final_all_in_goal: bool = False
    cumulative_reward: float = 0.0
    source_counts: dict[str, int] = field(default_factory=dict)
    n_engage_steps: int = 0
    n_chase_steps: int = 0
    n_disengaged_steps: int = 0     # pure-Q decisions outside the engage zone
    target_containment: list[tuple[bool, ...]] = field(default_factory=list)
    rows: list[TrajectoryRow] = field(default_factory=list)
    audit: list[tuple[float, bool]] = field(default_factory=list)
    spawn_targets: tuple[Vec2, ...] = ()
    spawn_herders: tuple[Vec2, ...] = ()
    aborted: bool = False
    diagnostic: str | None = None

    def all_in_goal_flags(self) -> list[bool]:
        return [all(flags) for flags in self.target_containment]

    def to_metrics(self) -> TrialMetrics:
        counts = self.source_counts
        return TrialMetrics(
            trial=self.trial,
            containment_fraction=self.containment_fraction,
            cumulative_reward=self.cumulative_reward,
            final_all_in_goal=int(self.final_all_in_goal),
            n_tutor=counts.get("Tutor", 0),
            n_qgreedy=counts.get("QGreedy", 0),
            n_random=counts.get("Random", 0),
            n_chase=self.n_chase_steps,
        )


def containment_fraction(all_in_flags: Sequence[bool]) -> float:
    """Share of the final half of the control steps with every target inside
    the goal region."""
    if not all_in_flags:
        return 0.0
    tail = all_in_flags[len(all_in_flags) // 2:]
    return sum(tail) / len(tail)


def trial_epsilon(config: RunConfig, trial: int) -> float:
    """Exploration probability for one training trial (linear decay)."""
    if config.n_trials > 1:
        frac = trial / (config.n_trials - 1)
    else:
        frac = 1.0
    return config.learn.epsilon * (1.0 - frac) + EPSILON_FINAL * frac


def spawn_world(config: RunConfig, rng: random.Random) -> WorldState:
    """Uniform spawns in the square around the goal; targets are rejected
    back out of the goal region, herders away from exact target positions."""
    env = config.env
    hw = config.spawn_half_width

    def draw() -> Vec2:
        return Vec2(env.x_g.x + (2.0 * rng.random() - 1.0) * hw,
                    env.x_g.y + (2.0 * rng.random() - 1.0) * hw)

    targets = []
    for _ in range(env.n_targets):
        while True:
            p = draw()
            if not in_goal(p, env):
                targets.append(p)
                break
    herders = []
    for _ in range(env.n_herders):
        while True:
            p = draw()
            if all((p - x).norm() > 1e-9 for x in targets):
                herders.append(p)
                break
    drifts = tuple(resample_drift(DriftState(0.0, 0.0, 0.0), rng, env)
                   for _ in range(env.n_targets))
    return WorldState(tuple(targets), tuple(herders), drifts, 0.0)


def _source_label(dec: HerderDecision) -> str:
    return "Chase" if dec.chase else dec.source.tag


def run_episode(config: RunConfig, tables: Sequence[QTable],
                rng: random.Random, *, train: bool, trial_index: int = 0,
                epsilon: float | None = None, record: bool = False,
                audit: bool = False) -> EpisodeResult:
    """Roll out one episode; optionally update the tables in place.

    A coincident-position failure aborts the episode, which is returned as
    failed with the diagnostic instead of raising.
    """
    env = config.env
    grid = config.grid
    actions = config.action_set()
    tutor = config.tutor
    eps = config.learn.epsilon if epsilon is None else epsilon
    substeps = config.substeps()
    n_herders = env.n_herders

    world = spawn_world(config, rng)
    result = EpisodeResult(seed=config.seed, trial=trial_index,
                           spawn_targets=world.targets,
                           spawn_herders=world.herders)
    estimators = [VelocityEstimator() for _ in range(n_herders)]
    tracked = [-1] * n_herders

    try:
        for k in range(config.steps_per_trial):
            assignment = assign_targets(world.herders, world.targets, env,
                                        config.secure_margin)
            decisions: list[HerderDecision] = []
            for j in range(n_herders):
                i = assignment[j]
                if tracked[j] != i:
                    estimators[j] = VelocityEstimator()
                    tracked[j] = i
                fallback = surrogate_velocity(world.targets[i],
                                              world.herders[j], tutor)
                xdot = estimators[j].estimate(world.targets[i], world.t,
                                              fallback)
                decisions.append(herder_command(
                    world, j, i, xdot, config.mode, tables[j], grid, actions,
                    env, tutor, eps, rng))

            before = world.targets
            inputs = [dec.input for dec in decisions]
            for _ in range(substeps):
                world = env_step(world, inputs, env, rng)

            step_rewards: list[float | None] = []
            for j, dec in enumerate(decisions):
                if dec.chase:
                    result.n_chase_steps += 1
                    step_rewards.append(None)
                    continue
                if not dec.engaged:
                    result.n_disengaged_steps += 1
                    step_rewards.append(None)
                    continue
                i = assignment[j]
                r = reward(before[i], world.targets[i], world.herders[j],
                           config.reward, env, tutor.rho_t_hat)
                step_rewards.append(r)
                result.cumulative_reward += r
                tag = dec.source.tag
                result.source_counts[tag] = result.source_counts.get(tag, 0) + 1
                result.n_engage_steps += 1
                if audit and dec.max_q is not None:
                    result.audit.append((dec.max_q, dec.source.from_tutor_branch))
                if train and dec.action_index is not None:
                    speed_next = ((world.targets[i] - before[i]).norm()
                                  / config.control_dt)
                    s_next = encode_state(world.targets[i], world.herders[j],
                                          speed_next, grid, env.x_g)
                    tables[j].update(dec.state, dec.action_index, r, s_next,
                                     config.learn)

            result.target_containment.append(
                tuple(in_goal(x, env) for x in world.targets))

            if record and k % config.record_every == 0:
                t = world.t
                for i, x in enumerate(world.targets):
                    radial = (x - env.x_g).norm()
                    result.rows.append(TrajectoryRow(
                        t, trial_index, "target", i, x.x, x.y, radial,
                        int(radial < env.rho_g), "None", None))
                for j, x in enumerate(world.herders):
                    radial = (x - env.x_g).norm()
                    result.rows.append(TrajectoryRow(
                        t, trial_index, "herder", j, x.x, x.y, radial,
                        int(radial < env.rho_g), _source_label(decisions[j]),
                        step_rewards[j]))
    except CoincidentAgentsError as exc:
        result.aborted = True
        result.diagnostic = str(exc)
        result.containment_fraction = 0.0
        result.final_all_in_goal = False
        return result

    flags = result.all_in_goal_flags()
    result.containment_fraction = containment_fraction(flags)
    result.final_all_in_goal = bool(flags[-1]) if flags else False
    return result


def fresh_tables(config: RunConfig) -> list[QTable]:
    """Zero tables, one per herder, or the same table repeated when shared."""
    actions = config.action_set()
    if config.share_table:
        table = QTable.for_spaces(config.grid, actions)
        return [table] * config.env.n_herders
    return [QTable.for_spaces(config.grid, actions)
            for _ in range(config.env.n_herders)]


def train(config: RunConfig,
          audit: bool = False) -> tuple[list[QTable], list[EpisodeResult]]:
    """Run the training trials with persistent tables, fresh initial
    conditions per trial (seed + trial index), and the exploration decay."""
    config = config.validated()
    if config.mode not in (PolicyMode.CTQL, PolicyMode.PURE_Q):
        raise HarnessConfigError(
            f"run.mode: got {config.mode.value}, training requires ctql or pureq")
    tables = fresh_tables(config)
    results = []
    for trial in range(config.n_trials):
        rng = random.Random(config.seed + trial)
        res = run_episode(config, tables, rng, train=True, trial_index=trial,
                          epsilon=trial_epsilon(config, trial), audit=audit)
        results.append(res)
        log.info("trial %d/%d: containment=%.3f reward=%.1f",
                 trial + 1, config.n_trials, res.containment_fraction,
                 res.cumulative_reward)
    return tables, results


def evaluate(config: RunConfig, tables: Sequence[QTable],
             record: bool = False) -> tuple[EvalAggregate, list[EpisodeResult]]:
    """Greedy evaluation (exploration off, learning off) on the run's
    dedicated evaluation seed block."""
    config = config.validated()
    results = []
    for idx in range(config.eval_trials):
        rng = random.Random(config.seed + EVAL_SEED_OFFSET + idx)
        results.append(run_episode(config, tables, rng, train=False,
                                   trial_index=idx, epsilon=0.0,
                                   record=record))
    fractions = [r.containment_fraction for r in results]
    agg = EvalAggregate(
        mode=config.mode.value,
        eval_trials=config.eval_trials,
        success_rate=mean(float(r.final_all_in_goal) for r in results),
        containment_mean=mean(fractions),
        containment_min=min(fractions),
        containment_std=pstdev(fractions) if len(fractions) > 1 else 0.0,
    )
    return agg, results


def compare(configs: dict[PolicyMode, RunConfig],
            record: bool = False) -> tuple[list[CompareRow],
                                           dict[PolicyMode, list[EpisodeResult]]]:
    """Train (where the mode learns) and evaluate each mode on matched
    evaluation seeds; one report row per mode."""
    rows = []
    all_results = {}
    for mode in (PolicyMode.CTQL, PolicyMode.PURE_Q, PolicyMode.PURE_TUTOR):
        if mode not in configs:
            continue
        cfg = replace(configs[mode], mode=mode).validated()
        if mode is PolicyMode.PURE_TUTOR:
            tables = fresh_tables(cfg)
            trained = 0
        else:
            tables, _ = train(cfg)
            trained = cfg.n_trials
        agg, results = evaluate(cfg, tables, record=record)
        all_results[mode] = results
        rows.append(CompareRow(
            mode=mode.value, train_trials=trained,
            success_rate=agg.success_rate,
            containment_mean=agg.containment_mean,
            containment_min=agg.containment_min,
            containment_std=agg.containment_std,
        ))
        log.info("mode %s: success=%.2f containment mean=%.3f min=%.3f",
                 mode.value, agg.success_rate, agg.containment_mean,
                 agg.containment_min)
    return rows, all_results


def seed_map(func: Callable[[int], object], seeds: Sequence[int],
             max_workers: int | None = None) -> list[object]:
    """Map an independent per-seed callable over a seed list, optionally in
    parallel processes. Results keep the seed order."""
    if not max_workers or max_workers == 1:
        return [func(s) for s in seeds]
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(func, seeds))
