"""YAML run configuration: schema checking, defaults, and validation.

Every violation is reported with its field path plus the offending and
permitted values, and all violations are collected before raising.
"""

from __future__ import annotations

import os
from dataclasses import fields
from typing import Any, Mapping

import yaml

from .environment import EnvParams
from .discretizer import StateGrid
from .geometry import Vec2
from .harness import RunConfig
from .learner import LearnParams
from .policy import PolicyMode, RewardParams
from .tutor import TutorParams


class ConfigError(ValueError):
    """Malformed, unknown, or invariant-violating configuration input."""


_MODE_NAMES = {m.value: m for m in PolicyMode}

# section -> (accepted keys); tutor.epsilon is intentionally absent, the
# exploration probability is a single shared value under learn.epsilon.
_SECTIONS = {
    "env": {"mu", "rho_t", "v_t_max", "v_h_max", "beta_max",
            "drift_resample_dt", "sim_dt", "x_g", "rho_g", "n_targets",
            "n_herders"},
    "grid": {"dist_edges", "angle_bins", "speed_edges"},
    "actions": {"n_dirs", "speeds"},
    "learn": {"alpha", "gamma", "epsilon"},
    "tutor": {"delta", "rho_t_hat", "k"},
    "reward": {"w_goal", "w_chase", "w_trespass"},
    "run": {"mode", "n_trials", "steps_per_trial", "seed", "eval_trials",
            "control_dt", "spawn_half_width", "record_every",
            "secure_margin", "share_table"},
}


def _check_tree(data: Mapping[str, Any], path: str) -> list[str]:
    errs = []
    for section, value in data.items():
        if section not in _SECTIONS:
            errs.append(f"{path}{section}: unknown section, permitted: "
                        f"{sorted(_SECTIONS)}")
            continue
        if value is None:
            continue
        if not isinstance(value, Mapping):
            errs.append(f"{path}{section}: got {value!r}, requires a mapping")
            continue
        for key in value:
            if key not in _SECTIONS[section]:
                errs.append(f"{path}{section}.{key}: unknown key, permitted: "
                            f"{sorted(_SECTIONS[section])}")
    return errs


def _num(section: Mapping[str, Any], key: str, path: str, errs: list[str],
         default: float) -> float:
    if key not in section:
        return default
    val = section[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        errs.append(f"{path}.{key}: got {val!r}, requires a number")
        return default
    return float(val)


def _int(section: Mapping[str, Any], key: str, path: str, errs: list[str],
         default: int) -> int:
    if key not in section:
        return default
    val = section[key]
    if isinstance(val, bool) or not isinstance(val, int):
        errs.append(f"{path}.{key}: got {val!r}, requires an integer")
        return default
    return val


def _float_list(section: Mapping[str, Any], key: str, path: str,
                errs: list[str], default: tuple[float, ...]) -> tuple[float, ...]:
    if key not in section:
        return default
    val = section[key]
    if (not isinstance(val, (list, tuple))
            or any(isinstance(v, bool) or not isinstance(v, (int, float))
                   for v in val)):
        errs.append(f"{path}.{key}: got {val!r}, requires a list of numbers")
        return default
    return tuple(float(v) for v in val)


def _bool(section: Mapping[str, Any], key: str, path: str, errs: list[str],
          default: bool) -> bool:
    if key not in section:
        return default
    val = section[key]
    if not isinstance(val, bool):
        errs.append(f"{path}.{key}: got {val!r}, requires true or false")
        return default
    return val


def _vec2(section: Mapping[str, Any], key: str, path: str, errs: list[str],
          default: Vec2) -> Vec2:
    if key not in section:
        return default
    val = section[key]
    if (not isinstance(val, (list, tuple)) or len(val) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float))
                   for v in val)):
        errs.append(f"{path}.{key}: got {val!r}, requires [x, y]")
        return default
    return Vec2(float(val[0]), float(val[1]))


def config_from_dict(data: Mapping[str, Any] | None) -> RunConfig:
    """Build a validated RunConfig from a parsed configuration tree."""
    data = data or {}
    if not isinstance(data, Mapping):
        raise ConfigError(f"config root: got {type(data).__name__}, "
                          "requires a mapping of sections")
    errs = _check_tree(data, "")
    sec = {name: (data.get(name) or {}) for name in _SECTIONS}

    env_d, grid_d, act_d = sec["env"], sec["grid"], sec["actions"]
    learn_d, tutor_d, reward_d, run_d = (sec["learn"], sec["tutor"],
                                         sec["reward"], sec["run"])
    dflt = RunConfig()

    env = EnvParams(
        mu=_num(env_d, "mu", "env", errs, dflt.env.mu),
        rho_t=_num(env_d, "rho_t", "env", errs, dflt.env.rho_t),
        v_t_max=_num(env_d, "v_t_max", "env", errs, dflt.env.v_t_max),
        v_h_max=_num(env_d, "v_h_max", "env", errs, dflt.env.v_h_max),
        beta_max=_num(env_d, "beta_max", "env", errs, dflt.env.beta_max),
        drift_resample_dt=_num(env_d, "drift_resample_dt", "env", errs,
                               dflt.env.drift_resample_dt),
        sim_dt=_num(env_d, "sim_dt", "env", errs, dflt.env.sim_dt),
        x_g=_vec2(env_d, "x_g", "env", errs, dflt.env.x_g),
        rho_g=_num(env_d, "rho_g", "env", errs, dflt.env.rho_g),
        n_targets=_int(env_d, "n_targets", "env", errs, dflt.env.n_targets),
        n_herders=_int(env_d, "n_herders", "env", errs, dflt.env.n_herders),
    )
    grid = StateGrid(
        dist_edges=_float_list(grid_d, "dist_edges", "grid", errs,
                               dflt.grid.dist_edges),
        angle_bins=_int(grid_d, "angle_bins", "grid", errs,
                        dflt.grid.angle_bins),
        speed_edges=_float_list(grid_d, "speed_edges", "grid", errs,
                                dflt.grid.speed_edges),
    )
    learn = LearnParams(
        alpha=_num(learn_d, "alpha", "learn", errs, dflt.learn.alpha),
        gamma=_num(learn_d, "gamma", "learn", errs, dflt.learn.gamma),
        epsilon=_num(learn_d, "epsilon", "learn", errs, dflt.learn.epsilon),
    )
    tutor = TutorParams(
        delta=_num(tutor_d, "delta", "tutor", errs, dflt.tutor.delta),
        rho_t_hat=_num(tutor_d, "rho_t_hat", "tutor", errs,
                       dflt.tutor.rho_t_hat),
        k=_num(tutor_d, "k", "tutor", errs, dflt.tutor.k),
        epsilon=learn.epsilon,
    )
    reward = RewardParams(
        w_goal=_num(reward_d, "w_goal", "reward", errs, dflt.reward.w_goal),
        w_chase=_num(reward_d, "w_chase", "reward", errs, dflt.reward.w_chase),
        w_trespass=_num(reward_d, "w_trespass", "reward", errs,
                        dflt.reward.w_trespass),
    )

    mode = dflt.mode
    if "mode" in run_d:
        raw = run_d["mode"]
        if not isinstance(raw, str) or raw.lower() not in _MODE_NAMES:
            errs.append(f"run.mode: got {raw!r}, permitted: "
                        f"{sorted(_MODE_NAMES)}")
        else:
            mode = _MODE_NAMES[raw.lower()]

    config = RunConfig(
        env=env, grid=grid, learn=learn, tutor=tutor, reward=reward,
        action_dirs=_int(act_d, "n_dirs", "actions", errs, dflt.action_dirs),
        action_speeds=_float_list(act_d, "speeds", "actions", errs,
                                  dflt.action_speeds),
        mode=mode,
        n_trials=_int(run_d, "n_trials", "run", errs, dflt.n_trials),
        steps_per_trial=_int(run_d, "steps_per_trial", "run", errs,
                             dflt.steps_per_trial),
        seed=_int(run_d, "seed", "run", errs, dflt.seed),
        eval_trials=_int(run_d, "eval_trials", "run", errs, dflt.eval_trials),
        control_dt=_num(run_d, "control_dt", "run", errs, dflt.control_dt),
        spawn_half_width=_num(run_d, "spawn_half_width", "run", errs,
                              dflt.spawn_half_width),
        record_every=_int(run_d, "record_every", "run", errs,
                          dflt.record_every),
        secure_margin=_num(run_d, "secure_margin", "run", errs,
                           dflt.secure_margin),
        share_table=_bool(run_d, "share_table", "run", errs,
                          dflt.share_table),
    )
    errs += config.validate()
    if errs:
        raise ConfigError("\n".join(errs))
    return config


def parse_config(path: str) -> RunConfig:
    """Load and validate a YAML run configuration file."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path) as handle:
        try:
            data = yaml.safe_load(handle)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    return config_from_dict(data)


def config_to_dict(config: RunConfig) -> dict[str, Any]:
    """Inverse of config_from_dict, convenient for writing derived configs."""
    return {
        "env": {
            **{f.name: getattr(config.env, f.name)
               for f in fields(config.env) if f.name != "x_g"},
            "x_g": [config.env.x_g.x, config.env.x_g.y],
        },
        "grid": {
            "dist_edges": list(config.grid.dist_edges),
            "angle_bins": config.grid.angle_bins,
            "speed_edges": list(config.grid.speed_edges),
        },
        "actions": {"n_dirs": config.action_dirs,
                    "speeds": list(config.action_speeds)},
        "learn": {"alpha": config.learn.alpha, "gamma": config.learn.gamma,
                  "epsilon": config.learn.epsilon},
        "tutor": {"delta": config.tutor.delta,
                  "rho_t_hat": config.tutor.rho_t_hat, "k": config.tutor.k},
        "reward": {"w_goal": config.reward.w_goal,
                   "w_chase": config.reward.w_chase,
                   "w_trespass": config.reward.w_trespass},
        "run": {"mode": config.mode.value, "n_trials": config.n_trials,
                "steps_per_trial": config.steps_per_trial,
                "seed": config.seed, "eval_trials": config.eval_trials,
                "control_dt": config.control_dt,
                "spawn_half_width": config.spawn_half_width,
                "record_every": config.record_every,
                "secure_margin": config.secure_margin,
                "share_table": config.share_table},
    }
