import random

import pytest

from ctql import EnvParams, LearnParams, RunConfig


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def tiny_config():
    """Fast single-herder config for loop-level tests (sub-second episodes)."""
    return RunConfig(n_trials=2, steps_per_trial=60, eval_trials=2, seed=7)


def make_env(**kw) -> EnvParams:
    return EnvParams(**kw)


def make_learn(**kw) -> LearnParams:
    return LearnParams(**kw)
