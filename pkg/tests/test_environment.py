import math
import random

import pytest

from ctql import (CoincidentAgentsError, DriftState, EnvParams, Vec2,
                  WorldState, clamp_herder_input, env_step, herder_repulsion,
                  in_goal, resample_drift, step_interaction, target_velocity)
from ctql.environment import drift_vector


def make_world(targets, herders, beta=0.0, theta=0.0):
    drifts = tuple(DriftState(beta, theta, 0.0) for _ in targets)
    return WorldState(tuple(targets), tuple(herders), drifts, 0.0)


class TestStepInteraction:
    def test_truth_table(self):
        assert step_interaction(Vec2(1, 0), Vec2(0, 0), 2.0) == 1
        assert step_interaction(Vec2(3, 0), Vec2(0, 0), 2.0) == 0
        # the boundary is excluded: coupling needs strictly smaller distance
        assert step_interaction(Vec2(2, 0), Vec2(0, 0), 2.0) == 0

    def test_monotone_in_radius(self):
        rng = random.Random(11)
        for _ in range(500):
            x_t = Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5))
            x_h = Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5))
            r1 = rng.uniform(0.1, 5)
            r2 = r1 + rng.uniform(0, 5)
            assert step_interaction(x_t, x_h, r1) <= step_interaction(x_t, x_h, r2)


class TestHerderRepulsion:
    def test_unit_distance(self):
        f = herder_repulsion(Vec2(1, 0), [Vec2(0, 0)], mu=1.0, rho_t=2.0)
        assert f == Vec2(1.0, 0.0)

    def test_out_of_range_contributes_nothing(self):
        f = herder_repulsion(Vec2(1, 0), [Vec2(5, 5)], mu=1.0, rho_t=2.0)
        assert f == Vec2(0.0, 0.0)

    def test_two_herder_hand_sum(self):
        # mu * ((2,0)/8 + (0,2)/8) = (2, 2) for mu = 8
        f = herder_repulsion(Vec2(0, 0), [Vec2(-2, 0), Vec2(0, -2)],
                             mu=8.0, rho_t=3.0)
        assert f.x == pytest.approx(2.0, abs=1e-9)
        assert f.y == pytest.approx(2.0, abs=1e-9)

    def test_additive_over_herders(self):
        rng = random.Random(12)
        for _ in range(200):
            x_t = Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3))
            herders = [Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3))
                       for _ in range(4)]
            total = herder_repulsion(x_t, herders, 0.7, 2.5)
            by_parts_x = sum(herder_repulsion(x_t, [h], 0.7, 2.5).x
                             for h in herders)
            by_parts_y = sum(herder_repulsion(x_t, [h], 0.7, 2.5).y
                             for h in herders)
            assert total.x == pytest.approx(by_parts_x, abs=1e-12)
            assert total.y == pytest.approx(by_parts_y, abs=1e-12)

    def test_brute_force_oracle(self):
        # independent evaluation through complex arithmetic
        rng = random.Random(13)
        for _ in range(200):
            x_t = Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3))
            herders = [Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3))
                       for _ in range(3)]
            mu, rho = rng.uniform(0.1, 2), rng.uniform(0.5, 4)
            zt = complex(x_t.x, x_t.y)
            expected = 0j
            for h in herders:
                dz = zt - complex(h.x, h.y)
                if abs(dz) < rho:
                    expected += mu * dz / abs(dz) ** 3
            got = herder_repulsion(x_t, herders, mu, rho)
            assert got.x == pytest.approx(expected.real, abs=1e-9)
            assert got.y == pytest.approx(expected.imag, abs=1e-9)

    def test_coincident_herder_raises(self):
        with pytest.raises(CoincidentAgentsError):
            herder_repulsion(Vec2(1, 1), [Vec2(1, 1)], 1.0, 2.0)


class TestResampleDrift:
    def test_zero_cap_gives_zero_magnitude(self):
        d = resample_drift(DriftState(0.3, 1.0, 0.05), random.Random(1),
                           EnvParams(beta_max=0.0))
        assert d.beta == 0.0
        assert d.time_since_resample == 0.0

    def test_deterministic_replay(self):
        params = EnvParams(beta_max=1.0)
        a = resample_drift(DriftState(0, 0, 0), random.Random(42), params)
        b = resample_drift(DriftState(0, 0, 0), random.Random(42), params)
        assert a == b

    def test_uniform_magnitude_mean(self):
        # mean of U(0, 2) is 1; sigma of the sample mean at n=1e5 is ~0.0018
        params = EnvParams(beta_max=2.0)
        rng = random.Random(99)
        n = 100_000
        total = 0.0
        for _ in range(n):
            d = resample_drift(DriftState(0, 0, 0), rng, params)
            assert 0.0 <= d.beta <= 2.0
            assert 0.0 <= d.theta < 2 * math.pi
            total += d.beta
        sigma_mean = (2.0 / math.sqrt(12)) / math.sqrt(n)
        assert abs(total / n - 1.0) < 3 * sigma_mean


class TestTargetVelocity:
    def test_saturates_above_cap(self):
        params = EnvParams(mu=5.0, rho_t=10.0, v_t_max=1.0, beta_max=0.0)
        # herder at unit distance gives f1 = (5, 0) scaled to... use (3,4) shape
        world = make_world([Vec2(0, 0)], [Vec2(-0.6, -0.8)])
        # f1 = 5 * (0.6, 0.8) / 1 = (3, 4), norm 5 -> capped to (0.6, 0.8)
        v = target_velocity(0, world, params)
        assert v.x == pytest.approx(0.6, abs=1e-9)
        assert v.y == pytest.approx(0.8, abs=1e-9)

    def test_zero_force_zero_motion(self):
        params = EnvParams(beta_max=0.0)
        world = make_world([Vec2(0, 0)], [Vec2(10, 10)])
        assert target_velocity(0, world, params) == Vec2(0.0, 0.0)

    def test_below_cap_unchanged(self):
        params = EnvParams(mu=0.1, rho_t=5.0, v_t_max=1.0, beta_max=0.0)
        world = make_world([Vec2(1, 0)], [Vec2(0, 0)])
        v = target_velocity(0, world, params)
        assert v == Vec2(0.1, 0.0)

    def test_saturation_preserves_direction(self):
        rng = random.Random(14)
        params = EnvParams(mu=3.0, rho_t=5.0, v_t_max=0.8)
        for _ in range(300):
            world = make_world(
                [Vec2(rng.uniform(-2, 2), rng.uniform(-2, 2))],
                [Vec2(rng.uniform(-2, 2), rng.uniform(-2, 2))],
                beta=rng.uniform(0, 0.5), theta=rng.uniform(0, 6.28))
            try:
                v = target_velocity(0, world, params)
            except CoincidentAgentsError:
                continue
            f = herder_repulsion(world.targets[0], world.herders, params.mu,
                                 params.rho_t) + drift_vector(world.drifts[0])
            assert v.norm() <= params.v_t_max + 1e-9
            assert abs(v.dot(f) - v.norm() * f.norm()) < 1e-9


class TestClampHerderInput:
    def test_zero(self):
        assert clamp_herder_input(Vec2(0, 0), 1.0) == Vec2(0.0, 0.0)

    def test_above_cap(self):
        assert clamp_herder_input(Vec2(2, 0), 1.0) == Vec2(1.0, 0.0)

    def test_below_cap(self):
        assert clamp_herder_input(Vec2(1, 1), 2.0) == Vec2(1.0, 1.0)


class TestEnvStep:
    def test_stationary_fixed_point(self):
        params = EnvParams(beta_max=0.0, sim_dt=0.01)
        world = make_world([Vec2(1, 1)], [Vec2(9, 9)])
        nxt = env_step(world, [Vec2(0, 0)], params, random.Random(0))
        assert nxt.targets == world.targets
        assert nxt.herders == world.herders
        assert nxt.t == pytest.approx(0.01, abs=1e-15)

    def test_herder_euler_step(self):
        params = EnvParams(beta_max=0.0, sim_dt=0.1, drift_resample_dt=0.1)
        world = make_world([Vec2(50, 0)], [Vec2(0, 0)])
        nxt = env_step(world, [Vec2(1, 0)], params, random.Random(0))
        assert nxt.herders[0].x == pytest.approx(0.1, abs=1e-15)
        assert nxt.herders[0].y == 0.0

    def test_input_length_mismatch(self):
        params = EnvParams()
        world = make_world([Vec2(1, 1)], [Vec2(5, 5)])
        with pytest.raises(ValueError):
            env_step(world, [], params, random.Random(0))

    def test_replay_determinism(self):
        params = EnvParams()
        inputs = [Vec2(0.3, -0.2)]

        def run():
            rng = random.Random(77)
            world = make_world([Vec2(1, 0)], [Vec2(4, 4)], beta=0.2, theta=1.0)
            states = [world]
            for _ in range(500):
                world = env_step(world, inputs, params, rng)
                states.append(world)
            return states

        a, b = run(), run()
        assert a == b

    def test_pathwise_speed_bound(self):
        params = EnvParams(mu=2.0, rho_t=3.0, v_t_max=0.8)
        rng = random.Random(15)
        world = make_world([Vec2(1, 0), Vec2(-1, 2)],
                           [Vec2(0, 0), Vec2(2, 2)], beta=0.4, theta=0.3)
        world = WorldState(world.targets, world.herders,
                           world.drifts, 0.0)
        for _ in range(5000):
            inputs = [Vec2(rng.uniform(-2, 2), rng.uniform(-2, 2))
                      for _ in range(2)]
            nxt = env_step(world, inputs, params, rng)
            for before, after in zip(world.targets, nxt.targets):
                speed = (after - before).norm() / params.sim_dt
                assert speed <= params.v_t_max + 1e-9
            world = nxt

    def test_drift_resample_cadence(self):
        # sim_dt 0.01 and interval 0.1: the drift is redrawn every 10th step
        params = EnvParams(sim_dt=0.01, drift_resample_dt=0.1, beta_max=1.0)
        rng = random.Random(5)
        world = make_world([Vec2(0, 0)], [Vec2(9, 9)], beta=0.5, theta=0.1)
        current = world.drifts[0]
        for step in range(1, 41):
            world = env_step(world, [Vec2(0, 0)], params, rng)
            drift = world.drifts[0]
            if step % 10 == 0:
                assert drift.time_since_resample == 0.0
                assert (drift.beta, drift.theta) != (current.beta, current.theta)
                current = drift
            else:
                assert (drift.beta, drift.theta) == (current.beta, current.theta)
                current = drift


class TestInGoal:
    def test_center_inside(self):
        params = EnvParams()
        assert in_goal(params.x_g, params)

    def test_boundary_excluded(self):
        params = EnvParams(rho_g=1.5)
        assert not in_goal(Vec2(1.5, 0), params)

    def test_interior_point(self):
        params = EnvParams(rho_g=1.0)
        # |(0.5, 0.5)| = sqrt(0.5) ~ 0.707 < 1
        assert in_goal(Vec2(0.5, 0.5), params)


def test_env_params_validation_messages():
    errs = EnvParams(mu=-1.0, sim_dt=0.2, drift_resample_dt=0.1).validate()
    assert any("env.mu" in e for e in errs)
    assert any("sim_dt" in e for e in errs)
    assert EnvParams().validate() == []
