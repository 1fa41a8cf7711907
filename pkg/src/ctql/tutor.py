"""The control tutor: a rough target model, a quadratic goal-distance
certificate, the velocity-tracking feedback law, and its epsilon-greedy
projection onto the discrete action set."""

from __future__ import annotations

from dataclasses import dataclass

from .discretizer import ActionSet, nearest_action
from .geometry import ZERO, Vec2


@dataclass(frozen=True)
class TutorParams:
    delta: float = 0.5        # surrogate coupling intensity, 1/s
    rho_t_hat: float = 2.0    # conservative influence-radius estimate, m
    k: float = 2.0            # feedback gain, must exceed 1
    epsilon: float = 0.3      # exploration probability (shared with the learner)

    def validate(self, prefix: str = "tutor") -> list[str]:
        errs = []
        if not self.k > 1.0:
            errs.append(f"{prefix}.k: got {self.k}, requires k > 1")
        if not self.delta > 0.0:
            errs.append(f"{prefix}.delta: got {self.delta}, requires delta > 0")
        if not self.rho_t_hat > 0.0:
            errs.append(f"{prefix}.rho_t_hat: got {self.rho_t_hat}, "
                        "requires rho_t_hat > 0")
        return errs


def surrogate_velocity(x_t: Vec2, x_h: Vec2, params: TutorParams) -> Vec2:
    """Target velocity under the tutor's rough model: linear repulsion from
    the herder, active only inside the estimated influence radius."""
    rel = x_t - x_h
    if rel.norm() < params.rho_t_hat:
        return rel * params.delta
    return ZERO


def lyapunov_value(x_t: Vec2, x_g: Vec2) -> float:
    """Half the squared distance to the goal center."""
    rel = x_t - x_g
    return 0.5 * rel.dot(rel)


def lyapunov_rate(x_t: Vec2, x_h: Vec2, x_g: Vec2, delta: float) -> float:
    """Analytic time-derivative of the certificate under the surrogate model
    with the coupling active; negative iff (x_t - x_g) . (x_t - x_h) < 0."""
    return delta * (x_t - x_g).dot(x_t - x_h)


class VelocityEstimator:
    """Finite-difference observer of a tracked position stream."""

    __slots__ = ("prev_position", "prev_time")

    def __init__(self):
        self.prev_position: Vec2 | None = None
        self.prev_time: float | None = None

    def estimate(self, x_t: Vec2, t: float, fallback: Vec2) -> Vec2:
        """Velocity from the last observation, or `fallback` on the first call."""
        if self.prev_position is None:
            out = fallback
        else:
            dt = t - self.prev_time
            if dt <= 0.0:
                raise ValueError(
                    f"observation time must advance: {self.prev_time} -> {t}")
            out = (x_t - self.prev_position) * (1.0 / dt)
        self.prev_position = x_t
        self.prev_time = t
        return out


def tutor_control(xdot_t: Vec2, params: TutorParams) -> Vec2:
    """Feedback law: track the target's velocity with gain k."""
    return xdot_t * params.k


def _pi_t_tagged(v: Vec2, actions: ActionSet, epsilon: float,
                 rng) -> tuple[int, bool]:
    if rng.random() < epsilon:
        return rng.randrange(len(actions)), True
    return nearest_action(v, actions), False


def pi_t(v: Vec2, actions: ActionSet, epsilon: float, rng) -> int:
    """Project the tutor's suggestion onto the action set with probability
    1-epsilon, else pick a uniform random action."""
    idx, _ = _pi_t_tagged(v, actions, epsilon, rng)
    return idx
