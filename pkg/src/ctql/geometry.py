"""Planar vector primitives shared by every simulation component."""

from __future__ import annotations

import math
from typing import NamedTuple

TWO_PI = 2.0 * math.pi


class Vec2(NamedTuple):
    """Immutable planar vector; meters for positions, m/s for velocities."""

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, factor: float) -> "Vec2":
        return Vec2(self.x * factor, self.y * factor)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def angle(self) -> float:
        """Direction in [0, 2*pi). Raises for the zero vector, which has none."""
        if self.x == 0.0 and self.y == 0.0:
            raise ValueError("angle of the zero vector is undefined")
        a = math.atan2(self.y, self.x)
        return a + TWO_PI if a < 0.0 else a


ZERO = Vec2(0.0, 0.0)


def unit(v: Vec2) -> Vec2:
    n = v.norm()
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return Vec2(v.x / n, v.y / n)


def clamp_norm(v: Vec2, cap: float) -> Vec2:
    """Rescale v onto the disk of radius cap; direction is preserved."""
    n = v.norm()
    if n <= cap:
        return v
    return Vec2(v.x * cap / n, v.y * cap / n)


def from_polar(magnitude: float, angle: float) -> Vec2:
    return Vec2(magnitude * math.cos(angle), magnitude * math.sin(angle))


def rotated(v: Vec2, angle: float) -> Vec2:
    """v rotated counterclockwise by `angle` radians."""
    c = math.cos(angle)
    s = math.sin(angle)
    return Vec2(c * v.x - s * v.y, s * v.x + c * v.y)
