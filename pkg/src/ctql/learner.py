"""Dense tabular action values, the TD update, and the epsilon-greedy Q policy."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .discretizer import ActionSet, DiscreteState, StateGrid, flatten_state
from .fileio import atomic_write


@dataclass(frozen=True)
class LearnParams:
    alpha: float = 0.07    # learning rate, (0, 1]
    gamma: float = 0.99    # discount, [0, 1)
    epsilon: float = 0.3   # exploration probability, strictly inside (0, 1)

    def validate(self, prefix: str = "learn") -> list[str]:
        errs = []
        if not 0.0 < self.alpha <= 1.0:
            errs.append(f"{prefix}.alpha: got {self.alpha}, requires 0 < alpha <= 1")
        if not 0.0 <= self.gamma < 1.0:
            errs.append(f"{prefix}.gamma: got {self.gamma}, requires 0 <= gamma < 1")
        if not 0.0 < self.epsilon < 1.0:
            errs.append(f"{prefix}.epsilon: got {self.epsilon}, "
                        "requires 0 < epsilon < 1")
        return errs


class QTable:
    """Action values over the flattened state grid, one row per state."""

    def __init__(self, dims: tuple[int, int, int], n_actions: int,
                 init_value: float = 0.0):
        self.dims = tuple(dims)
        n_states = dims[0] * dims[1] * dims[2]
        self.values = np.full((n_states, n_actions), float(init_value))
        self.init_value = float(init_value)

    @classmethod
    def for_spaces(cls, grid: StateGrid, actions: ActionSet,
                   init_value: float = 0.0) -> "QTable":
        return cls(grid.dims, len(actions), init_value)

    @property
    def n_states(self) -> int:
        return self.values.shape[0]

    @property
    def n_actions(self) -> int:
        return self.values.shape[1]

    def index(self, s: DiscreteState | int) -> int:
        return s if isinstance(s, int) else flatten_state(s, self.dims)

    def row(self, s: DiscreteState | int) -> np.ndarray:
        return self.values[self.index(s)]

    def max_q(self, s: DiscreteState | int) -> float:
        return float(self.values[self.index(s)].max())

    def argmax(self, s: DiscreteState | int) -> int:
        # np.argmax takes the first maximum, which is the tie-break we want.
        return int(self.values[self.index(s)].argmax())

    def update(self, s, a: int, r: float, s_next,
               params: LearnParams) -> float:
        """One TD backup on entry (s, a); returns the new value."""
        si = self.index(s)
        target = r + params.gamma * self.max_q(s_next)
        old = self.values[si, a]
        new = old + params.alpha * (target - old)
        self.values[si, a] = new
        return float(new)

    def copy(self) -> "QTable":
        dup = QTable(self.dims, self.n_actions, self.init_value)
        dup.values[:] = self.values
        return dup

    def content_hash(self) -> str:
        return hashlib.sha256(self.values.tobytes()).hexdigest()


def _pi_q_tagged(table: QTable, s, epsilon: float, rng) -> tuple[int, bool]:
    if rng.random() < epsilon:
        return rng.randrange(table.n_actions), True
    return table.argmax(s), False


def pi_q(table: QTable, s, epsilon: float, rng) -> int:
    """Greedy action with probability 1-epsilon, else a uniform random one."""
    idx, _ = _pi_q_tagged(table, s, epsilon, rng)
    return idx


def save_qtable(path: str, table: QTable) -> None:
    """Text persistence: a dims header then one space-separated row per state.

    Values are written with repr so write -> read -> write is byte-identical.
    """
    with atomic_write(path) as handle:
        d0, d1, d2 = table.dims
        handle.write(f"{d0} {d1} {d2} {table.n_actions}\n")
        for row in table.values:
            handle.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_qtable(path: str) -> QTable:
    with open(path) as handle:
        header = handle.readline().split()
        if len(header) != 4:
            raise ValueError(f"{path}: malformed Q-table header {header!r}")
        d0, d1, d2, n_actions = (int(tok) for tok in header)
        table = QTable((d0, d1, d2), n_actions)
        for i in range(table.n_states):
            line = handle.readline()
            if not line:
                raise ValueError(f"{path}: expected {table.n_states} state rows, "
                                 f"found {i}")
            vals = line.split()
            if len(vals) != n_actions:
                raise ValueError(f"{path}: row {i} has {len(vals)} values, "
                                 f"expected {n_actions}")
            table.values[i] = [float(v) for v in vals]
        if handle.readline():
            raise ValueError(f"{path}: trailing data after "
                             f"{table.n_states} state rows")
    return table
