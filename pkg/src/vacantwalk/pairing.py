"""Walk-coupled construction of a random regular multigraph.

Instead of sampling the graph first and walking it afterwards, the pairing
state builds the uniform configuration-model pairing lazily, one half-edge at
a time, exactly where the walk needs it: at each step the walker picks one of
the r points of its current cell; if that point is still unpaired it gets
matched with a uniform unpaired point and the walker crosses the new edge,
otherwise the walker re-crosses the already established edge.  At any stop
time, the revealed pairs plus an independent uniform pairing of the leftover
points form a uniform pairing of all r*n points, so `finalize_pairing` yields
an unbiased configuration-model multigraph consistent with the walk prefix.

The vacancy criterion is purely local: a cell is vacant exactly when all r of
its points are unpaired (valid from the first step on; at time zero the start
cell is visited but still has all points unpaired).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, pairing_edges

__all__ = ["PairingState", "finalize_pairing"]


@dataclass
class PairingState:
    n: int
    r: int
    start: int
    seed: int
    record: bool = False
    time: int = field(init=False, default=0)
    current: int = field(init=False)
    mate: np.ndarray = field(init=False, repr=False)
    unpaired_in_cell: np.ndarray = field(init=False, repr=False)
    trajectory: list = field(init=False, repr=False)
    _pool: np.ndarray = field(init=False, repr=False)
    _pos: np.ndarray = field(init=False, repr=False)
    _size: int = field(init=False, repr=False)
    _rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if int(self.r) != self.r or self.r < 3:
            raise ValueError(f"degree r must be an integer >= 3, got {self.r!r}")
        if (self.n * self.r) % 2 != 0:
            raise ValueError("n*r must be even")
        if not 0 <= self.start < self.n:
            raise ValueError(f"start vertex {self.start} out of range")
        points = self.n * self.r
        self.current = self.start
        self.mate = np.full(points, -1, dtype=np.int64)
        self.unpaired_in_cell = np.full(self.n, self.r, dtype=np.int64)
        self._pool = np.arange(points, dtype=np.int64)
        self._pos = np.arange(points, dtype=np.int64)
        self._size = points
        self._rng = np.random.default_rng(self.seed)
        self.trajectory = [self.start] if self.record else []

    @property
    def unpaired_count(self) -> int:
        return self._size

    @property
    def pairs_formed(self) -> int:
        return (self.n * self.r - self._size) // 2

    def _remove(self, x: int) -> None:
        # swap-remove keeps uniform O(1) sampling over the unpaired points
        i = self._pos[x]
        last = self._pool[self._size - 1]
        self._pool[i] = last
        self._pos[last] = i
        self._pos[x] = -1
        self._size -= 1

    def step(self) -> int:
        """Advance the walker one step, revealing at most one new pair."""
        x = self.current * self.r + int(self._rng.integers(self.r))
        y = int(self.mate[x])
        if y < 0:
            self._remove(x)
            if self._size == 0:
                raise RuntimeError("no unpaired point left to match")
            y = int(self._pool[self._rng.integers(self._size)])
            self._remove(y)
            self.mate[x] = y
            self.mate[y] = x
            self.unpaired_in_cell[x // self.r] -= 1
            self.unpaired_in_cell[y // self.r] -= 1
        self.current = y // self.r
        self.time += 1
        if self.record:
            self.trajectory.append(self.current)
        return self.current

    def run(self, steps: int) -> int:
        for _ in range(steps):
            self.step()
        return self.current

    def is_vacant(self, v: int) -> bool:
        return bool(self.unpaired_in_cell[v] == self.r)

    def vacant_mask(self) -> np.ndarray:
        return self.unpaired_in_cell == self.r

    def vacant_count(self) -> int:
        return int((self.unpaired_in_cell == self.r).sum())


def finalize_pairing(state: PairingState, seed: int) -> Graph:
    """Pair the leftover points uniformly and contract to a multigraph.

    Completes `state.mate` in place (the state is fully paired afterwards)
    using a fresh generator seeded with `seed`, then returns the multigraph of
    all pairs, revealed and fresh alike.
    """
    rng = np.random.default_rng(seed)
    left = state._pool[: state._size].copy()
    perm = rng.permutation(len(left))
    shuffled = left[perm]
    a, b = shuffled[0::2], shuffled[1::2]
    state.mate[a] = b
    state.mate[b] = a
    for x in shuffled:
        state.unpaired_in_cell[x // state.r] -= 1
    state._pos[left] = -1
    state._size = 0
    cell = np.arange(state.n * state.r, dtype=np.int64) // state.r
    eu, ev = pairing_edges(state.mate, cell)
    return Graph(n=state.n, edge_u=eu, edge_v=ev)
