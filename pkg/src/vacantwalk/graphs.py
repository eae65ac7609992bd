"""Random graph generators and the compressed adjacency containers.

Three models:

* random r-regular multigraphs/simple graphs via a uniform pairing of r*n
  half-edge points (configuration model), with rejection until simple;
* Erdos-Renyi G(n, p), sampled in O(edges) by geometric skipping over the
  linearised pair index space;
* the directed variant D(n, p) over ordered pairs, plus the projection to
  its underlying undirected graph.

Graphs keep both the flat edge list (one row per edge, loops as u == v) and
a CSR adjacency built from it.  `slot_edge` maps every CSR slot back to its
edge row so a walk can mark an edge traversed no matter which direction it
crosses it.  Multigraph convention: a self-loop occupies two slots of its
endpoint (it contributes 2 to the degree, and a walk picks it with
probability 2/r on an r-regular multigraph); parallel edges get one edge row
each.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "Digraph",
    "RegularParams",
    "GnpParams",
    "DnpParams",
    "random_pairing",
    "pairing_edges",
    "generate_regular",
    "sample_configuration",
    "generate_gnp",
    "generate_dnp",
    "underlying_graph",
]

_SIMPLE_ATTEMPT_CAP = 1000


@dataclass
class Graph:
    """Undirected multigraph with flat edge list plus CSR adjacency."""

    n: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    offsets: np.ndarray = field(init=False, repr=False)
    neighbors: np.ndarray = field(init=False, repr=False)
    slot_edge: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.edge_u = np.ascontiguousarray(self.edge_u, dtype=np.int64)
        self.edge_v = np.ascontiguousarray(self.edge_v, dtype=np.int64)
        if self.edge_u.shape != self.edge_v.shape:
            raise ValueError("edge endpoint arrays must have equal length")
        if len(self.edge_u) and (
            self.edge_u.min() < 0
            or self.edge_v.min() < 0
            or max(self.edge_u.max(), self.edge_v.max()) >= self.n
        ):
            raise ValueError("edge endpoint out of range")
        self.offsets, self.neighbors, self.slot_edge = _build_csr(
            self.n, self.edge_u, self.edge_v
        )

    @property
    def m(self) -> int:
        return len(self.edge_u)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors_of(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v] : self.offsets[v + 1]]

    def is_simple(self) -> bool:
        if len(self.edge_u) == 0:
            return True
        if np.any(self.edge_u == self.edge_v):
            return False
        lo = np.minimum(self.edge_u, self.edge_v)
        hi = np.maximum(self.edge_u, self.edge_v)
        return len(np.unique(lo * self.n + hi)) == self.m


@dataclass
class Digraph:
    """Directed graph with flat arc list plus out-adjacency in CSR form."""

    n: int
    arc_u: np.ndarray
    arc_v: np.ndarray
    out_offsets: np.ndarray = field(init=False, repr=False)
    out_targets: np.ndarray = field(init=False, repr=False)
    slot_arc: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.arc_u = np.ascontiguousarray(self.arc_u, dtype=np.int64)
        self.arc_v = np.ascontiguousarray(self.arc_v, dtype=np.int64)
        if self.arc_u.shape != self.arc_v.shape:
            raise ValueError("arc endpoint arrays must have equal length")
        if len(self.arc_u) and (
            self.arc_u.min() < 0
            or self.arc_v.min() < 0
            or max(self.arc_u.max(), self.arc_v.max()) >= self.n
        ):
            raise ValueError("arc endpoint out of range")
        order = np.argsort(self.arc_u, kind="stable")
        deg = np.bincount(self.arc_u, minlength=self.n)
        self.out_offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg, out=self.out_offsets[1:])
        self.out_targets = np.ascontiguousarray(self.arc_v[order], dtype=np.int32)
        self.slot_arc = np.ascontiguousarray(order, dtype=np.int64)

    @property
    def m(self) -> int:
        return len(self.arc_u)

    @property
    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_offsets)


def _build_csr(n, edge_u, edge_v):
    src = np.concatenate([edge_u, edge_v])
    dst = np.concatenate([edge_v, edge_u])
    eid = np.concatenate([np.arange(len(edge_u)), np.arange(len(edge_u))])
    order = np.argsort(src, kind="stable")
    deg = np.bincount(src, minlength=n)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=offsets[1:])
    neighbors = np.ascontiguousarray(dst[order], dtype=np.int32)
    slot_edge = np.ascontiguousarray(eid[order], dtype=np.int64)
    return offsets, neighbors, slot_edge


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegularParams:
    n: int
    r: int
    simple: bool = True

    def __post_init__(self) -> None:
        if int(self.r) != self.r or self.r < 3:
            raise ValueError(f"degree r must be an integer >= 3, got {self.r!r}")
        if (self.n * self.r) % 2 != 0:
            raise ValueError(f"n*r must be even, got n={self.n}, r={self.r}")
        if self.simple and self.n <= self.r:
            raise ValueError("a simple r-regular graph needs n > r")
        if self.n < 1:
            raise ValueError("need n >= 1")


@dataclass(frozen=True)
class GnpParams:
    n: int
    p: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need n >= 2")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"probability p must be in [0, 1], got {self.p}")


@dataclass(frozen=True)
class DnpParams:
    n: int
    p: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need n >= 2")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"probability p must be in [0, 1], got {self.p}")


# ---------------------------------------------------------------------------
# configuration model
# ---------------------------------------------------------------------------


def random_pairing(num_points: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform perfect matching of `num_points` points.

    Returns `mate` with mate[mate[x]] == x.  A uniform permutation read off in
    consecutive pairs hits every matching equally often.
    """
    if num_points % 2 != 0 or num_points < 0:
        raise ValueError("number of points must be even and >= 0")
    perm = rng.permutation(num_points)
    mate = np.empty(num_points, dtype=np.int64)
    mate[perm[0::2]] = perm[1::2]
    mate[perm[1::2]] = perm[0::2]
    return mate


def pairing_edges(mate: np.ndarray, cell_of_point: np.ndarray):
    """Contract a perfect matching of points to edge endpoint arrays."""
    x = np.flatnonzero(mate > np.arange(len(mate)))
    return cell_of_point[x], cell_of_point[mate[x]]


def generate_regular(params: RegularParams, seed: int) -> Graph:
    """Uniform random r-regular graph on n vertices.

    With simple=True, pairings are rejected until the contracted graph has no
    loops or parallel edges (uniform over simple r-regular graphs); gives up
    after 1000 attempts.  With simple=False the first multigraph is returned.
    """
    rng = np.random.default_rng(seed)
    cell = np.repeat(np.arange(params.n, dtype=np.int64), params.r)
    for _ in range(_SIMPLE_ATTEMPT_CAP):
        mate = random_pairing(params.n * params.r, rng)
        eu, ev = pairing_edges(mate, cell)
        g = Graph(n=params.n, edge_u=eu, edge_v=ev)
        if not params.simple or g.is_simple():
            return g
    raise RuntimeError(
        f"no simple pairing found in {_SIMPLE_ATTEMPT_CAP} attempts "
        f"(n={params.n}, r={params.r})"
    )


def sample_configuration(degrees, seed: int) -> Graph:
    """Uniform configuration-model multigraph with the given degree sequence.

    Pairs the sum(degrees) half-edge points uniformly and contracts; loops and
    parallel edges are kept.
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    if len(degrees) == 0:
        raise ValueError("degree sequence must be non-empty")
    if degrees.min() < 0:
        raise ValueError("degrees must be >= 0")
    if int(degrees.sum()) % 2 != 0:
        raise ValueError("degree sum must be even")
    rng = np.random.default_rng(seed)
    cell = np.repeat(np.arange(len(degrees), dtype=np.int64), degrees)
    mate = random_pairing(int(degrees.sum()), rng)
    eu, ev = pairing_edges(mate, cell)
    return Graph(n=len(degrees), edge_u=eu, edge_v=ev)


# ---------------------------------------------------------------------------
# Erdos-Renyi models
# ---------------------------------------------------------------------------


def _skip_positions(rng: np.random.Generator, p: float, total: int) -> np.ndarray:
    """Sorted positions of successes among `total` Bernoulli(p) slots.

    Jumps between successes with geometric gaps, so the cost is proportional
    to the number of successes, not to `total`.
    """
    if total <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    picks = []
    pos = -1
    while pos < total:
        block = int((total - pos) * p) + 16
        gaps = rng.geometric(p, size=min(block, 8_000_000))
        here = pos + np.cumsum(gaps)
        take = here[here < total]
        picks.append(take)
        if len(take) < len(here):
            break
        pos = int(here[-1])
    return np.concatenate(picks)


def generate_gnp(params: GnpParams, seed: int) -> Graph:
    """Erdos-Renyi graph G(n, p): each unordered pair is an edge independently.

    Warns when np/log(n) <= 1, where the walk-length schedule of `theory` is
    not meaningful.
    """
    n, p = params.n, params.p
    c = n * p / np.log(n)
    if c <= 1.0:
        warnings.warn(
            f"G(n,p) with np/log(n) = {c:.3f} <= 1 is outside the connected "
            "regime assumed by the walk-length schedule",
            stacklevel=2,
        )
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    ks = _skip_positions(rng, p, total)
    # invert the row-major upper-triangle index: row i starts at i(2n-i-1)/2
    row_start = (np.arange(n, dtype=np.int64) * (2 * n - np.arange(n, dtype=np.int64) - 1)) // 2
    i = np.searchsorted(row_start, ks, side="right") - 1
    j = ks - row_start[i] + i + 1
    return Graph(n=n, edge_u=i, edge_v=j)


def generate_dnp(params: DnpParams, seed: int) -> Digraph:
    """Directed Erdos-Renyi graph D(n, p) over ordered pairs (no self-arcs)."""
    n, p = params.n, params.p
    rng = np.random.default_rng(seed)
    total = n * (n - 1)
    ks = _skip_positions(rng, p, total)
    i = ks // (n - 1)
    rem = ks - i * (n - 1)
    j = rem + (rem >= i)
    return Digraph(n=n, arc_u=i, arc_v=j)


def underlying_graph(d: Digraph) -> Graph:
    """Undirected projection: arcs u->v and v->u collapse to one edge {u, v}."""
    lo = np.minimum(d.arc_u, d.arc_v)
    hi = np.maximum(d.arc_u, d.arc_v)
    key = np.unique(lo * d.n + hi)
    return Graph(n=d.n, edge_u=key // d.n, edge_v=key % d.n)
