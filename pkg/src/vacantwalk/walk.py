"""Random walk driver: snapshot runs, return/first-visit probes, niceness.

The heavy loops live in `_kernels`; this module validates inputs, owns the
dataclass results, and implements the structural vertex classifier used to
pick probe vertices (a vertex is "nice" when no short cycle passes within a
logarithmic radius of it, so its neighbourhood is locally tree-like and the
short-horizon return count approaches (r-1)/(r-2)).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graphs import Digraph, Graph

__all__ = [
    "WalkRun",
    "run_with_snapshots",
    "cover_time",
    "burn_in_steps",
    "ReturnEstimate",
    "estimate_returns",
    "UnvisitEstimate",
    "unvisit_probability",
    "NicenessReport",
    "classify_nice",
    "choose_nice_vertices",
]

_FAR = np.int64(1) << 60


@dataclass
class WalkRun:
    """Visited-set snapshots of one walk (or one bundle of round-robin walkers).

    `times` are total step counts summed over walkers.  `untraversed_edges[i]`
    counts edges (arcs, for a digraph) never crossed in either direction up to
    that time; for a regular graph it is half the number of unpaired
    half-edge points of the equivalent pairing construction.
    """

    n: int
    start: int
    k_walkers: int
    seed: int
    times: np.ndarray
    vacant_counts: np.ndarray
    untraversed_edges: np.ndarray
    bitmaps: np.ndarray | None = field(repr=False, default=None)

    def vacant_mask(self, i: int) -> np.ndarray:
        if self.bitmaps is None:
            raise ValueError("run was made with keep_bitmaps=False")
        return self.bitmaps[i] == 0


def _adjacency(graph):
    if isinstance(graph, Graph):
        return graph.offsets, graph.neighbors, graph.slot_edge, graph.m
    if isinstance(graph, Digraph):
        return graph.out_offsets, graph.out_targets, graph.slot_arc, graph.m
    raise TypeError(f"expected Graph or Digraph, got {type(graph).__name__}")


def run_with_snapshots(
    graph,
    start: int,
    times,
    seed: int,
    k_walkers: int = 1,
    keep_bitmaps: bool = True,
) -> WalkRun:
    """Walk to the largest requested time, recording the visited set at each.

    `times` must be non-negative and strictly increasing.  All walkers start
    at `start` and step in round-robin order; time counts individual steps, so
    k walkers at bundle time t have taken t steps in total.
    """
    offsets, neighbors, slot_edge, m = _adjacency(graph)
    n = len(offsets) - 1
    if not 0 <= start < n:
        raise ValueError(f"start vertex {start} out of range")
    if k_walkers < 1:
        raise ValueError("need at least one walker")
    times = np.asarray(times, dtype=np.int64)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("need at least one snapshot time")
    if times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ValueError("snapshot times must be non-negative and strictly increasing")
    starts = np.full(k_walkers, start, dtype=np.int64)
    snaps, vacant_counts, untraversed, status = _kernels.walk_snapshots(
        offsets, neighbors, slot_edge, m, starts, times, np.uint64(seed & _U64)
    )
    if status != 0:
        raise RuntimeError("walk reached a vertex with no outgoing edge")
    return WalkRun(
        n=n,
        start=start,
        k_walkers=k_walkers,
        seed=seed,
        times=times,
        vacant_counts=vacant_counts,
        untraversed_edges=untraversed,
        bitmaps=snaps if keep_bitmaps else None,
    )


_U64 = 0xFFFFFFFFFFFFFFFF


def cover_time(graph, start: int, seed: int, t_limit: int | None = None) -> int:
    """Number of steps until every vertex has been visited.

    Raises if `t_limit` (default 10000 * n * log(n)) is exceeded, which on a
    connected graph indicates something is deeply wrong.
    """
    offsets, neighbors, _, _ = _adjacency(graph)
    n = len(offsets) - 1
    if not 0 <= start < n:
        raise ValueError(f"start vertex {start} out of range")
    if t_limit is None:
        t_limit = int(10000 * n * max(math.log(max(n, 2)), 1.0))
    t = _kernels.walk_cover_time(
        offsets, neighbors, start, np.uint64(seed & _U64), t_limit
    )
    if t < 0:
        raise RuntimeError(f"graph not covered within {t_limit} steps")
    return int(t)


def burn_in_steps(n: int, model: str = "regular") -> int:
    """Steps to walk before the visit process looks stationary.

    ceil(120 log10 n) for regular graphs, ceil(10 log10 n) for the denser
    G(n,p)/D(n,p) models.  Both are far beyond the mixing time (the spectral
    gap of these graphs is bounded away from zero, so mixing takes O(log n)
    steps with a small constant), while staying short enough that the
    stationary background Tπ_v inflates the measured return count by well
    under the tolerance used by the first-visit probes.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if model == "regular":
        return math.ceil(120.0 * math.log10(n))
    if model in ("gnp", "dnp"):
        return math.ceil(10.0 * math.log10(n))
    raise ValueError(f"unknown model {model!r}")


@dataclass(frozen=True)
class ReturnEstimate:
    vertex: int
    horizon: int
    trials: int
    mean: float
    stderr: float


def estimate_returns(
    graph, vertex: int, horizon: int, trials: int, seed: int
) -> ReturnEstimate:
    """Monte Carlo estimate of the expected visits to `vertex` in [0, horizon).

    Walks start at the vertex itself and the start counts as a visit, so the
    estimate is >= 1.
    """
    offsets, neighbors, _, _ = _adjacency(graph)
    n = len(offsets) - 1
    if not 0 <= vertex < n:
        raise ValueError(f"vertex {vertex} out of range")
    if horizon < 1 or trials < 1:
        raise ValueError("need horizon >= 1 and trials >= 1")
    counts = _kernels.return_counts(
        offsets, neighbors, vertex, horizon, trials, np.uint64(seed & _U64)
    )
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return ReturnEstimate(
        vertex=vertex, horizon=horizon, trials=trials, mean=mean, stderr=stderr
    )


@dataclass(frozen=True)
class UnvisitEstimate:
    """Empirical probability that each target is unvisited during [burn_in, t).

    probs[a, b] estimates the chance that target a sees no visit at any step
    in [burn_in, probe_times[b]), for a walk from a uniform start.
    """

    targets: np.ndarray
    burn_in: int
    probe_times: np.ndarray
    trials: int
    probs: np.ndarray
    stderr: np.ndarray


def unvisit_probability(
    graph, targets, burn_in: int, probe_times, trials: int, seed: int
) -> UnvisitEstimate:
    offsets, neighbors, _, _ = _adjacency(graph)
    n = len(offsets) - 1
    targets = np.asarray(targets, dtype=np.int64)
    probe_times = np.asarray(probe_times, dtype=np.int64)
    if len(targets) == 0 or len(np.unique(targets)) != len(targets):
        raise ValueError("targets must be non-empty and distinct")
    if targets.min() < 0 or targets.max() >= n:
        raise ValueError("target vertex out of range")
    if burn_in < 1:
        raise ValueError("burn_in must be >= 1")
    if probe_times[0] <= burn_in or np.any(np.diff(probe_times) <= 0):
        raise ValueError("probe times must be strictly increasing and > burn_in")
    if trials < 2:
        raise ValueError("need at least two trials")
    counts = _kernels.first_visit_counts(
        offsets, neighbors, targets, burn_in, probe_times, trials, np.uint64(seed & _U64)
    )
    probs = counts / float(trials)
    stderr = np.sqrt(probs * (1.0 - probs) / trials)
    return UnvisitEstimate(
        targets=targets,
        burn_in=burn_in,
        probe_times=probe_times,
        trials=trials,
        probs=probs,
        stderr=stderr,
    )


# ---------------------------------------------------------------------------
# niceness classifier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NicenessReport:
    """Which vertices are far from every short cycle.

    A cycle is short when its length is at most `threshold` = eps1 * log_r(n);
    a vertex is nice when its distance to every short cycle is at least the
    threshold.  `cycle_dist[v]` is the hop distance from v to the nearest
    vertex lying on a short cycle (a large sentinel when none is within
    reach), so nice == (cycle_dist >= threshold).
    """

    threshold: float
    cycle_limit: int
    nice: np.ndarray
    cycle_dist: np.ndarray

    @property
    def num_nice(self) -> int:
        return int(self.nice.sum())


def classify_nice(graph: Graph, eps1: float) -> NicenessReport:
    if not 0.0 < eps1 < 1.0:
        raise ValueError("eps1 must be in (0, 1)")
    degs = graph.degrees
    if len(degs) == 0 or degs.min() != degs.max() or degs[0] < 3:
        raise ValueError("niceness is defined for r-regular graphs with r >= 3")
    r = int(degs[0])
    n = graph.n
    threshold = eps1 * math.log(n) / math.log(r)
    cycle_limit = math.floor(threshold)

    if cycle_limit < 1:
        cycle_dist = np.full(n, _FAR, dtype=np.int64)
        return NicenessReport(
            threshold=threshold,
            cycle_limit=cycle_limit,
            nice=np.ones(n, dtype=bool),
            cycle_dist=cycle_dist,
        )

    on_cycle = _short_cycle_members(graph, cycle_limit)
    cycle_dist = _multi_source_distances(
        graph, np.flatnonzero(on_cycle), depth_limit=math.ceil(threshold)
    )
    nice = cycle_dist >= threshold
    return NicenessReport(
        threshold=threshold,
        cycle_limit=cycle_limit,
        nice=nice,
        cycle_dist=cycle_dist,
    )


def _short_cycle_members(graph: Graph, limit: int) -> np.ndarray:
    """Mark vertices lying on some cycle of length <= limit.

    Shortest-cycle-through-v search: BFS from v labels every vertex with the
    branch (first edge out of v) it was reached through; an edge joining two
    different branches at depths da and db closes a simple cycle of length
    da + db + 1 through v.  A slot pointing back at v closes one of length
    da + 1 (length 1 is a self-loop), and two slots of v reaching the same
    neighbour are a parallel pair (length 2).  The edge a vertex was
    discovered through is never re-crossed.
    """
    offsets, neighbors, slot_edge = graph.offsets, graph.neighbors, graph.slot_edge
    n = graph.n
    on_cycle = np.zeros(n, dtype=bool)
    dist = np.full(n, -1, dtype=np.int64)
    branch = np.full(n, -1, dtype=np.int64)
    depth_cap = limit // 2 + 1
    for v in range(n):
        found = False
        touched = [v]
        dist[v] = 0
        queue = deque([(v, -1)])
        while queue and not found:
            a, in_edge = queue.popleft()
            da = int(dist[a])
            for s in range(offsets[a], offsets[a + 1]):
                e = int(slot_edge[s])
                if e == in_edge:
                    continue
                b = int(neighbors[s])
                if b == v:
                    if da + 1 <= limit:  # cycle closed at the root
                        found = True
                        break
                elif dist[b] >= 0:
                    # already discovered: a cross edge between branches closes
                    # a cycle through v (a == v means two root slots meeting)
                    if (a == v or branch[b] != branch[a]) and da + dist[b] + 1 <= limit:
                        found = True
                        break
                elif da + 1 <= depth_cap:
                    dist[b] = da + 1
                    branch[b] = s if a == v else branch[a]
                    touched.append(b)
                    queue.append((b, e))
        for w in touched:
            dist[w] = -1
            branch[w] = -1
        on_cycle[v] = found
    return on_cycle


def _multi_source_distances(graph: Graph, sources, depth_limit: int) -> np.ndarray:
    dist = np.full(graph.n, _FAR, dtype=np.int64)
    queue = deque()
    for v in sources:
        dist[v] = 0
        queue.append(int(v))
    offsets, neighbors = graph.offsets, graph.neighbors
    while queue:
        a = queue.popleft()
        if dist[a] >= depth_limit:
            continue
        for s in range(offsets[a], offsets[a + 1]):
            b = neighbors[s]
            if dist[b] > dist[a] + 1:
                dist[b] = dist[a] + 1
                queue.append(int(b))
    return dist


def choose_nice_vertices(
    graph: Graph, count: int, eps1: float, seed: int
) -> np.ndarray:
    """Uniform sample of `count` distinct nice vertices."""
    report = classify_nice(graph, eps1)
    pool = np.flatnonzero(report.nice)
    if len(pool) < count:
        raise ValueError(f"only {len(pool)} nice vertices, wanted {count}")
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(pool, size=count, replace=False))
