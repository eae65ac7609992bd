"""Compiled inner loops for the walk simulations.

All kernels draw randomness from a splitmix64 stream so that a (seed, trial)
pair fixes every decision bit-exactly, independent of thread count or
scheduling.  Seed derivation: stream k of base seed b starts from state
mix64(b + (k+1) * GOLDEN) and advances by the golden-ratio increment; mix64
is the standard splitmix64 finalizer.  Bounded draws use the modulo of a
64-bit output, whose bias (< range/2^64) is far below Monte Carlo noise for
any range used here.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

__all__ = [
    "derive_seed",
    "walk_snapshots",
    "walk_cover_time",
    "return_counts",
    "first_visit_counts",
]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_ONE = np.uint64(1)


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def _stream_start(seed, k):
    return _mix64(np.uint64(seed) + (np.uint64(k) + _ONE) * _GOLDEN)


@njit(cache=True, inline="always")
def _next_u64(state):
    s = state + _GOLDEN
    return s, _mix64(s)


@njit(cache=True)
def _derive(seed, k):
    return _stream_start(seed, k)


def derive_seed(seed: int, k: int) -> int:
    """Python-visible seed derivation, identical to the in-kernel streams."""
    return int(_derive(np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(k)))


@njit(cache=True, nogil=True)
def walk_snapshots(offsets, neighbors, slot_edge, num_edges, starts, snap_times, seed):
    """Run walkers round-robin and record the visited bitmap at given times.

    `starts` holds one entry per walker; `snap_times` are total step counts
    (summed over walkers), sorted ascending.  Returns the visited bitmaps at
    each snapshot, the vacant counts, the counts of never-traversed edges,
    and a status (0 ok, 1 stuck at a vertex with no outgoing slot).
    """
    n = len(offsets) - 1
    num_snaps = len(snap_times)
    k_walkers = len(starts)
    visited = np.zeros(n, np.uint8)
    edge_seen = np.zeros(num_edges, np.uint8)
    snaps = np.zeros((num_snaps, n), np.uint8)
    vacant_counts = np.zeros(num_snaps, np.int64)
    untraversed = np.zeros(num_snaps, np.int64)

    walkers = np.empty(k_walkers, np.int64)
    vacant = n
    for i in range(k_walkers):
        walkers[i] = starts[i]
        if visited[starts[i]] == 0:
            visited[starts[i]] = 1
            vacant -= 1
    edges_left = num_edges

    state = _stream_start(seed, np.uint64(0))
    t = np.int64(0)
    snap_i = 0
    while snap_i < num_snaps and snap_times[snap_i] <= t:
        snaps[snap_i, :] = visited
        vacant_counts[snap_i] = vacant
        untraversed[snap_i] = edges_left
        snap_i += 1
    t_max = snap_times[num_snaps - 1] if num_snaps > 0 else np.int64(0)

    w = 0
    while t < t_max:
        v = walkers[w]
        deg = offsets[v + 1] - offsets[v]
        if deg == 0:
            return snaps, vacant_counts, untraversed, 1
        state, bits = _next_u64(state)
        slot = offsets[v] + np.int64(bits % np.uint64(deg))
        if edge_seen[slot_edge[slot]] == 0:
            edge_seen[slot_edge[slot]] = 1
            edges_left -= 1
        u = neighbors[slot]
        if visited[u] == 0:
            visited[u] = 1
            vacant -= 1
        walkers[w] = u
        w += 1
        if w == k_walkers:
            w = 0
        t += 1
        while snap_i < num_snaps and snap_times[snap_i] <= t:
            snaps[snap_i, :] = visited
            vacant_counts[snap_i] = vacant
            untraversed[snap_i] = edges_left
            snap_i += 1
    return snaps, vacant_counts, untraversed, 0


@njit(cache=True, nogil=True)
def walk_cover_time(offsets, neighbors, start, seed, t_limit):
    """Steps until every vertex is visited, or -1 if t_limit is hit first."""
    n = len(offsets) - 1
    visited = np.zeros(n, np.uint8)
    visited[start] = 1
    vacant = n - 1
    v = start
    state = _stream_start(seed, np.uint64(0))
    t = np.int64(0)
    while vacant > 0:
        if t >= t_limit:
            return np.int64(-1)
        deg = offsets[v + 1] - offsets[v]
        state, bits = _next_u64(state)
        v = neighbors[offsets[v] + np.int64(bits % np.uint64(deg))]
        if visited[v] == 0:
            visited[v] = 1
            vacant -= 1
        t += 1
    return t


@njit(cache=True, nogil=True, parallel=True)
def return_counts(offsets, neighbors, v, horizon, trials, seed):
    """Visits to v during steps [0, horizon) of a walk started at v, per trial.

    The start counts as one visit.  Trial i uses stream i of `seed`, so the
    result is independent of the parallel schedule.
    """
    counts = np.zeros(trials, np.int64)
    for i in prange(trials):
        state = _stream_start(seed, np.uint64(i))
        pos = v
        c = np.int64(1)
        for _ in range(horizon - 1):
            deg = offsets[pos + 1] - offsets[pos]
            state, bits = _next_u64(state)
            pos = neighbors[offsets[pos] + np.int64(bits % np.uint64(deg))]
            if pos == v:
                c += 1
        counts[i] = c
    return counts


@njit(cache=True, nogil=True, parallel=True)
def first_visit_counts(offsets, neighbors, targets, burn_in, probe_times, trials, seed):
    """Count trials in which each target stays unvisited during [burn_in, probe).

    Each trial walks from a uniform start to the largest probe time, ignoring
    everything before `burn_in`.  Entry [a, b] of the result counts trials
    where target a was not visited at any step in [burn_in, probe_times[b]).
    Probe times must be ascending and larger than burn_in.
    """
    n = len(offsets) - 1
    num_targets = len(targets)
    num_probes = len(probe_times)
    t_max = probe_times[num_probes - 1]
    target_of = np.full(n, -1, np.int64)
    for a in range(num_targets):
        target_of[targets[a]] = a
    counts = np.zeros((num_targets, num_probes), np.int64)
    for i in prange(trials):
        state = _stream_start(seed, np.uint64(i))
        state, bits = _next_u64(state)
        pos = np.int64(bits % np.uint64(n))
        first_visit = np.full(num_targets, np.int64(1) << 62, np.int64)
        for t in range(1, t_max):
            deg = offsets[pos + 1] - offsets[pos]
            state, bits = _next_u64(state)
            pos = neighbors[offsets[pos] + np.int64(bits % np.uint64(deg))]
            if t >= burn_in:
                a = target_of[pos]
                if a >= 0 and first_visit[a] > t:
                    first_visit[a] = t
        local = np.zeros((num_targets, num_probes), np.int64)
        for a in range(num_targets):
            for b in range(num_probes):
                if first_visit[a] >= probe_times[b]:
                    local[a, b] = 1
        counts += local
    return counts
