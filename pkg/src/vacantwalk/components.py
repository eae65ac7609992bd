"""Component structure of the vacant (unvisited) induced subgraph.

The decomposition keeps multigraph semantics: a self-loop never connects
anything but does count as an edge of its component, and parallel edges count
once for connectivity but with multiplicity in the edge totals.  A component
is a tree exactly when its edge count is its size minus one, unicyclic when
the two are equal, and complex beyond that.

Snapshots compress the size distribution: per-kind counts are kept exactly up
to `k_cap` vertices, and every larger component is listed individually, so
criteria about small trees and about the one or two largest components both
work without storing a full labelling per snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .graphs import Digraph, Graph

__all__ = [
    "ComponentDecomposition",
    "decompose_vacant",
    "decompose_vacant_strong",
    "vacant_degree_histogram",
    "VacantSnapshot",
    "snapshot_statistics",
    "KIND_TREE",
    "KIND_UNICYCLIC",
    "KIND_COMPLEX",
]

KIND_TREE = 0
KIND_UNICYCLIC = 1
KIND_COMPLEX = 2


@dataclass
class ComponentDecomposition:
    """Components of the subgraph induced by the vacant vertices.

    `sizes` is sorted descending; `edge_counts` (absent for strong
    decompositions) and `kinds` align with it.  `labels` maps each vertex to
    its component index in that order, -1 for visited vertices.
    """

    num_components: int
    sizes: np.ndarray
    edge_counts: np.ndarray | None
    kinds: np.ndarray | None
    labels: np.ndarray = field(repr=False)

    @property
    def largest(self) -> int:
        return int(self.sizes[0]) if self.num_components else 0

    @property
    def second_largest(self) -> int:
        return int(self.sizes[1]) if self.num_components > 1 else 0


def _vacant_mask(n: int, visited) -> np.ndarray:
    visited = np.asarray(visited)
    if visited.shape != (n,):
        raise ValueError(f"visited mask must have shape ({n},)")
    return visited == 0 if visited.dtype != bool else ~visited


def decompose_vacant(graph: Graph, visited) -> ComponentDecomposition:
    """Connected components of the vacant-induced subgraph of an undirected graph."""
    vacant = _vacant_mask(graph.n, visited)
    keep = vacant[graph.edge_u] & vacant[graph.edge_v]
    eu = graph.edge_u[keep]
    ev = graph.edge_v[keep]
    raw = _raw_labels(graph.n, eu, ev, directed=False)
    return _assemble(graph.n, vacant, raw, eu, with_edges=True)


def decompose_vacant_strong(d: Digraph, visited) -> ComponentDecomposition:
    """Strongly connected components of the vacant-induced subgraph of a digraph."""
    vacant = _vacant_mask(d.n, visited)
    keep = vacant[d.arc_u] & vacant[d.arc_v]
    au = d.arc_u[keep]
    av = d.arc_v[keep]
    raw = _raw_labels(d.n, au, av, directed=True)
    return _assemble(d.n, vacant, raw, None, with_edges=False)


def _raw_labels(n, eu, ev, directed):
    mat = sparse.coo_matrix(
        (np.ones(len(eu), dtype=np.int8), (eu, ev)), shape=(n, n)
    ).tocsr()
    _, labels = csgraph.connected_components(
        mat, directed=directed, connection="strong" if directed else "weak"
    )
    return labels


def _assemble(n, vacant, raw_labels, eu, with_edges):
    # visited vertices are isolated in the filtered matrix, so their raw
    # components contain no vacant vertex and drop out here
    vacant_idx = np.flatnonzero(vacant)
    raw_sizes = np.bincount(raw_labels[vacant_idx], minlength=raw_labels.max() + 1 if n else 0)
    alive = np.flatnonzero(raw_sizes > 0)
    order = alive[np.argsort(raw_sizes[alive], kind="stable")[::-1]]
    sizes = raw_sizes[order]
    remap = np.full(len(raw_sizes), -1, dtype=np.int64)
    remap[order] = np.arange(len(order))
    labels = np.where(vacant, remap[raw_labels], -1)

    edge_counts = None
    kinds = None
    if with_edges:
        raw_edges = np.bincount(raw_labels[eu], minlength=len(raw_sizes))
        edge_counts = raw_edges[order]
        kinds = np.full(len(order), KIND_COMPLEX, dtype=np.int8)
        kinds[edge_counts == sizes - 1] = KIND_TREE
        kinds[edge_counts == sizes] = KIND_UNICYCLIC
    return ComponentDecomposition(
        num_components=len(order),
        sizes=sizes.astype(np.int64),
        edge_counts=None if edge_counts is None else edge_counts.astype(np.int64),
        kinds=kinds,
        labels=labels,
    )


def vacant_degree_histogram(graph: Graph, visited) -> np.ndarray:
    """Histogram over s of vacant vertices with exactly s vacant neighbours.

    Multigraph counting: a surviving self-loop adds two to its endpoint's
    count, a parallel edge one per copy.  Entry s of the result counts the
    vacant vertices of vacant-degree s; the length is max(degree) + 1.
    """
    vacant = _vacant_mask(graph.n, visited)
    keep = vacant[graph.edge_u] & vacant[graph.edge_v]
    cnt = np.bincount(graph.edge_u[keep], minlength=graph.n) + np.bincount(
        graph.edge_v[keep], minlength=graph.n
    )
    width = int(graph.degrees.max()) + 1 if graph.n else 1
    hist = np.bincount(cnt[vacant], minlength=width)
    return hist.astype(np.int64)


@dataclass
class VacantSnapshot:
    """Compressed component statistics of the vacant set at one walk time.

    `tree_counts[k]`, `unicyclic_counts[k]`, `complex_counts[k]` count the
    components of that kind with k vertices, for k <= k_cap; components
    larger than k_cap appear in `large_sizes`/`large_kinds` (sorted by size
    descending).  `untraversed_edges` is the number of edges the walk never
    crossed (None when the run did not track it).
    """

    t: int
    vacant_count: int
    untraversed_edges: int | None
    degree_hist: np.ndarray
    num_components: int
    largest: int
    second_largest: int
    k_cap: int
    tree_counts: np.ndarray
    unicyclic_counts: np.ndarray
    complex_counts: np.ndarray
    large_sizes: np.ndarray
    large_kinds: np.ndarray

    @property
    def giant_fraction(self) -> float:
        return self.largest / self.vacant_count if self.vacant_count else 0.0

    def tree_count(self, k: int) -> int:
        if k <= self.k_cap:
            return int(self.tree_counts[k])
        return int(((self.large_sizes == k) & (self.large_kinds == KIND_TREE)).sum())


def snapshot_statistics(
    graph: Graph,
    visited,
    t: int,
    k_cap: int = 50,
    untraversed_edges: int | None = None,
) -> VacantSnapshot:
    """Full vacant-set statistics at one time from a visited bitmap."""
    if k_cap < 1:
        raise ValueError("k_cap must be >= 1")
    vacant = _vacant_mask(graph.n, visited)
    dec = decompose_vacant(graph, visited)
    hist = vacant_degree_histogram(graph, visited)

    small = dec.sizes <= k_cap
    tree_counts = np.zeros(k_cap + 1, dtype=np.int64)
    uni_counts = np.zeros(k_cap + 1, dtype=np.int64)
    complex_counts = np.zeros(k_cap + 1, dtype=np.int64)
    for kind, out in (
        (KIND_TREE, tree_counts),
        (KIND_UNICYCLIC, uni_counts),
        (KIND_COMPLEX, complex_counts),
    ):
        sel = small & (dec.kinds == kind)
        if sel.any():
            out += np.bincount(dec.sizes[sel], minlength=k_cap + 1)[: k_cap + 1]
    big = ~small
    return VacantSnapshot(
        t=int(t),
        vacant_count=int(vacant.sum()),
        untraversed_edges=None if untraversed_edges is None else int(untraversed_edges),
        degree_hist=hist,
        num_components=dec.num_components,
        largest=dec.largest,
        second_largest=dec.second_largest,
        k_cap=k_cap,
        tree_counts=tree_counts,
        unicyclic_counts=uni_counts,
        complex_counts=complex_counts,
        large_sizes=dec.sizes[big].astype(np.int64),
        large_kinds=dec.kinds[big].astype(np.int8),
    )
