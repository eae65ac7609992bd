"""Walk-coupled pairing: conservation, vacancy criterion, coupling consistency."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vacantwalk.pairing import PairingState, finalize_pairing


def collect_edge_multiset(graph):
    return sorted(zip(graph.edge_u.tolist(), graph.edge_v.tolist()))


def test_initial_state():
    state = PairingState(n=10, r=3, start=4, seed=0)
    assert state.time == 0
    assert state.current == 4
    assert state.unpaired_count == 30
    assert state.pairs_formed == 0
    assert state.vacant_count() == 10
    assert state.is_vacant(4)


def test_point_conservation_along_run():
    state = PairingState(n=50, r=3, start=0, seed=11)
    for _ in range(200):
        state.step()
        assert state.unpaired_count + 2 * state.pairs_formed == 150
        # each step reveals at most one new pair
    assert 0 < state.pairs_formed <= 200


def test_vacancy_matches_trajectory_after_first_step():
    state = PairingState(n=60, r=3, start=7, seed=3, record=True)
    for t in range(1, 150):
        state.step()
        visited = set(state.trajectory)
        vacant = {v for v in range(60) if state.is_vacant(v)}
        assert vacant == set(range(60)) - visited
        assert state.vacant_count() == 60 - len(visited)


def test_vacant_mask_agrees_with_is_vacant():
    state = PairingState(n=30, r=4, start=0, seed=5)
    state.run(40)
    mask = state.vacant_mask()
    assert mask.dtype == bool
    for v in range(30):
        assert mask[v] == state.is_vacant(v)


def test_reproducible_for_equal_seeds():
    a = PairingState(n=40, r=3, start=2, seed=99, record=True)
    b = PairingState(n=40, r=3, start=2, seed=99, record=True)
    a.run(100)
    b.run(100)
    assert a.trajectory == b.trajectory
    assert np.array_equal(a.mate, b.mate)


def test_finalize_completes_all_points_and_degrees():
    state = PairingState(n=20, r=3, start=0, seed=1)
    state.run(25)
    graph = finalize_pairing(state, seed=2)
    assert state.unpaired_count == 0
    assert state.pairs_formed == 30
    mate = state.mate
    assert (mate >= 0).all()
    assert np.array_equal(mate[mate], np.arange(60))  # involution, no fixed point
    assert (mate != np.arange(60)).all()
    assert graph.n == 20
    assert graph.m == 30
    assert (graph.degrees == 3).all()
    assert state.vacant_count() == 0


def test_trajectory_walks_on_finalized_multigraph():
    # every consecutive cell pair of the recorded trajectory must be an edge
    # of the contracted multigraph, so the walk prefix and the final graph
    # are one consistent object
    state = PairingState(n=24, r=3, start=5, seed=42, record=True)
    state.run(60)
    graph = finalize_pairing(state, seed=43)
    edges = set()
    for u, v in zip(graph.edge_u.tolist(), graph.edge_v.tolist()):
        edges.add((u, v))
        edges.add((v, u))
    for a, b in zip(state.trajectory, state.trajectory[1:]):
        assert (a, b) in edges


def test_step_beyond_full_pairing_keeps_walking():
    # n*r/2 pairs exist; once everything is paired the walker still moves by
    # re-crossing revealed edges
    state = PairingState(n=2, r=3, start=0, seed=8)
    state.run(100)
    assert state.pairs_formed == 3
    assert state.unpaired_count == 0
    assert state.time == 100


def test_validation_errors():
    with pytest.raises(ValueError):
        PairingState(n=3, r=3, start=0, seed=0)  # odd point count
    with pytest.raises(ValueError):
        PairingState(n=4, r=2, start=0, seed=0)
    with pytest.raises(ValueError):
        PairingState(n=4, r=3, start=4, seed=0)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(2, 12),
    r=st.sampled_from([3, 4, 6]),
    steps=st.integers(0, 60),
    seed=st.integers(0, 2**32 - 1),
)
def test_conservation_and_finalize_property(n, r, steps, seed):
    if (n * r) % 2 != 0:
        n += 1
    state = PairingState(n=n, r=r, start=0, seed=seed)
    state.run(steps)
    assert state.unpaired_count + 2 * state.pairs_formed == n * r
    assert 0 <= state.vacant_count() <= n
    graph = finalize_pairing(state, seed=seed ^ 0x5A5A)
    assert (graph.degrees == r).all()
    assert graph.m == n * r // 2


def test_finalized_distribution_matches_direct_pairing_on_tiny_case():
    # stop at t=1 and finalize many times: every perfect matching of the 6
    # points of the n=2, r=3 case must appear, with no category starved
    counts = {}
    for i in range(6000):
        state = PairingState(n=2, r=3, start=0, seed=2 * i)
        state.run(1)
        finalize_pairing(state, seed=2 * i + 1)
        key = tuple(int(state.mate[x]) for x in range(6))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 15
    assert min(counts.values()) > 6000 / 15 * 0.7
