import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tanglefree.graphs import (
    STATS_COLUMNS,
    RegularGraph,
    ball_cycle_dimensions,
    ball_cycles,
    is_tangle_free,
    phase_to_csv,
    sample_configuration,
    tangle_phase,
    tangle_radius,
    wilson_interval,
)

K4 = RegularGraph.from_edges(4, itertools.combinations(range(4), 2))
THETA = RegularGraph.from_edges(2, [(0, 1)] * 3)


def even_subgraph_dimension(G, v, L):
    """log2 of the number of even edge subsets of the ball, by enumerating all subsets."""
    dist = {v: 0}
    frontier = [v]
    nb = G.neighbours()
    for r in range(1, L + 1):
        nxt = []
        for u in frontier:
            for w in nb[u]:
                if w not in dist:
                    dist[w] = r
                    nxt.append(w)
        frontier = nxt
    edges = [(a, b) for a, b in G.edges if a in dist and b in dist]
    if not edges:
        return 0
    verts = sorted(dist)
    pos = {u: i for i, u in enumerate(verts)}
    inc = np.zeros((len(edges), len(verts)), dtype=np.int64)
    for k, (a, b) in enumerate(edges):
        inc[k, pos[a]] += 1
        inc[k, pos[b]] += 1
    m = len(edges)
    masks = (np.arange(2 ** m)[:, None] >> np.arange(m)) & 1
    even = ((masks @ inc) % 2 == 0).all(axis=1).sum()
    return int(round(np.log2(even)))


def test_single_edge_tree():
    G = RegularGraph.from_edges(2, [(0, 1)])
    for L in range(4):
        assert ball_cycles(G, 0, L).cycle_dimension == 0
    assert is_tangle_free(G, 3)


def test_k4():
    rep = ball_cycles(K4, 0, 1)
    assert (rep.vertices, rep.edges, rep.cycle_dimension) == (4, 6, 3)
    assert not is_tangle_free(K4, 1)
    assert is_tangle_free(K4, 0)


def test_cycle_graph():
    C = RegularGraph.from_edges(9, [(i, (i + 1) % 9) for i in range(9)])
    for L in range(8):
        assert is_tangle_free(C, L)


def test_theta():
    assert is_tangle_free(THETA, 0)
    assert not is_tangle_free(THETA, 1)
    assert ball_cycles(THETA, 0, 1).cycle_dimension == 2


def test_self_loops_and_multi_edges_count():
    G = RegularGraph.from_edges(2, [(0, 0), (0, 1), (1, 1)])
    assert ball_cycles(G, 0, 0).cycle_dimension == 1
    assert ball_cycles(G, 0, 1).cycle_dimension == 2


@given(st.integers(0, 10_000), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_matches_cycle_space_oracle(seed, L):
    G = sample_configuration(12, 3, seed)
    dims = ball_cycle_dimensions(G, L)
    for v in range(G.n):
        assert dims[v] == ball_cycles(G, v, L).cycle_dimension == even_subgraph_dimension(G, v, L)


def test_sampler():
    a, b = sample_configuration(50, 3, 7), sample_configuration(50, 3, 7)
    assert a == b
    assert a != sample_configuration(50, 3, 8)
    deg = np.bincount(a.edge_array().ravel(), minlength=50)
    assert (deg == 3).all()
    with pytest.raises(ValueError):
        sample_configuration(5, 3, 0)


def test_self_loop_mean():
    n, d, draws = 100, 3, 10_000
    loops = [int((e[:, 0] == e[:, 1]).sum()) for e in (sample_configuration(n, d, s).edge_array() for s in range(draws))]
    exact = n * d * (d - 1) / 2 / (n * d - 1)  # finite-n expectation, tends to (d-1)/2
    assert abs(np.mean(loops) - exact) < 4 * np.std(loops) / np.sqrt(draws)
    assert abs(np.mean(loops) - (d - 1) / 2) < 0.05


def test_wilson():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert lo == pytest.approx(0.4038, abs=1e-3)
    assert all(np.isnan(wilson_interval(0, 0)))


def test_radius():
    assert tangle_radius(2 ** 10, 3, 0.2) == 2
    assert tangle_radius(2 ** 9, 3, 0.2) == 1


def test_phase_empty_and_errors():
    assert tangle_phase([256], 3, 0.2, 0) == []
    with pytest.raises(ValueError):
        tangle_phase([256], 2, 0.2, 5)


def test_phase_large_a():
    rows = tangle_phase([512], 3, 5.0, 10, seed=1)
    assert rows[0]["fraction"] == 0.0


def test_phase_deterministic_and_threads():
    a = tangle_phase([256, 512], 3, 0.3, 30, seed=4)
    b = tangle_phase([256, 512], 3, 0.3, 30, seed=4, workers=4)
    assert a == b
    text = phase_to_csv(a)
    assert text.splitlines()[0] == ",".join(STATS_COLUMNS)
    assert len(text.splitlines()) == 3
