import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_bunches, brute_pivots, floyd_warshall, graphs, path_graph, star_graph
from degree_ado.errors import InputError, NonConvergenceError
from degree_ado.gadgets import gen_random_bounded_degree
from degree_ado.graph import UNREACHABLE, Graph, all_pairs_exact
from degree_ado.truncated import truncated_bfs
from degree_ado.tz import (
    assign_pivots,
    center_picking,
    cluster_of_set,
    compute_bunches_clusters,
    compute_hitting_set,
)


def test_pivots_path(p5):
    pa = assign_pivots(p5, {0, 4})
    assert pa.pivot.tolist() == [0, 0, 0, 4, 4]
    assert pa.pivot_dist.tolist() == [0, 1, 2, 1, 0]


def test_pivots_all_vertices():
    g = path_graph(6)
    pa = assign_pivots(g, range(6))
    assert pa.pivot.tolist() == list(range(6))
    assert (pa.pivot_dist == 0).all()
    idx = compute_bunches_clusters(g, pa)
    assert all(not b for b in idx.bunch) and all(not c for c in idx.cluster)


def test_pivots_unreachable_component():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    pa = assign_pivots(g, {0})
    assert pa.pivot.tolist() == [0, 0, -1, -1]
    assert pa.pivot_dist[2] == UNREACHABLE and pa.pivot_dist[3] == UNREACHABLE


def test_empty_pivot_set_rejected(p5):
    with pytest.raises(InputError):
        assign_pivots(p5, [])


def test_bunches_path(p5):
    idx = compute_bunches_clusters(p5, assign_pivots(p5, {0, 4}))
    assert idx.bunch[2] == {1: 1, 2: 0, 3: 1}
    assert idx.bunch[0] == {} and idx.bunch[4] == {}
    assert cluster_of_set(idx, []) == set()
    assert cluster_of_set(idx, [1]) == set(idx.cluster[1])
    dist = floyd_warshall(p5)
    _, pdist = brute_pivots(dist, [0, 4])
    _, clusters = brute_bunches(dist, pdist)
    assert cluster_of_set(idx, {1, 2}) == clusters[1] | clusters[2]


def test_star_single_centre():
    g = star_graph(4)
    idx = compute_bunches_clusters(g, assign_pivots(g, {0}))
    assert all(idx.bunch[leaf] == {leaf: 0} for leaf in range(1, 5))
    assert idx.cluster[0] == {}
    assert idx.bunch_sizes().max() <= 4 * g.n


def test_hitting_set_full_target():
    g = path_graph(7)
    pick = center_picking(g, target=7, seed=1)
    assert pick.index.bunch_sizes().max() <= 4


def test_hitting_set_random_graph_bounds():
    g = gen_random_bounded_degree(200, 6, 500, seed=3)
    target = g.n ** (2 / 3)
    pick = center_picking(g, target, c_b=4, seed=11)
    bound = 4 * g.n / target
    dist = all_pairs_exact(g)
    pivot, pdist = brute_pivots(dist, sorted(pick.a_set))
    bunches, clusters = brute_bunches(dist, pdist)
    assert max(len(b) for b in bunches) <= bound
    assert max(len(c) for c in clusters) <= bound
    assert [set(b) for b in pick.index.bunch] == bunches
    assert pick.a_set == compute_hitting_set(g, target, 4, seed=11)


def test_hitting_set_duality_random():
    g = gen_random_bounded_degree(100, 5, 200, seed=8)
    idx = center_picking(g, g.n ** (2 / 3), seed=2).index
    rng = np.random.default_rng(0)
    for v, w in rng.integers(0, g.n, size=(100, 2)).tolist():
        assert (w in idx.bunch[v]) == (v in idx.cluster[w])


def test_hitting_set_domain():
    g = path_graph(5)
    with pytest.raises(InputError):
        center_picking(g, target=0.5)
    with pytest.raises(InputError):
        center_picking(g, target=6)
    with pytest.raises(InputError):
        center_picking(g, target=2, c_b=0.5)


def test_non_convergence_reports_diagnostics(monkeypatch):
    monkeypatch.setattr("degree_ado.tz.round_cap", lambda n: 1)
    g = gen_random_bounded_degree(300, 4, 500, seed=1)
    # bunches of size <= 2 need nearly every vertex sampled; one round at p = 1/2 is not enough
    with pytest.raises(NonConvergenceError) as info:
        center_picking(g, target=g.n / 2, c_b=1, seed=0)
    assert info.value.diagnostics["n"] == 300
    assert info.value.exit_code == 6


@given(graphs(min_n=1), st.data())
def test_pivots_and_bunches_match_definitions(g, data):
    dist = floyd_warshall(g)
    centres = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    pa = assign_pivots(g, centres)
    pivot, pdist = brute_pivots(dist, sorted(centres))
    assert pa.pivot.tolist() == pivot
    assert pa.pivot_dist.tolist() == pdist
    idx = compute_bunches_clusters(g, pa)
    bunches, clusters = brute_bunches(dist, pdist)
    assert [set(b) for b in idx.bunch] == bunches
    assert [set(c) for c in idx.cluster] == clusters
    for v in range(g.n):
        for w, d in idx.bunch[v].items():
            assert d == dist[v, w] < pa.pivot_dist[v]
            assert idx.cluster[w][v] == d
        size = len(idx.bunch[v])
        if size:
            near = truncated_bfs(g, v, size).members | {v}
            assert set(idx.bunch[v]) <= near


@given(graphs(min_n=2), st.integers(0, 2**16))
def test_center_picking_size_bound(g, seed):
    target = max(1.0, g.n ** (2 / 3))
    pick = center_picking(g, target, c_b=4, seed=seed)
    assert pick.index.bunch_sizes().max() <= 4 * g.n / target
    assert pick.index.cluster_sizes().max() <= 4 * g.n / target
    assert 1 <= pick.rounds and math.isfinite(pick.size_bound)
