import math

import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

from degree_ado.graph import Graph

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# -- brute-force oracles, independent of the library's BFS code ---------------


def floyd_warshall(g):
    d = np.full((g.n, g.n), math.inf)
    np.fill_diagonal(d, 0)
    for u, v in g.edges():
        d[u, v] = d[v, u] = 1
    for k in range(g.n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def brute_nbhd(dist, v, s):
    cands = [u for u in range(len(dist)) if u != v and math.isfinite(dist[v, u])]
    cands.sort(key=lambda u: (dist[v, u], u))
    return cands[: int(math.floor(s))]


def brute_ball(dist, v, r):
    return {u for u in range(len(dist)) if 0 < dist[v, u] <= r}


def brute_ecc_trunc(dist, v, s):
    """Largest k in [0, ecc(v)] with T(v, k) inside N(v, s); ecc taken within v's component."""
    finite = dist[v][np.isfinite(dist[v])]
    ecc = int(finite.max())
    nb = set(brute_nbhd(dist, v, s))
    return max(k for k in range(ecc + 1) if brute_ball(dist, v, k) <= nb)


def brute_pivots(dist, centres):
    n = len(dist)
    pivot, pdist = [], []
    for v in range(n):
        best = min(centres, key=lambda a: (dist[v, a], a))
        if math.isinf(dist[v, best]):
            pivot.append(-1)
            pdist.append(math.inf)
        else:
            pivot.append(best)
            pdist.append(dist[v, best])
    return pivot, pdist


def brute_bunches(dist, pdist):
    n = len(dist)
    bunch = [{w for w in range(n) if dist[v, w] < pdist[v]} for v in range(n)]
    cluster = [{v for v in range(n) if dist[w, v] < pdist[v]} for w in range(n)]
    return bunch, cluster


@st.composite
def graphs(draw, min_n=1, max_n=14, connected=False):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = set()
    if connected:
        for v in range(1, n):
            u = draw(st.integers(min_value=0, max_value=v - 1))
            edges.add((u, v))
    if pairs:
        edges |= set(draw(st.lists(st.sampled_from(pairs), max_size=2 * n)))
    perm = draw(st.permutations(range(n)))
    return Graph.from_edges(n, sorted({tuple(sorted((perm[u], perm[v]))) for u, v in edges}))


@pytest.fixture
def p5():
    return path_graph(5)


@pytest.fixture
def c8():
    return cycle_graph(8)


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
