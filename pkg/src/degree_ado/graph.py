"""Immutable unweighted undirected graphs and exact BFS distances.

Distances are carried as ``float64`` arrays with ``math.inf`` standing for
UNREACHABLE, so that sums and comparisons behave without special cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .errors import CapacityError, GraphFormatError, InputError

UNREACHABLE = math.inf
APSP_ENTRY_LIMIT = 10**8


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    m: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at {u}")
            if v in nbrs[u]:
                raise InputError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
            m += 1
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), m)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def csr(self) -> sp.csr_matrix:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adjacency])
        indices = np.fromiter(
            (w for a in self.adjacency for w in a), dtype=np.int32, count=int(indptr[-1])
        )
        data = np.ones(len(indices), dtype=np.int8)
        return sp.csr_matrix((data, indices, indptr), shape=(self.n, self.n))

    def induced_subgraph(self, vertices: Sequence[int]) -> tuple["Graph", dict[int, int]]:
        """Subgraph induced by ``vertices``.

        Returns the subgraph and the old-id -> new-id map. New ids follow the
        ascending order of old ids so that id tie-breaking is preserved.
        """
        keep = sorted(set(int(v) for v in vertices))
        remap = {old: new for new, old in enumerate(keep)}
        edges = [
            (remap[u], remap[w])
            for u in keep
            for w in self.adjacency[u]
            if u < w and w in remap
        ]
        return Graph.from_edges(len(keep), edges), remap


@dataclass(frozen=True)
class DistanceRow:
    source: int
    dist: np.ndarray
    order: tuple[int, ...]


def _check_vertex(g: Graph, v: int) -> None:
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} out of range for n={g.n}")


def bfs_layers(g: Graph, source: int, limit: int | None = None) -> list[list[int]]:
    """Layer-synchronous BFS; each layer is sorted ascending.

    With ``limit`` set, stops after the first layer that brings the number of
    discovered vertices (excluding ``source``) above ``limit``.
    """
    _check_vertex(g, source)
    seen = {source}
    layers = [[source]]
    found = 0
    frontier = [source]
    while frontier:
        nxt = []
        for x in frontier:
            for w in g.adjacency[x]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        nxt.sort()
        layers.append(nxt)
        found += len(nxt)
        if limit is not None and found > limit:
            break
        frontier = nxt
    return layers


def bfs_full(g: Graph, source: int) -> DistanceRow:
    layers = bfs_layers(g, source)
    dist = np.full(g.n, UNREACHABLE)
    for r, layer in enumerate(layers):
        dist[layer] = r
    return DistanceRow(source, dist, tuple(v for layer in layers[1:] for v in layer))


def max_degree(g: Graph) -> int:
    return max((len(a) for a in g.adjacency), default=0)


def all_pairs_exact(g: Graph) -> np.ndarray:
    """Full ``n x n`` hop-distance matrix (``inf`` across components)."""
    if g.n * g.n > APSP_ENTRY_LIMIT:
        raise CapacityError(f"all-pairs matrix for n={g.n} exceeds {APSP_ENTRY_LIMIT} entries")
    if g.n == 0:
        return np.zeros((0, 0))
    return shortest_path(g.csr, method="D", directed=False, unweighted=True)


def distance_rows(g: Graph, sources: Sequence[int]) -> np.ndarray:
    if len(sources) == 0:
        return np.zeros((0, g.n))
    return shortest_path(g.csr, method="D", directed=False, unweighted=True, indices=list(sources))


def connected_components(g: Graph) -> list[list[int]]:
    label = [-1] * g.n
    comps = []
    for s in range(g.n):
        if label[s] >= 0:
            continue
        comp = [v for layer in bfs_layers(g, s) for v in layer]
        for v in comp:
            label[v] = len(comps)
        comps.append(sorted(comp))
    return comps


# -- edge-list text format ---------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    header = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer token in {raw!r}") from None
        if len(nums) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {raw!r}")
        if header is None:
            if nums[0] < 0 or nums[1] < 0:
                raise GraphFormatError(f"line {lineno}: negative header values")
            header = nums
            continue
        u, v = nums
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: vertex out of range [0, {n})")
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    if header is None:
        raise GraphFormatError("missing 'n m' header line")
    if len(edges) != header[1]:
        raise GraphFormatError(f"header declares {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(header[0], edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))
