"""Pivot sets, pivots, bunches and clusters.

For a centre set ``A``: ``p(v)`` is the nearest centre (smallest id on ties),
``B(v) = {w : d(v, w) < d(v, p(v))}`` and ``C(w) = {v : d(w, v) < d(v, p(v))}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InputError, NonConvergenceError
from .graph import UNREACHABLE, Graph


@dataclass(frozen=True)
class PivotAssignment:
    a_set: frozenset[int]
    pivot: np.ndarray  # -1 where no centre is reachable
    pivot_dist: np.ndarray  # float, inf where no centre is reachable


@dataclass(frozen=True)
class BunchClusterIndex:
    bunch: list[dict[int, int]]
    cluster: list[dict[int, int]]

    def bunch_sizes(self) -> np.ndarray:
        return np.array([len(b) for b in self.bunch], dtype=np.int64)

    def cluster_sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.cluster], dtype=np.int64)


@dataclass
class CenterPicking:
    """Outcome of the randomized centre-picking loop."""

    a_set: frozenset[int]
    pivots: PivotAssignment
    index: BunchClusterIndex
    rounds: int
    size_bound: float
    history: list[dict] = field(default_factory=list)


def assign_pivots(g: Graph, a_set: Iterable[int]) -> PivotAssignment:
    """Multi-source BFS from ``a_set``; nearest centre, smallest id on ties."""
    centres = frozenset(int(a) for a in a_set)
    if not centres:
        raise InputError("pivot set A must be non-empty")
    for a in centres:
        if not (0 <= a < g.n):
            raise InputError(f"centre {a} out of range for n={g.n}")
    pivot = np.full(g.n, -1, dtype=np.int64)
    pivot_dist = np.full(g.n, UNREACHABLE)
    frontier = sorted(centres)
    for a in frontier:
        pivot[a] = a
        pivot_dist[a] = 0
    r = 0
    while frontier:
        r += 1
        best: dict[int, int] = {}
        for x in frontier:
            px = int(pivot[x])
            for w in g.adjacency[x]:
                if pivot[w] < 0 and (w not in best or px < best[w]):
                    best[w] = px
        for w, pw in best.items():
            pivot[w] = pw
            pivot_dist[w] = r
        frontier = list(best)
    return PivotAssignment(centres, pivot, pivot_dist)


def _bunch(g: Graph, v: int, radius_excl: float) -> dict[int, int]:
    """All ``w`` with ``d(v, w) < radius_excl``, with their distances."""
    out = {v: 0} if radius_excl > 0 else {}
    if radius_excl <= 1:
        return out
    frontier = [v]
    r = 0
    while frontier and r + 1 < radius_excl:
        r += 1
        nxt = []
        for x in frontier:
            for w in g.adjacency[x]:
                if w not in out:
                    out[w] = r
                    nxt.append(w)
        frontier = nxt
    return out


def compute_bunches_clusters(g: Graph, pa: PivotAssignment) -> BunchClusterIndex:
    bunch = [_bunch(g, v, pa.pivot_dist[v]) for v in range(g.n)]
    cluster: list[dict[int, int]] = [{} for _ in range(g.n)]
    for v, b in enumerate(bunch):
        for w, d in b.items():
            cluster[w][v] = d
    return BunchClusterIndex(bunch, cluster)


def cluster_of_set(idx: BunchClusterIndex, s: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for w in s:
        out.update(idx.cluster[w])
    return out


def round_cap(n: int) -> int:
    return int(20 * math.log2(max(n, 2)) + 20)


def center_picking(g: Graph, target: float, c_b: float = 4.0, seed: int = 0) -> CenterPicking:
    """Sample centres until every bunch and cluster has at most ``c_b * n / target`` members.

    Each round samples the still-overloaded vertices ``W`` with probability
    ``min(1, target / |W|)``. ``W`` holds every ``w`` whose cluster is too big
    and every ``v`` whose bunch is too big.
    """
    n = g.n
    if n == 0:
        raise InputError("cannot pick centres in an empty graph")
    if not (1 <= target <= n):
        raise InputError(f"hitting-set target must lie in [1, n={n}], got {target}")
    if c_b < 1:
        raise InputError(f"c_B must be >= 1, got {c_b}")
    rng = np.random.default_rng(seed)
    bound = c_b * n / target
    chosen: set[int] = set()
    pending = np.arange(n)
    history = []
    for rnd in range(1, round_cap(n) + 1):
        p = min(1.0, target / len(pending))
        picks = pending[rng.random(len(pending)) < p]
        chosen.update(int(w) for w in picks)
        if not chosen:
            history.append({"round": rnd, "picked": 0, "pending": len(pending)})
            continue
        pa = assign_pivots(g, chosen)
        idx = compute_bunches_clusters(g, pa)
        heavy = (idx.cluster_sizes() > bound) | (idx.bunch_sizes() > bound)
        pending = np.nonzero(heavy)[0]
        history.append({"round": rnd, "picked": len(picks), "pending": len(pending), "size": len(chosen)})
        if len(pending) == 0:
            return CenterPicking(frozenset(chosen), pa, idx, rnd, bound, history)
    raise NonConvergenceError(
        f"centre picking did not converge within {round_cap(n)} rounds",
        {"n": n, "target": target, "c_B": c_b, "history": history[-5:]},
    )


def compute_hitting_set(g: Graph, target: float, c_b: float = 4.0, seed: int = 0) -> frozenset[int]:
    return center_picking(g, target, c_b, seed).a_set
