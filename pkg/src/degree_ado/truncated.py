"""Truncated BFS neighbourhoods, layers, balls and truncated eccentricity.

``N(v, s)`` is the first ``floor(s)`` vertices met by a BFS from ``v``
(``v`` itself excluded), with vertices of one layer visited in ascending id
order. ``ecc(v, s)`` is the largest radius whose whole ball fits in
``N(v, s)``; ``rad(s)`` is its minimum over all vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graph import Graph, bfs_full, bfs_layers


@dataclass(frozen=True)
class TruncatedBfsView:
    source: int
    order: tuple[int, ...]
    layer_of: dict[int, int]
    deepest_complete_radius: int

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self.order)


@dataclass(frozen=True)
class LayerSet:
    source: int
    radius: int
    members: frozenset[int]


def _floor_size(s: float) -> int:
    if not s >= 1:
        raise InputError(f"truncation size must be >= 1, got {s}")
    return int(math.floor(s))


def truncated_bfs(g: Graph, v: int, s: float) -> TruncatedBfsView:
    size = _floor_size(s)
    layers = bfs_layers(g, v, limit=size)
    found = sum(len(layer) for layer in layers[1:])
    # the last layer only counts as complete when the scan ran out of vertices
    ecc = len(layers) - 2 if found > size else len(layers) - 1
    order: list[int] = []
    layer_of: dict[int, int] = {}
    for r, layer in enumerate(layers[1:], start=1):
        for w in layer:
            if len(order) == size:
                break
            order.append(w)
            layer_of[w] = r
    return TruncatedBfsView(v, tuple(order), layer_of, ecc)


def ecc_trunc(g: Graph, v: int, s: float) -> int:
    return truncated_bfs(g, v, s).deepest_complete_radius


def rad_trunc(g: Graph, s: float, dist: np.ndarray | None = None) -> int:
    """Minimum truncated eccentricity over all vertices.

    ``dist`` may carry a precomputed all-pairs matrix; the result is the same.
    """
    _floor_size(s)
    if g.n == 0:
        return 0
    if dist is not None:
        return int(ecc_trunc_all(dist, s).min())
    return min(ecc_trunc(g, v, s) for v in range(g.n))


def ecc_trunc_all(dist: np.ndarray, s: float) -> np.ndarray:
    """Truncated eccentricity of every row source of ``dist`` at once.

    Row ``i`` of ``dist`` must contain a zero for the source itself.
    """
    return ecc_trunc_sorted(np.sort(dist, axis=1), s)


def ecc_trunc_sorted(rows: np.ndarray, s: float) -> np.ndarray:
    """As :func:`ecc_trunc_all`, for a distance matrix already sorted along rows."""
    size = _floor_size(s)
    finite = np.isfinite(rows).sum(axis=1) - 1
    out = np.empty(rows.shape[0], dtype=np.int64)
    small = finite <= size
    idx = np.nonzero(small)[0]
    out[idx] = rows[idx, finite[idx]]
    idx = np.nonzero(~small)[0]
    if len(idx):
        out[idx] = rows[idx, size + 1] - 1
    return out


def truncated_order_from_row(row: np.ndarray, source: int, s: float) -> np.ndarray:
    """``N(source, s)`` read off an exact distance row, in BFS order."""
    size = _floor_size(s)
    cand = np.nonzero(np.isfinite(row))[0]
    cand = cand[cand != source]
    order = cand[np.lexsort((cand, row[cand]))]
    return order[:size]


def layer_set(g: Graph, v: int, r: int) -> LayerSet:
    dist = bfs_full(g, v).dist
    return LayerSet(v, r, frozenset(int(u) for u in np.nonzero(dist == r)[0] if u != v))


def ball_set(g: Graph, v: int, r: int) -> LayerSet:
    dist = bfs_full(g, v).dist
    return LayerSet(v, r, frozenset(int(u) for u in np.nonzero((dist > 0) & (dist <= r))[0]))
