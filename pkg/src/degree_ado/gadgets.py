"""Workload generators and the layered set-intersection gadgets.

The butterfly graph has ``k + 1`` layers of ``N = b**k`` vertices; a vertex of
layer ``t - 1`` and one of layer ``t`` are adjacent iff their base-``b``
labels agree everywhere except possibly at digit ``t``. The merged gadget
takes one butterfly copy per universe element ``x``, drops the boundary edges
of set representatives whose set misses ``x``, and shares the first and last
layers between all copies. The split gadget subdivides every boundary edge
into a path of ``t`` edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import GraphFormatError, InputError
from .graph import Graph


class GadgetKind(str, Enum):
    BUTTERFLY = "butterfly"
    MERGED = "merged"
    SPLIT = "split"


@dataclass(frozen=True)
class SetIntersectionInstance:
    n_sets: int
    universe: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.sets) != self.n_sets:
            raise InputError(f"expected {self.n_sets} sets, got {len(self.sets)}")
        for i, s in enumerate(self.sets):
            if list(s) != sorted(set(s)):
                raise InputError(f"set {i} is not sorted and duplicate-free")
            if s and not (0 <= s[0] and s[-1] < self.universe):
                raise InputError(f"set {i} has elements outside [0, {self.universe})")

    @classmethod
    def from_sets(cls, universe: int, sets: Sequence[Sequence[int]]) -> "SetIntersectionInstance":
        return cls(len(sets), universe, tuple(tuple(sorted(set(s))) for s in sets))

    def intersection_matrix(self) -> np.ndarray:
        member = self.membership()
        return (member.astype(np.int64) @ member.T.astype(np.int64)) > 0

    def membership(self) -> np.ndarray:
        out = np.zeros((self.n_sets, self.universe), dtype=bool)
        for i, s in enumerate(self.sets):
            out[i, list(s)] = True
        return out


@dataclass(frozen=True)
class GadgetGraph:
    graph: Graph
    kind: GadgetKind
    k: int
    b: int
    left_rep: tuple[int, ...]
    right_rep: tuple[int, ...]
    layer_of: np.ndarray  # depth of each vertex; edges join consecutive depths
    t: int = 1
    padded_n: int = 0


def digits(index: int, b: int, k: int) -> tuple[int, ...]:
    """Base-``b`` label of ``index``, most significant digit first."""
    out = []
    for _ in range(k):
        index, d = divmod(index, b)
        out.append(d)
    return tuple(reversed(out))


def from_digits(label: Sequence[int], b: int) -> int:
    value = 0
    for d in label:
        value = value * b + d
    return value


def exact_root(n: int, k: int) -> int | None:
    if k < 1 or n < 1:
        return None
    b = round(n ** (1 / k))
    for cand in (b - 1, b, b + 1):
        if cand >= 2 and cand**k == n:
            return cand
    return None


def padded_size(n: int, k: int) -> tuple[int, int]:
    """Smallest ``(b, b**k)`` with ``b >= 2`` and ``b**k >= n``."""
    b = max(2, int(math.ceil(n ** (1 / k))) - 1)
    while b**k < n:
        b += 1
    return b, b**k


def _butterfly_pairs(b: int, k: int, step: int) -> list[tuple[int, int]]:
    """Index pairs between layers ``step - 1`` and ``step`` (``1 <= step <= k``)."""
    n = b**k
    place = b ** (k - step)
    pairs = []
    for a in range(n):
        base = a - ((a // place) % b) * place
        for d in range(b):
            pairs.append((a, base + d * place))
    return pairs


def _layered(
    member: np.ndarray, k: int, b: int, t: int, kind: GadgetKind, n_real: int
) -> GadgetGraph:
    """Shared builder. ``member[i, x]`` says whether set ``i`` contains ``x``."""
    n, universe = member.shape
    inner_base = n
    right_base = n + (k - 1) * universe * n

    def vid(layer: int, x: int, idx: int) -> int:
        if layer == 0:
            return idx
        if layer == k:
            return right_base + idx
        return inner_base + ((layer - 1) * universe + x) * n + idx

    base_count = 2 * n + (k - 1) * universe * n
    depth = [0] * base_count
    for idx in range(n):
        depth[vid(k, 0, idx)] = k + 2 * (t - 1)
    for layer in range(1, k):
        for x in range(universe):
            for idx in range(n):
                depth[vid(layer, x, idx)] = layer + (t - 1)

    edges: list[tuple[int, int]] = []
    next_id = base_count
    for step in range(1, k + 1):
        pairs = _butterfly_pairs(b, k, step)
        for x in range(universe):
            for a, c in pairs:
                if step == 1 and not member[a, x]:
                    continue
                if step == k and not member[c, x]:
                    continue
                p, q = vid(step - 1, x, a), vid(step, x, c)
                boundary = step == 1 or step == k
                if t == 1 or not boundary:
                    edges.append((p, q))
                    continue
                chain = [p]
                for j in range(1, t):
                    chain.append(next_id)
                    depth.append(depth[p] + j)
                    next_id += 1
                chain.append(q)
                edges.extend(zip(chain, chain[1:]))
    graph = Graph.from_edges(next_id, edges)
    return GadgetGraph(
        graph=graph,
        kind=kind,
        k=k,
        b=b,
        left_rep=tuple(vid(0, 0, i) for i in range(n_real)),
        right_rep=tuple(vid(k, 0, j) for j in range(n_real)),
        layer_of=np.array(depth, dtype=np.int64),
        t=t,
        padded_n=n,
    )


def gen_butterfly(n_sets: int, k: int) -> GadgetGraph:
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    b = exact_root(n_sets, k)
    if b is None:
        b_up, n_up = padded_size(n_sets, k)
        raise InputError(
            f"N={n_sets} is not a k-th power of an integer >= 2 (k={k}); "
            f"round N up to {n_up} = {b_up}^{k}"
        )
    member = np.ones((n_sets, 1), dtype=bool)
    return _layered(member, k, b, 1, GadgetKind.BUTTERFLY, n_sets)


def _padded_membership(inst: SetIntersectionInstance, k: int) -> tuple[np.ndarray, int]:
    if k < 2:
        raise InputError(f"set-intersection gadgets need k >= 2, got {k}")
    b, n = padded_size(inst.n_sets, k)
    member = np.zeros((n, inst.universe), dtype=bool)
    member[: inst.n_sets] = inst.membership()
    return member, b


def gen_gx(inst: SetIntersectionInstance, k: int, x: int) -> GadgetGraph:
    """Butterfly copy keeping only the boundary edges of sets that contain ``x``."""
    if not (0 <= x < inst.universe):
        raise InputError(f"element {x} outside universe [0, {inst.universe})")
    member, b = _padded_membership(inst, k)
    return _layered(member[:, [x]], k, b, 1, GadgetKind.BUTTERFLY, inst.n_sets)


def gen_merged(inst: SetIntersectionInstance, k: int) -> GadgetGraph:
    member, b = _padded_membership(inst, k)
    return _layered(member, k, b, 1, GadgetKind.MERGED, inst.n_sets)


def split_factor(k: int, eps: float, c: float) -> int:
    # guard against (k + c) / (2 eps) landing a hair above an integer
    return max(1, math.ceil((k + c) / (2 * eps) - 1e-9))


def gen_split(inst: SetIntersectionInstance, k: int, eps: float, c: float) -> GadgetGraph:
    if not (eps > 0 and c > 0):
        raise InputError(f"eps and c must be positive, got eps={eps}, c={c}")
    member, b = _padded_membership(inst, k)
    return _layered(member, k, b, split_factor(k, eps, c), GadgetKind.SPLIT, inst.n_sets)


# -- random workloads --------------------------------------------------------


def gen_random_bounded_degree(n: int, delta_max: int, target_m: int, seed: int = 0) -> Graph:
    """Random simple graph with maximum degree ``delta_max`` and about ``target_m`` edges."""
    if delta_max < 1:
        raise InputError(f"delta_max must be >= 1, got {delta_max}")
    if target_m < 0 or target_m > n * delta_max // 2 or target_m > n * (n - 1) // 2:
        raise InputError(f"target_m={target_m} infeasible for n={n}, delta_max={delta_max}")
    rng = np.random.default_rng(seed)
    return _fill_edges(rng, n, delta_max, target_m, set(), [0] * n)


def _fill_edges(rng, n, delta_max, target_m, edges: set, deg: list) -> Graph:
    attempts = 0
    while len(edges) < target_m and attempts < 20 * target_m + 100:
        us = rng.integers(0, n, size=256)
        vs = rng.integers(0, n, size=256)
        for u, v in zip(us.tolist(), vs.tolist()):
            attempts += 1
            if len(edges) >= target_m:
                break
            if u == v or deg[u] >= delta_max or deg[v] >= delta_max:
                continue
            key = (min(u, v), max(u, v))
            if key in edges:
                continue
            edges.add(key)
            deg[u] += 1
            deg[v] += 1
    if len(edges) < target_m:
        # sweep the unsaturated vertices so near-regular targets are still met
        open_ = [v for v in rng.permutation(n).tolist() if deg[v] < delta_max]
        for i, u in enumerate(open_):
            for v in open_[i + 1 :]:
                if len(edges) >= target_m or deg[u] >= delta_max:
                    break
                key = (min(u, v), max(u, v))
                if deg[v] < delta_max and key not in edges:
                    edges.add(key)
                    deg[u] += 1
                    deg[v] += 1
    return Graph.from_edges(n, sorted(edges))


def gen_random_connected(n: int, delta_max: int, target_m: int, seed: int = 0) -> Graph:
    """Random connected graph: a degree-capped random tree plus random extra edges."""
    if n >= 3 and delta_max < 2:
        raise InputError("a connected graph on >= 3 vertices needs delta_max >= 2")
    if target_m < n - 1 or target_m > n * delta_max // 2 or target_m > n * (n - 1) // 2:
        raise InputError(f"target_m={target_m} infeasible for connected n={n}, delta_max={delta_max}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n).tolist()
    deg = [0] * n
    edges: set = set()
    open_ = [order[0]] if n else []
    for v in order[1:]:
        u = open_[int(rng.integers(len(open_)))]
        edges.add((min(u, v), max(u, v)))
        deg[u] += 1
        deg[v] += 1
        if deg[u] >= delta_max:
            open_.remove(u)
        if deg[v] < delta_max:
            open_.append(v)
    return _fill_edges(rng, n, delta_max, target_m, edges, deg)


def gen_random_instance(n_sets: int, universe: int, density: float, seed: int = 0) -> SetIntersectionInstance:
    if not (0 <= density <= 1):
        raise InputError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    member = rng.random((n_sets, universe)) < density
    return SetIntersectionInstance.from_sets(universe, [np.nonzero(row)[0].tolist() for row in member])


# -- file formats ------------------------------------------------------------


def format_instance(inst: SetIntersectionInstance) -> str:
    lines = [f"{inst.n_sets} {inst.universe}"]
    lines += [" ".join(map(str, s)) for s in inst.sets]
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> SetIntersectionInstance:
    lines = text.split("\n")
    try:
        n_sets, universe = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise GraphFormatError("line 1: expected 'N X' header") from None
    body = lines[1 : 1 + n_sets]
    body += [""] * (n_sets - len(body))
    sets = []
    for lineno, line in enumerate(body, start=2):
        try:
            elems = [int(tok) for tok in line.split()]
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer element") from None
        if elems != sorted(set(elems)) or any(not (0 <= e < universe) for e in elems):
            raise GraphFormatError(f"line {lineno}: elements must be sorted, unique and in [0, {universe})")
        sets.append(tuple(elems))
    if any(line.strip() for line in lines[1 + n_sets :]):
        raise GraphFormatError(f"more than {n_sets} set lines")
    return SetIntersectionInstance(n_sets, universe, tuple(sets))


def read_instance(path: str | Path) -> SetIntersectionInstance:
    return parse_instance(Path(path).read_text())


def write_instance(inst: SetIntersectionInstance, path: str | Path) -> None:
    Path(path).write_text(format_instance(inst))


def format_rep_map(gadget: GadgetGraph) -> str:
    return "".join(f"{i} {v} {u}\n" for i, (v, u) in enumerate(zip(gadget.left_rep, gadget.right_rep)))


def parse_rep_map(text: str) -> tuple[list[int], list[int]]:
    left, right = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            i, v, u = (int(tok) for tok in line.split())
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected 'i v_id u_id'") from None
        if i != len(left):
            raise GraphFormatError(f"line {lineno}: rep index {i} out of sequence")
        left.append(v)
        right.append(u)
    return left, right
