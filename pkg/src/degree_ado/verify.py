"""Ground-truth checks: stretch audits, distinguishers, the set-intersection
pipeline and executable versions of the truncated-eccentricity lemmas."""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, Protocol

import numpy as np

from .ado import AdoStructure, PathKind, query, query_row
from .errors import InputError
from .gadgets import SetIntersectionInstance, gen_merged
from .graph import Graph, all_pairs_exact, max_degree
from .truncated import ecc_trunc_sorted, truncated_bfs

MAX_RECORDED = 100
EstimateHook = Callable[[int, np.ndarray, np.ndarray], np.ndarray]


class Oracle(Protocol):
    declared_stretch: tuple[float, float]

    def estimate(self, u: int, v: int) -> float: ...


class ExactOracle:
    """Quadratic-space exact oracle over an all-pairs BFS matrix."""

    def __init__(self, g: Graph, declared_stretch: tuple[float, float] = (1.0, 0.0)):
        self.dist = all_pairs_exact(g)
        self.declared_stretch = declared_stretch

    def estimate(self, u: int, v: int) -> float:
        d = self.dist[u, v]
        return int(d) if math.isfinite(d) else math.inf


# -- stretch audits ----------------------------------------------------------


@dataclass
class StretchAudit:
    mult: float
    add: float
    pairs_checked: int = 0
    violation_count: int = 0
    violations: list[tuple[int, int, float, float]] = field(default_factory=list)
    exact_violation_count: int = 0
    exact_violations: list[tuple[int, int, float, float]] = field(default_factory=list)
    worst_multiplicative: float = 1.0
    worst_additive_at_2x: float = -math.inf
    histogram: Counter = field(default_factory=Counter)
    kind_counts: Counter = field(default_factory=Counter)
    max_lookups: int = 0

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def to_lines(self) -> list[str]:
        lines = [
            f"stretch bound: d <= est <= max(d, {self.mult:g}*d + {self.add:g})",
            f"pairs checked: {self.pairs_checked}",
            f"violations: {self.violation_count}",
            f"exact-path mismatches: {self.exact_violation_count}",
            f"worst multiplicative: {self.worst_multiplicative:.4f}",
            f"worst est - 2d: {self.worst_additive_at_2x:g}",
            f"max lookups per query: {self.max_lookups}",
            "path kinds: " + ", ".join(f"{PathKind(k).name}={c}" for k, c in sorted(self.kind_counts.items())),
            "est - d histogram: " + ", ".join(f"{int(k)}:{c}" for k, c in sorted(self.histogram.items())),
        ]
        lines += [f"VIOLATION u={u} v={v} d={d:g} est={e:g}" for u, v, d, e in self.violations]
        lines.append("PASS" if self.passed else "FAIL")
        return lines

    def to_summary(self) -> dict:
        out = asdict(self)
        out["histogram"] = {str(int(k)): c for k, c in sorted(self.histogram.items())}
        out["kind_counts"] = {PathKind(k).name: c for k, c in sorted(self.kind_counts.items())}
        out["passed"] = self.passed
        return out

    def _absorb(self, u, vs, d, est, kind, lookups):
        finite = np.isfinite(d)
        vs, d, est, kind, lookups = vs[finite], d[finite], est[finite], kind[finite], lookups[finite]
        self.pairs_checked += len(vs)
        if not len(vs):
            return
        upper = np.maximum(d, self.mult * d + self.add)
        bad = (est < d) | (est > upper)
        self._record(self.violations, "violation_count", u, vs, d, est, bad)
        exact = (kind == PathKind.EXACT_A) | (kind == PathKind.EXACT_NEAR) | (kind == PathKind.SAME_VERTEX)
        self._record(self.exact_violations, "exact_violation_count", u, vs, d, est, exact & (est != d))
        pos = d > 0
        if pos.any():
            with np.errstate(invalid="ignore"):
                self.worst_multiplicative = max(self.worst_multiplicative, float((est[pos] / d[pos]).max()))
            self.worst_additive_at_2x = max(self.worst_additive_at_2x, float((est[pos] - 2 * d[pos]).max()))
        gap, counts = np.unique(est - d, return_counts=True)
        self.histogram.update(dict(zip(gap.tolist(), counts.tolist())))
        kinds, counts = np.unique(kind, return_counts=True)
        self.kind_counts.update(dict(zip(kinds.tolist(), counts.tolist())))
        self.max_lookups = max(self.max_lookups, int(lookups.max()))

    def _record(self, sink, counter, u, vs, d, est, mask):
        hits = np.nonzero(mask)[0]
        setattr(self, counter, getattr(self, counter) + len(hits))
        for i in hits[: max(0, MAX_RECORDED - len(sink))]:
            sink.append((int(u), int(vs[i]), float(d[i]), float(est[i])))


def audit_stretch(
    g: Graph,
    ado: AdoStructure,
    mult: float,
    add: float,
    pair_budget: int | None = None,
    seed: int = 0,
    dist: np.ndarray | None = None,
    estimate_hook: EstimateHook | None = None,
    workers: int = 1,
) -> StretchAudit:
    """Check ``d <= est <= max(d, mult*d + add)`` against exact BFS distances.

    With no ``pair_budget`` (or one covering all ``n**2`` ordered pairs) every
    pair is audited through the vectorised row query; otherwise
    ``pair_budget`` random pairs go through the scalar query. Pairs in
    different components are skipped.
    """
    n = g.n
    dist = all_pairs_exact(g) if dist is None else dist
    audit = StretchAudit(mult, add)
    if pair_budget is None or pair_budget >= n * n:
        everyone = np.arange(n)

        def row(u):
            est, kind, lookups = query_row(ado, u)
            if estimate_hook is not None:
                est = estimate_hook(u, everyone, est)
            return u, est, kind, lookups

        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            for u, est, kind, lookups in pool.map(row, range(n)):
                audit._absorb(u, everyone, dist[u], est, kind, lookups)
        return audit

    rng = np.random.default_rng(seed)
    us = rng.integers(0, n, size=pair_budget)
    vs = rng.integers(0, n, size=pair_budget)
    for u, v in zip(us.tolist(), vs.tolist()):
        res = query(ado, u, v)
        est = np.array([float(res.estimate)])
        if estimate_hook is not None:
            est = estimate_hook(u, np.array([v]), est)
        audit._absorb(
            u, np.array([v]), dist[u, [v]], est, np.array([int(res.path_kind)]), np.array([res.lookups])
        )
    return audit


# -- distinguishers and set intersection ------------------------------------


class DistinguisherAnswer(str, Enum):
    AT_MOST_A = "at_most_a"
    AT_LEAST_B = "at_least_b"


def distinguisher_threshold(stretch: tuple[float, float], a: int, b: int) -> float:
    mult, add = stretch
    threshold = max(a, mult * a + add)
    if not threshold < b:
        raise InputError(
            f"declared stretch ({mult:g}, {add:g}) cannot separate d <= {a} from d >= {b}: "
            f"max(a, mult*a + add) = {threshold:g}"
        )
    return threshold


def distinguisher(oracle: Oracle, u: int, v: int, a: int, b: int) -> DistinguisherAnswer:
    threshold = distinguisher_threshold(oracle.declared_stretch, a, b)
    if oracle.estimate(u, v) <= threshold:
        return DistinguisherAnswer.AT_MOST_A
    return DistinguisherAnswer.AT_LEAST_B


def solve_set_intersection(
    inst: SetIntersectionInstance,
    k: int,
    oracle_builder: Callable[[Graph], Oracle] = ExactOracle,
) -> np.ndarray:
    """Answer every ``S_i`` vs ``S_j`` query through a ``(k, k+2)``-distinguisher on the merged gadget."""
    gadget = gen_merged(inst, k)
    oracle = oracle_builder(gadget.graph)
    distinguisher_threshold(oracle.declared_stretch, k, k + 2)
    out = np.zeros((inst.n_sets, inst.n_sets), dtype=bool)
    for i, vi in enumerate(gadget.left_rep):
        for j, uj in enumerate(gadget.right_rep):
            out[i, j] = distinguisher(oracle, vi, uj, k, k + 2) is DistinguisherAnswer.AT_MOST_A
    return out


# -- lemma suite -------------------------------------------------------------

LEMMAS = ("ball_nbhd_nested", "ball_nbhd_by_size", "ecc_ball_sandwich", "subgraph_ecc_monotone", "ecc_composition", "rad_degree_floor")


@dataclass
class LemmaResult:
    checked: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


@dataclass
class LemmaReport:
    results: dict[str, LemmaResult] = field(default_factory=lambda: {name: LemmaResult() for name in LEMMAS})

    @property
    def total_checked(self) -> int:
        return sum(r.checked for r in self.results.values())

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def merge(self, other: "LemmaReport") -> None:
        for name, res in other.results.items():
            mine = self.results.setdefault(name, LemmaResult())
            mine.checked += res.checked
            mine.counterexamples.extend(res.counterexamples)

    def to_lines(self) -> list[str]:
        lines = []
        for name, res in self.results.items():
            state = "ok" if res.passed else f"{len(res.counterexamples)} counterexamples"
            lines.append(f"{name}: {res.checked} tuples, {state}")
            lines += [f"  counterexample {json.dumps(c)}" for c in res.counterexamples[:10]]
        lines.append(f"total tuples: {self.total_checked} -> {'PASS' if self.passed else 'FAIL'}")
        return lines

    def to_summary(self) -> dict:
        return {
            "total_checked": self.total_checked,
            "passed": self.passed,
            "lemmas": {
                name: {"checked": r.checked, "passed": r.passed, "counterexamples": r.counterexamples[:10]}
                for name, r in self.results.items()
            },
        }


class _Metrics:
    """Exact balls from the distance matrix; neighbourhoods and ``ecc`` from truncated BFS."""

    def __init__(self, g: Graph, dist: np.ndarray):
        self.g = g
        self.dist = dist
        self._sorted = np.sort(dist, axis=1)
        self._rad: dict[int, int] = {}

    def ball(self, v: int, r: int) -> frozenset[int]:
        row = self.dist[v]
        return frozenset(np.nonzero((row > 0) & (row <= r))[0].tolist())

    def nbhd(self, v: int, s: int) -> frozenset[int]:
        return truncated_bfs(self.g, v, s).members

    def ecc(self, v: int, s: int) -> int:
        return truncated_bfs(self.g, v, s).deepest_complete_radius

    def rad(self, s: int) -> int:
        if s not in self._rad:
            self._rad[s] = int(ecc_trunc_sorted(self._sorted, s).min())
        return self._rad[s]


def _floor_log(base: int, x: float) -> int:
    """``floor(log_base(x))`` in exact arithmetic for ``base >= 2``, ``x > 0``."""
    t = 0
    if x >= 1:
        while base ** (t + 1) <= x:
            t += 1
        return t
    while base ** t > x:
        t -= 1
    return t


def _connected_subset(g: Graph, v: int, size: int, rng) -> list[int]:
    chosen = {v}
    boundary = set(g.adjacency[v])
    while len(chosen) < size and boundary:
        w = sorted(boundary)[int(rng.integers(len(boundary)))]
        chosen.add(w)
        boundary.discard(w)
        boundary.update(x for x in g.adjacency[w] if x not in chosen)
    return sorted(chosen)


def _bfs_subtree(g: Graph, dist: np.ndarray, root: int, top: int) -> list[int]:
    """Descendants of ``top`` in the BFS tree of ``root`` whose parent is the smallest-id predecessor."""
    row = dist[root]
    parent = {}
    for w in range(g.n):
        if np.isfinite(row[w]) and row[w] > 0:
            parent[w] = min(x for x in g.adjacency[w] if row[x] == row[w] - 1)
    out = [top]
    frontier = [top]
    children: dict[int, list[int]] = {}
    for w, p in parent.items():
        children.setdefault(p, []).append(w)
    while frontier:
        frontier = [c for x in frontier for c in children.get(x, [])]
        out.extend(frontier)
    return sorted(out)


def check_lemma_suite(g: Graph, samples: int, seed: int = 0, dist: np.ndarray | None = None) -> LemmaReport:
    """Evaluate each lemma on ``samples`` random tuples from its stated domain."""
    n = g.n
    report = LemmaReport()
    if n < 3:
        return report
    dist = all_pairs_exact(g) if dist is None else dist
    if not np.isfinite(dist).all():
        raise InputError("lemma suite expects a connected graph")
    rng = np.random.default_rng(seed)
    m = _Metrics(g, dist)
    diam = int(dist.max())
    delta = max_degree(g)

    def pick(lo, hi):
        return int(rng.integers(lo, hi + 1))

    def fail(name, **tup):
        report.results[name].counterexamples.append(tup)

    for _ in range(samples):
        v, s, r = pick(0, n - 1), pick(1, n - 1), pick(1, max(1, diam))
        ball, nb = m.ball(v, r), m.nbhd(v, s)
        relations = [ball < nb, nb < ball, nb == ball]
        report.results["ball_nbhd_nested"].checked += 1
        if sum(relations) != 1:
            fail("ball_nbhd_nested", v=v, s=s, r=r)
        report.results["ball_nbhd_by_size"].checked += 1
        if (len(ball) < len(nb) and not ball < nb) or (len(nb) < len(ball) and not nb < ball) or (
            len(nb) == len(ball) and nb != ball
        ):
            fail("ball_nbhd_by_size", v=v, s=s, r=r)

    for _ in range(samples):
        v, s = pick(0, n - 1), pick(1, n - 1)
        e, nb = m.ecc(v, s), m.nbhd(v, s)
        report.results["ecc_ball_sandwich"].checked += 1
        if not m.ball(v, e) <= nb or (s < n - 1 and m.ball(v, e + 1) <= nb):
            fail("ecc_ball_sandwich", v=v, s=s, ecc=e)

    for i in range(samples):
        v = pick(0, n - 1)
        if i % 3 == 0:
            sub = _connected_subset(g, v, pick(2, n), rng)
        elif i % 3 == 1:
            root = pick(0, n - 1)
            sub = _bfs_subtree(g, dist, root, v)
        else:
            others = rng.permutation([w for w in range(n) if w != v])[: pick(1, n - 1)]
            sub = sorted([v, *others.tolist()])
        sub_g, remap = g.induced_subgraph(sub)
        comp = truncated_bfs(sub_g, remap[v], sub_g.n).order
        if len(comp) < 1:
            continue
        # N(v, s) must hold s vertices of v's component in the subgraph
        s = pick(1, len(comp))
        report.results["subgraph_ecc_monotone"].checked += 1
        lhs, rhs = m.ecc(v, s), truncated_bfs(sub_g, remap[v], s).deepest_complete_radius
        if lhs > rhs:
            fail("subgraph_ecc_monotone", v=v, s=s, subgraph=sub, ecc_g=lhs, ecc_sub=rhs)

    for _ in range(samples):
        v = pick(0, n - 1)
        s1 = pick(1, max(1, (n - 2) // 2))
        s2_max = (n - 2) // s1 - 1
        if s2_max < 1:
            continue
        s2 = pick(1, s2_max)
        if not s1 * (s2 + 1) < n - 1:
            continue
        report.results["ecc_composition"].checked += 1
        lhs = m.ecc(v, s1 * (s2 + 1))
        rhs = m.ecc(v, s1) + m.rad(s2)
        if lhs < rhs:
            fail("ecc_composition", v=v, s1=s1, s2=s2, lhs=lhs, rhs=rhs)

    if delta >= 2:
        for _ in range(samples):
            s = float(rng.uniform(1, n))
            if s >= n:
                continue
            report.results["rad_degree_floor"].checked += 1
            rad = m.rad(int(math.floor(s)))
            bound = _floor_log(delta, s / 2)
            if rad < bound:
                fail("rad_degree_floor", s=s, rad=rad, bound=bound, delta=delta)
    return report
