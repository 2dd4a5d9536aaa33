"""End-to-end acceptance gate. Each criterion prints one PASS/FAIL line."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from degree_ado.ado import LOOKUP_BUDGET, AdoParams, build_ado, build_for_degree, query, space_report
from degree_ado.bench import run_bench
from degree_ado.gadgets import gen_butterfly, gen_merged, gen_random_bounded_degree, gen_random_connected
from degree_ado.gadgets import gen_random_instance, gen_split
from degree_ado.graph import all_pairs_exact, distance_rows, max_degree
from degree_ado.truncated import rad_trunc
from degree_ado.verify import audit_stretch, check_lemma_suite, solve_set_intersection

pytestmark = pytest.mark.slow

GRAPHS_PER_SETTING = 20
THEOREM_SIZES = (256, 1024, 2000)
CLAIM2_ALPHAS = (0.0, 0.1, 0.2)
CLAIM2_CN = (1.0, 16.0)
CLAIM2_GRAPHS = 4


def report(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@dataclass
class BuildRecord:
    label: str
    n: int
    violations: int
    exact_violations: int
    pairs: int
    max_lookups: int
    a_size: int
    target: float
    max_bunch: int
    max_cluster: int
    stored: int
    near_total: int
    near_max: int
    extra: dict = field(default_factory=dict)


def _record(label, g, ado, audit) -> BuildRecord:
    rep = space_report(ado)
    return BuildRecord(
        label=label,
        n=g.n,
        violations=audit.violation_count,
        exact_violations=audit.exact_violation_count,
        pairs=audit.pairs_checked,
        max_lookups=audit.max_lookups,
        a_size=len(ado.a_ids),
        target=ado.params.hitting_target(g.n),
        max_bunch=int(ado.index.bunch_sizes().max()),
        max_cluster=int(ado.index.cluster_sizes().max()),
        stored=ado.stored_entry_count,
        near_total=rep["near_total"],
        near_max=rep["near_max"],
    )


def _scalar_lookup_probe(ado, rng, count=200) -> int:
    us = rng.integers(0, ado.n, size=count)
    vs = rng.integers(0, ado.n, size=count)
    return max(query(ado, int(u), int(v)).lookups for u, v in zip(us, vs))


@pytest.fixture(scope="module")
def degree_runs():
    records = []
    rng = np.random.default_rng(2024)
    for k in (2, 3):
        eps = 1 / (2 * k)
        for n in THEOREM_SIZES:
            delta = int(math.floor(n ** (1 / k - eps) + 1e-9))
            for i in range(GRAPHS_PER_SETTING):
                seed = 1000 * k + 10 * n + i
                g = gen_random_bounded_degree(n, delta, int(0.9 * n * delta / 2), seed=seed)
                with warnings.catch_warnings():
                    warnings.simplefilter("error")
                    ado = build_for_degree(g, k, eps, 1.0, seed=seed)
                audit = audit_stretch(g, ado, 2, 1 - k, dist=all_pairs_exact(g))
                rec = _record(f"k={k} n={n} #{i}", g, ado, audit)
                rec.extra["delta"] = max_degree(g)
                rec.extra["delta_cap"] = delta
                rec.extra["probe_lookups"] = _scalar_lookup_probe(ado, rng)
                records.append(rec)
    return records


def _certified_truncation(n, alpha, c_n, c_b=4.0) -> float:
    """``c_R * n**(3 alpha)`` for the largest ``c_R`` meeting the neighbourhood size chain."""
    return c_n * n ** (1 / 3 + 2 * alpha) / (c_b * n ** (1 / 3 - alpha) + 1) - 2


def _smallest_chain_cn(n, alpha, c_b=4.0) -> float:
    """Smallest ``c_N >= 1`` for which the chain admits ``c_R = 0``."""
    # nudged up so rounding cannot leave the chain a hair short of c_R = 0
    return max(1.0, 2 * (c_b * n ** (1 / 3 - alpha) + 1) / n ** (1 / 3 + 2 * alpha) * (1 + 1e-9))


@pytest.fixture(scope="module")
def generic_runs():
    records = []
    rng = np.random.default_rng(7)
    n = 1000
    for alpha in CLAIM2_ALPHAS:
        for c_n in sorted({_smallest_chain_cn(n, alpha), *CLAIM2_CN}):
            for i in range(CLAIM2_GRAPHS):
                seed = int(100 * alpha) * 1000 + int(10 * c_n) * 10 + i
                g = gen_random_connected(n, 4, 1800, seed=seed)
                dist = all_pairs_exact(g)
                ado = build_ado(g, AdoParams(alpha=alpha, c_n=c_n, c_b=4.0, seed=seed))
                s = _certified_truncation(n, alpha, c_n)
                rad = rad_trunc(g, s, dist) if s >= 1 else 0
                nominal = audit_stretch(g, ado, 2, 1 - rad, dist=dist)
                declared = audit_stretch(g, ado, *ado.declared_stretch, dist=dist)
                rec = _record(f"alpha={alpha} c_N={c_n:.3g} #{i}", g, ado, declared)
                rec.extra.update(
                    s_R=s,
                    rad=rad,
                    in_regime=s >= 0,
                    nominal_violations=nominal.violation_count,
                    exact_violations_nominal=nominal.exact_violation_count,
                    declared=ado.declared_stretch,
                    probe_lookups=_scalar_lookup_probe(ado, rng),
                )
                records.append(rec)
    return records


def test_criterion_01_degree_stretch(degree_runs):
    bad = [r.label for r in degree_runs if r.violations]
    conforming = all(r.extra["delta"] <= r.extra["delta_cap"] for r in degree_runs)
    pairs = sum(r.pairs for r in degree_runs)
    report(
        1,
        not bad and conforming and len(degree_runs) == 2 * 3 * GRAPHS_PER_SETTING,
        f"{len(degree_runs)} graphs, {pairs} pairs audited against max(d, 2d+1-k), violations in {bad or 'none'}",
    )


def test_criterion_02_generic_stretch(generic_runs):
    regime = [r for r in generic_runs if r.extra["in_regime"]]
    outside = [r for r in generic_runs if not r.extra["in_regime"]]
    bad = [r.label for r in regime if r.extra["nominal_violations"] or r.violations]
    bad += [r.label for r in outside if r.violations]
    settings = sorted({(r.label.split(" #")[0], r.extra["rad"]) for r in regime}, key=str)
    # below the chain (no c_R >= 0) the (2, 1) fallback has no proof; report what happens there
    fallback_misses = sum(r.extra["nominal_violations"] for r in outside)
    report(
        2,
        not bad and len(regime) >= len(CLAIM2_ALPHAS) * CLAIM2_GRAPHS,
        f"{len(regime)} graphs (n=1000) inside the size chain, bound max(d, 2d+1-rad(c_R n^(3a))) with rad per setting "
        f"{settings}; violations in {bad or 'none'}; out-of-chain builds ({len(outside)}, c_N too small) meet their "
        f"declared stretch, while the (2,1) fallback misses {fallback_misses} pairs there (report-only)",
    )


def test_criterion_03_exact_paths(degree_runs, generic_runs):
    runs = degree_runs + generic_runs
    bad = [r.label for r in runs if r.exact_violations]
    report(3, not bad, f"EXACT_A/EXACT_NEAR answers equal BFS on {len(runs)} audited graphs; mismatches in {bad or 'none'}")


def test_criterion_04_hitting_set_bounds(degree_runs, generic_runs):
    runs = degree_runs + generic_runs
    hard = [r.label for r in runs if max(r.max_bunch, r.max_cluster) > 4 * r.n / r.target]
    soft = [r.label for r in runs if r.a_size > 8 * r.target * math.log(r.n)]
    worst = max(max(r.max_bunch, r.max_cluster) / (4 * r.n / r.target) for r in runs)
    a_ratio = max(r.a_size / (r.target * math.log(r.n)) for r in runs)
    report(
        4,
        not hard,
        f"max |B|,|C| / (4n/target) = {worst:.3f}; max |A|/(target ln n) = {a_ratio:.3f} "
        f"(report-only, over 8 in {soft or 'none'})",
    )


def test_criterion_05_space_accounting(degree_runs, generic_runs):
    runs = degree_runs + generic_runs
    identity = all(r.stored == r.a_size * r.n + r.near_total for r in runs)
    bounded = all(r.stored <= r.a_size * r.n + r.n * r.near_max for r in runs)
    rows = run_bench({"seed": 5, "runs": [{"n": [512, 1024, 2048], "k": 2, "eps": 0.25, "audit_pairs": 0}]})
    ratios = [row["entries_per_n2"] for row in rows]
    decreasing = len(ratios) == 3 and all(a > b for a, b in zip(ratios, ratios[1:]))
    report(
        5,
        identity and bounded and decreasing,
        f"identity {identity}, bound {bounded}; entries/n^2 over n=512,1024,2048: "
        + ", ".join(f"{x:.4f}" for x in ratios),
    )


BUTTERFLY_CASES = [(16, 2), (64, 2), (8, 3), (16, 4), (81, 2), (81, 4)]


def test_criterion_06_butterfly():
    problems = []
    for n_sets, k in BUTTERFLY_CASES:
        bf = gen_butterfly(n_sets, k)
        d = distance_rows(bf.graph, list(bf.left_rep))[:, list(bf.right_rep)]
        if not (d == k).all():
            problems.append(f"({n_sets},{k}) distance")
        if max_degree(bf.graph) > 2 * round(n_sets ** (1 / k)):
            problems.append(f"({n_sets},{k}) degree")
    report(6, not problems, f"(N,k) in {BUTTERFLY_CASES}: all N^2 pairs at distance k, degrees <= 2b; problems {problems or 'none'}")


def test_criterion_07_reduction():
    mismatches = 0
    checked = 0
    for n_sets, universe, density in [(16, 8, 0.3), (32, 8, 0.3), (64, 16, 0.25)]:
        for k in (2, 3):
            for seed in range(10):
                inst = gen_random_instance(n_sets, universe, density, seed=seed)
                truth = inst.intersection_matrix()
                gadget = gen_merged(inst, k)
                d = distance_rows(gadget.graph, list(gadget.left_rep))[:, list(gadget.right_rep)]
                finite = d[np.isfinite(d)]
                mismatches += int(((d == k) != truth).sum())
                mismatches += int(((finite - k) % 2 != 0).sum() + (finite < k).sum())
                mismatches += int((solve_set_intersection(inst, k) != truth).sum())
                checked += n_sets * n_sets
    report(7, mismatches == 0, f"{checked} (i,j) pairs over 60 instances; mismatches {mismatches}")


def test_criterion_08_split_geometry():
    problems = []
    for k, eps, c in [(2, 0.5, 1.0), (4, 0.25, 2.0)]:
        inst = gen_random_instance(16, 4, 0.3, seed=11)
        gadget = gen_split(inst, k, eps, c)
        t = gadget.t
        if t != math.ceil((k + c) / (2 * eps)):
            problems.append(f"t for {(k, eps, c)}")
        d = distance_rows(gadget.graph, list(gadget.left_rep))[:, list(gadget.right_rep)]
        hit = inst.intersection_matrix()
        near, far = 2 * t + k - 2, 4 * t + k - 2
        if not (d[hit] == near).all() or not (d[~hit] >= far).all():
            problems.append(f"distances for {(k, eps, c)}")
        if not (2 - eps) * near + c < far:
            problems.append(f"gap inequality for {(k, eps, c)}")
        if not hit.any() or hit.all():
            problems.append(f"degenerate instance for {(k, eps, c)}")
    report(8, not problems, f"split factors 3 and 12 give the 2t+k-2 / 4t+k-2 gap; problems {problems or 'none'}")


def test_criterion_09_lemma_suite():
    total = 0
    failures = []
    for i in range(20):
        n = 100 + 20 * i
        g = gen_random_connected(n, 3 + i % 4, int(1.4 * n), seed=300 + i)
        rep = check_lemma_suite(g, samples=100, seed=i)
        total += rep.total_checked
        failures += [f"graph {i} {name}" for name, res in rep.results.items() if not res.passed]
    report(9, total >= 10_000 and not failures, f"{total} tuples over 20 connected graphs (n<=480); counterexamples {failures or 'none'}")


def test_criterion_10_lookup_budget(degree_runs, generic_runs):
    runs = degree_runs + generic_runs
    worst = max(max(r.max_lookups, r.extra["probe_lookups"]) for r in runs)
    report(10, worst <= LOOKUP_BUDGET, f"max lookups per query over every audited pair: {worst} (budget {LOOKUP_BUDGET})")
