"""Parameter sweeps producing one CSV row per (run, n)."""

from __future__ import annotations

import csv
import io
import math
import time
import warnings
from pathlib import Path

import numpy as np

from .ado import AdoParams, build_ado, build_for_degree, space_report, degree_params
from .gadgets import gen_random_bounded_degree, gen_random_connected
from .graph import all_pairs_exact, max_degree
from .verify import audit_stretch

COLUMNS = [
    "run",
    "family",
    "n",
    "delta",
    "m",
    "params",
    "alpha",
    "c_N",
    "seed",
    "build_time",
    "a_size",
    "stored_entry_count",
    "entries_per_n2",
    "worst_multiplicative",
    "worst_additive_at_2x",
    "max_lookups",
    "violations",
    "error",
]


def derive_seed(root: int, *path: int) -> int:
    return int(np.random.SeedSequence(root, spawn_key=path).generate_state(1)[0])


def _delta_for(run: dict, n: int) -> int:
    delta = run.get("delta", "auto")
    if delta == "auto":
        k, eps, c = run["k"], run["eps"], run.get("c", 1.0)
        return max(1, int(math.floor(c * n ** (1 / k - eps))))
    return int(delta)


def _one(run: dict, run_idx: int, n: int, seed: int) -> dict:
    row = {"run": run_idx, "family": run.get("family", "random"), "n": n, "seed": seed}
    delta = _delta_for(run, n)
    fill = float(run.get("fill", 1.0))
    target_m = int(fill * n * delta // 2)
    if row["family"] == "connected":
        g = gen_random_connected(n, max(delta, 2), max(target_m, n - 1), seed)
    else:
        g = gen_random_bounded_degree(n, delta, target_m, seed)
    row.update(delta=max_degree(g), m=g.m)
    t0 = time.perf_counter()
    if "k" in run and "alpha" not in run:
        k, eps, c = run["k"], run["eps"], run.get("c", 1.0)
        alpha, c_n = degree_params(k, eps, c)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ado = build_for_degree(g, k, eps, c, c_b=run.get("c_b", 4.0), seed=seed)
        row["params"] = f"k={k};eps={eps:g};c={c:g}"
    else:
        alpha, c_n = run.get("alpha", 0.0), run.get("c_n", 1.0)
        ado = build_ado(g, AdoParams(alpha=alpha, c_n=c_n, c_b=run.get("c_b", 4.0), seed=seed))
        row["params"] = f"alpha={alpha:g};c_N={c_n:g}"
    row["build_time"] = round(time.perf_counter() - t0, 4)
    rep = space_report(ado)
    row.update(
        alpha=alpha,
        c_N=c_n,
        a_size=rep["a_size"],
        stored_entry_count=rep["stored_entry_count"],
        entries_per_n2=rep["entries_per_n2"],
    )
    pairs = run.get("audit_pairs", 20000)
    if pairs:
        budget = None if pairs == "all" else int(pairs)
        mult, add = ado.declared_stretch
        audit = audit_stretch(g, ado, mult, add, pair_budget=budget, seed=seed, dist=all_pairs_exact(g))
        row.update(
            worst_multiplicative=round(audit.worst_multiplicative, 6),
            worst_additive_at_2x=audit.worst_additive_at_2x,
            max_lookups=audit.max_lookups,
            violations=audit.violation_count,
        )
    return row


def run_bench(config: dict) -> list[dict]:
    """Run every sweep in ``config``; failures become rows with an ``error`` entry."""
    root = int(config.get("seed", 0))
    rows = []
    for run_idx, run in enumerate(config.get("runs", [])):
        sizes = run.get("n", [])
        for n_idx, n in enumerate(sizes if isinstance(sizes, list) else [sizes]):
            seed = derive_seed(root, run_idx, n_idx)
            try:
                rows.append(_one(run, run_idx, int(n), seed))
            except Exception as exc:  # recorded in the CSV; the sweep goes on
                rows.append({"run": run_idx, "n": n, "seed": seed, "error": f"{type(exc).__name__}: {exc}"})
    return rows


def format_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def write_csv(rows: list[dict], path: str | Path) -> None:
    Path(path).write_text(format_csv(rows))
