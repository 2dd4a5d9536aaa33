"""Exhaustive stretch profile of degree-tuned oracles on random bounded-degree graphs.

Prints, per (n, k), the histogram of est - d and how often each answer path fires.
"""

import argparse
import math
from collections import Counter

from degree_ado.ado import PathKind, build_for_degree
from degree_ado.gadgets import gen_random_bounded_degree
from degree_ado.verify import audit_stretch


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[256, 1024])
    parser.add_argument("--k", type=int, nargs="+", default=[2, 3])
    parser.add_argument("--graphs", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    for k in args.k:
        eps = 1 / (2 * k)
        for n in args.n:
            delta = int(math.floor(n ** (1 / k - eps) + 1e-9))
            hist, kinds = Counter(), Counter()
            violations = 0
            for i in range(args.graphs):
                seed = args.seed + 97 * i + n
                g = gen_random_bounded_degree(n, delta, int(0.9 * n * delta / 2), seed=seed)
                ado = build_for_degree(g, k, eps, 1.0, seed=seed)
                audit = audit_stretch(g, ado, 2, 1 - k)
                hist.update(audit.histogram)
                kinds.update(audit.kind_counts)
                violations += audit.violation_count
            total = sum(hist.values())
            print(f"k={k} n={n} delta<={delta}: {total} pairs, {violations} violations of max(d, 2d{1 - k:+d})")
            print("  est-d: " + "  ".join(f"{int(g)}:{c / total:.4f}" for g, c in sorted(hist.items())))
            print("  paths: " + "  ".join(f"{PathKind(p).name}:{c / total:.4f}" for p, c in sorted(kinds.items())))


if __name__ == "__main__":
    main()
