"""Sample the truncated-eccentricity lemmas over many random connected graphs."""

import argparse
import json

import numpy as np

from degree_ado.gadgets import gen_random_connected
from degree_ado.verify import LemmaReport, check_lemma_suite


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--graphs", type=int, default=20)
    parser.add_argument("--n-max", type=int, default=500)
    parser.add_argument("--samples", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--summary", help="optional JSON output")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    total = LemmaReport()
    for i in range(args.graphs):
        n = int(rng.integers(30, args.n_max + 1))
        delta = int(rng.integers(3, 8))
        m = int(rng.integers(n - 1, min(n * delta // 2, 2 * n) + 1))
        g = gen_random_connected(n, delta, m, seed=int(rng.integers(2**31)))
        rep = check_lemma_suite(g, args.samples, seed=i)
        print(f"graph {i:>2}: n={n:>3} m={m:>4} delta<={delta}  tuples={rep.total_checked:>5}  {'ok' if rep.passed else 'FAIL'}")
        total.merge(rep)
    print()
    print("\n".join(total.to_lines()))
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(total.to_summary(), fh, indent=2)


if __name__ == "__main__":
    main()
