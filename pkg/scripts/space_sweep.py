"""Run a bench config and print how stored entries scale against n^2.

    python3 scripts/space_sweep.py scripts/configs/space_sweep_k2.json --out sweep.csv
"""

import argparse
import json
import math
from collections import defaultdict
from pathlib import Path

from degree_ado.bench import run_bench, write_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("config")
    parser.add_argument("--out", default="space_sweep.csv")
    args = parser.parse_args()

    rows = run_bench(json.loads(Path(args.config).read_text()))
    write_csv(rows, args.out)

    by_run = defaultdict(list)
    for row in rows:
        if row.get("error"):
            print(f"run {row['run']} n={row['n']}: {row['error']}")
            continue
        by_run[row["run"]].append(row)
    for run, series in by_run.items():
        print(f"run {run} ({series[0]['params']})")
        print(f"  {'n':>6} {'delta':>5} {'|A|':>6} {'entries':>10} {'/n^2':>8} {'/n^(5/3+a)':>11} {'viol':>5}")
        for row in series:
            n = row["n"]
            scaled = row["stored_entry_count"] / n ** (5 / 3 + row["alpha"])
            print(
                f"  {n:>6} {row['delta']:>5} {row['a_size']:>6} {row['stored_entry_count']:>10} "
                f"{row['entries_per_n2']:>8.4f} {scaled:>11.3f} {row.get('violations', '-'):>5}"
            )
        ratios = [r["entries_per_n2"] for r in series]
        trend = all(a > b for a, b in zip(ratios, ratios[1:]))
        slope = math.log(series[-1]["stored_entry_count"] / series[0]["stored_entry_count"]) / math.log(
            series[-1]["n"] / series[0]["n"]
        ) if len(series) > 1 else float("nan")
        print(f"  entries/n^2 strictly decreasing: {trend}; fitted exponent {slope:.3f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
