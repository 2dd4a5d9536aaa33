"""Command-line front end.

Exit codes: 0 ok, 1 stretch violations found, 2 usage, 3 I/O, 4 format,
5 parameter domain, 6 hitting-set non-convergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import gadgets
from .ado import AdoParams, build_ado, build_for_degree, query, space_report
from .ado_io import load_ado, save_ado
from .bench import format_csv, run_bench
from .errors import AdoError, NonConvergenceError
from .graph import read_edge_list, write_edge_list
from .verify import audit_stretch, check_lemma_suite

log = logging.getLogger("degree_ado")

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_IO, EXIT_FORMAT, EXIT_PARAM, EXIT_NONCONV = range(7)
THREADS_ENV = "DEGREE_ADO_THREADS"


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")


def cmd_build(args) -> int:
    g = read_edge_list(args.graph)
    if args.k is not None:
        if args.eps is None:
            raise argparse.ArgumentTypeError("--k needs --eps")
        ado = build_for_degree(g, args.k, args.eps, args.c, c_b=args.c_b, seed=args.seed)
    else:
        ado = build_ado(g, AdoParams(alpha=args.alpha, c_n=args.c_n, c_b=args.c_b, seed=args.seed))
    save_ado(ado, args.out)
    report = space_report(ado)
    report["declared_stretch"] = list(ado.declared_stretch)
    for key, value in report.items():
        print(f"{key}: {value}")
    return EXIT_OK


def cmd_query(args) -> int:
    ado = load_ado(args.oracle)
    res = query(ado, args.u, args.v)
    est = "inf" if math.isinf(res.estimate) else str(res.estimate)
    print(f"{est} {res.path_kind.name}")
    return EXIT_OK


def cmd_audit(args) -> int:
    g = read_edge_list(args.graph)
    ado = load_ado(args.oracle)
    if ado.n != g.n:
        raise AdoError(f"oracle has n={ado.n} but graph has n={g.n}")
    mult = ado.declared_stretch[0] if args.mult is None else args.mult
    add = ado.declared_stretch[1] if args.add is None else args.add
    budget = None if args.exhaustive or args.pairs is None else args.pairs
    audit = audit_stretch(g, ado, mult, add, pair_budget=budget, seed=args.seed, workers=args.threads)
    print("\n".join(audit.to_lines()))
    if args.summary:
        _write_json(args.summary, audit.to_summary())
    return EXIT_OK if audit.passed else EXIT_VIOLATIONS


def _write_gadget(gadget, out) -> None:
    write_edge_list(gadget.graph, out)
    Path(f"{out}.reps").write_text(gadgets.format_rep_map(gadget))
    print(f"wrote {out} (n={gadget.graph.n}, m={gadget.graph.m}, t={gadget.t}) and {out}.reps")


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "random":
        make = gadgets.gen_random_connected if args.connected else gadgets.gen_random_bounded_degree
        g = make(args.n, args.delta, args.m, args.seed)
        write_edge_list(g, args.out)
        print(f"wrote {args.out} (n={g.n}, m={g.m})")
    elif kind == "instance":
        inst = gadgets.gen_random_instance(args.N, args.X, args.density, args.seed)
        gadgets.write_instance(inst, args.out)
        print(f"wrote {args.out} (N={inst.n_sets}, X={inst.universe})")
    elif kind == "butterfly":
        _write_gadget(gadgets.gen_butterfly(args.N, args.k), args.out)
    elif kind == "merged":
        _write_gadget(gadgets.gen_merged(gadgets.read_instance(args.instance), args.k), args.out)
    elif kind == "split":
        inst = gadgets.read_instance(args.instance)
        _write_gadget(gadgets.gen_split(inst, args.k, args.eps, args.c), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    config = json.loads(Path(args.config).read_text() or "{}")
    text = format_csv(run_bench(config))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_lemmas(args) -> int:
    g = read_edge_list(args.graph)
    report = check_lemma_suite(g, args.samples, seed=args.seed)
    print("\n".join(report.to_lines()))
    if args.summary:
        _write_json(args.summary, report.to_summary())
    return EXIT_OK if report.passed else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="degree-ado", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=int(os.environ.get(THREADS_ENV, "1")))
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an oracle from an edge list")
    p.add_argument("graph")
    p.add_argument("out")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--c-n", type=float, default=1.0)
    p.add_argument("--c-b", type=float, default=4.0)
    p.add_argument("--k", type=int, help="degree exponent; switches to the (k, eps, c) parameterisation")
    p.add_argument("--eps", type=float)
    p.add_argument("--c", type=float, default=1.0)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="estimate one distance")
    p.add_argument("oracle")
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("audit", help="compare an oracle with exact BFS distances")
    p.add_argument("graph")
    p.add_argument("oracle")
    p.add_argument("--mult", type=float, help="defaults to the oracle's declared stretch")
    p.add_argument("--add", type=float)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--pairs", type=int)
    p.add_argument("--summary", help="write a JSON summary here")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("gen", help="generate graphs, gadgets and instances")
    p.add_argument("kind", choices=["random", "butterfly", "merged", "split", "instance"])
    p.add_argument("out")
    p.add_argument("--n", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--connected", action="store_true")
    p.add_argument("--N", type=int)
    p.add_argument("--X", type=int)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--instance")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a JSON-configured sweep and emit CSV")
    p.add_argument("config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("lemmas", help="sample the truncated-eccentricity lemmas on a connected graph")
    p.add_argument("graph")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--summary")
    p.set_defaults(func=cmd_lemmas)
    return parser


_REQUIRED = {
    "random": ("n", "delta", "m"),
    "instance": ("N", "X"),
    "butterfly": ("N", "k"),
    "merged": ("instance", "k"),
    "split": ("instance", "k", "eps", "c"),
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    if args.command == "gen":
        missing = [f"--{name}" for name in _REQUIRED[args.kind] if getattr(args, name) is None]
        if missing:
            parser.error(f"gen {args.kind} needs {', '.join(missing)}")
    config = {k: v for k, v in vars(args).items() if k != "func"}
    log.info("resolved configuration: %s", json.dumps(config, sort_keys=True))
    try:
        return args.func(args)
    except NonConvergenceError as exc:
        print(f"error: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_NONCONV
    except AdoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except argparse.ArgumentTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
