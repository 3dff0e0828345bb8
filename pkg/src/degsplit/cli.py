"""``degsplit`` command line: gen | solve | verify | oracle | bench.

Solutions go to ``--out`` (or stdout) as compact JSON; the run report
(timings, ledger summary, verdict) goes to stderr, or to ``--report``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Sequence

import numpy as np

from . import graph as gr
from .graph import GraphError, ParseError, RangeError, TypedMultiGraph
from .orient import BudgetExhausted, DomainError, derive_params, lll_orient
from .pi import solve_pi
from .splitting import EdgeTypeError, balanced_split, exact_split
from .subroutines import CostLedger, balanced_orientation, sinkless_orientation
from . import verify as vf

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _emit(text: str, dest: str | None) -> None:
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)


def _report(args, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True) + "\n"
    if getattr(args, "report", None):
        with open(args.report, "w") as fh:
            fh.write(text)
    else:
        sys.stderr.write(text)


# ---------------------------------------------------------------------------
# gen

def _generate(args) -> TypedMultiGraph:
    kind = args.kind
    if kind == "regular":
        return gr.gen_random_regular(args.n, args.delta, args.seed, typed=args.typed)
    if kind == "maxdeg":
        return gr.gen_random_max_degree(args.n, args.delta, args.seed, typed=args.typed)
    edge_type = gr.O if args.type == "O" else gr.C
    if kind in ("path", "cycle", "complete"):
        return gr.gen_structured(kind, args.n, edge_type=edge_type)
    if kind == "star":
        return gr.gen_structured("star", args.n, edge_type=edge_type)
    if kind == "tree":
        return gr.gen_structured("full_tree", args.delta, args.depth, edge_type=edge_type)
    raise gr.BadParam(f"unknown graph kind {kind!r}")


def cmd_gen(args) -> int:
    g = _generate(args)
    _emit(gr.write_json(g), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve

def _orient_params(args):
    return derive_params(args.rho1, args.rho2, args.slack, args.seed, args.max_resample)


def cmd_solve(args) -> int:
    text = open(args.graph).read() if args.graph != "-" else sys.stdin.read()
    g = gr.read_graph(text)
    started = time.perf_counter()
    ledger = CostLedger()
    extra: dict = {}
    task = args.task
    if task == "split":
        sol, _ = balanced_split(g, ledger)
        checks = [("types", lambda: vf.check_types(g, sol)), ("eq1", lambda: vf.check_eq1(g, sol))]
    elif task == "exact":
        sol, _ = exact_split(g, args.mode, ledger)
        checks = [("eq2", lambda: vf.check_eq2(g, sol, args.mode))]
    elif task == "pi":
        if args.y is None:
            raise RangeError("solve pi needs --y")
        delta = args.delta if args.delta is not None else max(g.max_degree, 2)
        sol, _, plan = solve_pi(g, args.y, delta, ledger)
        extra["plan"] = [[s.y, s.kind] for s in plan.steps]
        checks = [("pi", lambda: vf.check_pi(g, delta, args.y, sol))]
    elif task == "orient":
        params = _orient_params(args)
        sol, resamples, stats = lll_orient(g, params, ledger)
        extra.update(resamples=resamples, violations_initial=stats["violations_initial"])
        checks = [("unbalanced", lambda: vf.check_unbalanced(g, sol, params))]
    elif task == "sinkless":
        sol = sinkless_orientation(g, ledger)
        checks = [("sinkless", lambda: vf.check_sinkless(g, sol))]
    elif task == "balanced":
        sol = balanced_orientation(g, ledger)
        checks = [("balanced", lambda: vf.check_balanced(g, sol))]
    else:  # argparse restricts the choices
        raise AssertionError(task)
    elapsed = time.perf_counter() - started

    out_text = gr.write_json(sol)
    _emit(out_text, args.out)
    if args.ledger:
        with open(args.ledger, "w") as fh:
            fh.write(ledger.to_jsonl())
    verdicts = {} if args.no_verify else {name: fn() for name, fn in checks}
    passed = all(v.passed for v in verdicts.values())
    _report(
        args,
        {
            "command": f"solve {task}",
            "input_digest": _digest(text),
            "output_digest": _digest(out_text),
            "seed": args.seed,
            "wall_ms": round(elapsed * 1000, 3),
            "ledger": ledger.summary(),
            "verdict": {k: {"passed": v.passed, "violations": len(v.violations)} for k, v in verdicts.items()},
            **extra,
        },
    )
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    g = gr.read_graph(args.graph)
    prop = args.property
    if prop in ("sinkless", "unbalanced", "balanced"):
        sol = gr.read_orientation(args.solution, g)
        if prop == "sinkless":
            verdict = vf.check_sinkless(g, sol)
        elif prop == "balanced":
            verdict = vf.check_balanced(g, sol)
        else:
            verdict = vf.check_unbalanced(g, sol, _orient_params(args))
    else:
        sol = gr.read_labeling(args.solution, g)
        if prop == "types":
            verdict = vf.check_types(g, sol)
        elif prop == "eq1":
            verdict = vf.check_eq1(g, sol)
        elif prop == "eq2":
            verdict = vf.check_eq2(g, sol, args.mode)
        elif prop == "lemma31":
            verdict = vf.check_lemma31(g, sol)
        else:
            if args.y is None:
                raise RangeError("verify pi needs --y")
            delta = args.delta if args.delta is not None else max(g.max_degree, 2)
            verdict = vf.check_pi(g, delta, args.y, sol)
    for item, observed, allowed in verdict.violations:
        print(json.dumps({"id": item, "observed": observed, "allowed": allowed}, default=str))
    print(json.dumps({"property": prop, "passed": verdict.passed, "violations": len(verdict.violations)}))
    return EXIT_OK if verdict.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# oracle

def cmd_oracle(args) -> int:
    g = gr.read_graph(args.graph)
    if args.target == "labeling":
        res = vf.brute_force_labeling(g, args.predicate, y=args.y, delta=args.delta, count=args.count)
    else:
        res = vf.brute_force_orientation(g, args.rho1, args.rho2, args.slack_absolute, delta=args.delta, count=args.count)
    out = {"sat": res.sat, "witness": None if res.witness is None else gr.to_payload(res.witness)}
    if args.count:
        out["count"] = res.count
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench

BENCH_COLUMNS = ("n", "delta", "task", "wall_ms", "BO", "SO", "resamples", "plan_length")


def _bench_rows(args) -> list[dict]:
    rows = []
    stream = np.random.SeedSequence(args.seed)
    combos = [(n, d, s) for n in args.sizes for d in args.deltas for s in range(args.seeds)]
    children = stream.spawn(len(combos))
    for (n, d, _), child in zip(combos, children):
        seed = int(child.generate_state(1)[0])
        if n * d % 2:
            continue
        ys = range(d - 1) if args.suite == "pi" else [None]
        for y in ys:
            typed = args.suite == "split"
            g = gr.gen_random_regular(n, d, seed, typed=typed)
            ledger = CostLedger()
            t0 = time.perf_counter()
            resamples, plan_len = 0, None
            if args.suite == "split":
                balanced_split(g, ledger)
            elif args.suite == "exact":
                exact_split(g, "round_down", ledger)
            elif args.suite == "pi":
                _, _, plan = solve_pi(g, y, d, ledger)
                plan_len = len(plan)
            else:
                _, resamples, _ = lll_orient(g, derive_params(args.rho1, args.rho2, args.slack, seed, args.max_resample), ledger)
            rows.append(
                {
                    "n": n,
                    "delta": d,
                    "task": args.suite if y is None else f"pi({y})",
                    "wall_ms": round((time.perf_counter() - t0) * 1000, 2),
                    "BO": ledger.count("BO"),
                    "SO": ledger.count("SO"),
                    "resamples": resamples,
                    "plan_length": plan_len,
                }
            )
    return rows


def cmd_bench(args) -> int:
    rows = _bench_rows(args)
    if args.format == "json":
        print(json.dumps(rows))
        return EXIT_OK
    widths = {c: max([len(c)] + [len(str(r[c])) for r in rows]) for c in BENCH_COLUMNS}
    print("  ".join(c.rjust(widths[c]) for c in BENCH_COLUMNS))
    for r in rows:
        print("  ".join(str(r[c]).rjust(widths[c]) for c in BENCH_COLUMNS))
    return EXIT_OK


# ---------------------------------------------------------------------------

def _add_orient_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rho1", type=float, default=0.5)
    p.add_argument("--rho2", type=float, default=0.5)
    p.add_argument("--slack", type=float, default=2.0, help="constant C in C*sqrt(D ln D)")
    p.add_argument("--max-resample", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="degsplit", description="Degree splittings, Pi(y) colorings and unbalanced orientations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("kind", choices=["regular", "maxdeg", "path", "cycle", "complete", "star", "tree"])
    p.add_argument("--n", type=int, default=10, help="nodes (star: leaves)")
    p.add_argument("--delta", type=int, default=3)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--typed", action="store_true", help="random C/O edge types")
    p.add_argument("--type", choices=["C", "O"], default="C", help="edge type for structured graphs")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run a solver and check its output")
    p.add_argument("task", choices=["split", "exact", "pi", "orient", "sinkless", "balanced"])
    p.add_argument("graph")
    p.add_argument("--out", default=None)
    p.add_argument("--report", default=None)
    p.add_argument("--ledger", default=None, help="write the cost ledger as JSON lines")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["round_down", "round_up"], default="round_down")
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--y", type=int, default=None)
    p.add_argument("--no-verify", action="store_true")
    _add_orient_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a labeling or orientation")
    p.add_argument("--property", required=True, choices=["types", "eq1", "eq2", "lemma31", "pi", "sinkless", "unbalanced", "balanced"])
    p.add_argument("graph")
    p.add_argument("solution")
    p.add_argument("--mode", choices=["round_down", "round_up"], default="round_down")
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--y", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    _add_orient_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive search on a small graph")
    p.add_argument("target", choices=["labeling", "orientation"])
    p.add_argument("graph")
    p.add_argument("--predicate", choices=["eq1", "eq2_down", "eq2_up", "lemma31", "pi"], default="eq1")
    p.add_argument("--y", type=int, default=None)
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--rho1", type=float, default=0.5)
    p.add_argument("--rho2", type=float, default=0.5)
    p.add_argument("--slack-absolute", type=float, default=0.0)
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="ledger-based step counts on random regular graphs")
    p.add_argument("suite", choices=["split", "exact", "pi", "orient"])
    p.add_argument("--sizes", type=int, nargs="*", default=[64])
    p.add_argument("--deltas", type=int, nargs="*", default=[4, 8, 16])
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_orient_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ParseError, RangeError, DomainError, EdgeTypeError, vf.TooLarge, OSError) as exc:
        print(f"degsplit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExhausted as exc:
        print(f"degsplit: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
