"""Command-line entry point.

Exit codes: 0 success, 1 a check failed, 2 bad usage or input, 3 internal fault.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import traceback

from . import limit, properties, zhao
from .catalog import builtin, builtin_ids, load_space
from .catalog.render import vector_text
from .errors import (
    BadParam,
    EngineError,
    Inconsistent,
    SemanticError,
    SpecSyntaxError,
    Stuck,
    UnknownSpace,
)
from .product import table_rows
from .seidel import weighted_seidel

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_FAULT = 0, 1, 2, 3

USAGE_ERRORS = (UnknownSpace, BadParam, SpecSyntaxError, SemanticError, FileNotFoundError)


class Outcome:
    """What a command produced: JSON results, CSV rows, text lines and a status."""

    def __init__(self, results, rows=None, text=None, ok=True, columns=None):
        self.results = results
        self.rows = rows or []
        self.columns = columns
        self.text = text or []
        self.ok = ok


def _space(args):
    if getattr(args, "spec", None):
        return load_space(args.spec)
    if not args.space:
        raise BadParam("give --space ID or --spec FILE")
    return builtin(args.space)


def _image_rows(M):
    labels = M.source.labels
    return [
        {"source": lab, "image": vector_text(labels, [row[k] for row in M.matrix])}
        for k, lab in enumerate(labels)
    ]


# commands ------------------------------------------------------------------

def cmd_spaces(args):
    rows = []
    for sid in builtin_ids(args.max_n):
        s = builtin(sid)
        rows.append({
            "id": sid,
            "rank": len(s.basis),
            "q_degree": s.config.q_degree if s.config.has_q else None,
            "seidel_shift": s.seidel.shift,
            "has_product": s.product is not None,
            "has_inverse": s.inverse is not None,
        })
    text = [f"{r['id']:<24} rank {r['rank']}  shift {r['seidel_shift']}"
            + (f"  q_degree {r['q_degree']}" if r["q_degree"] else "") for r in rows]
    return Outcome({"spaces": rows}, rows, text)


def cmd_product(args):
    s = _space(args)
    T = s.table_at(args.r)
    rows = [{"left": a, "right": b, "product": v} for a, b, v in table_rows(T)]
    text = [f"{a} * {b} = {v}" for a, b, v in table_rows(T) if a <= b]
    return Outcome({"space": s.id, "r": args.r, "products": rows}, rows, text)


def cmd_seidel(args):
    s = _space(args)
    M = s.seidel_family().instantiate(args.r)
    if args.weighted:
        M = weighted_seidel(M)
    rows = _image_rows(M)
    text = [f"shift {M.shift}, level {args.r} -> {args.r + 1}"] + [f"{r['source']} -> {r['image']}" for r in rows]
    return Outcome({"space": s.id, "r": args.r, "weighted": args.weighted, "shift": M.shift, "images": rows}, rows, text)


def cmd_verify(args):
    from .verify import verify_space

    s = _space(args)
    reports = verify_space(s, args.rmax, jobs=args.jobs, solve=args.solve)
    rows = [{"check": r.name, "passed": r.passed, "failures": len(r.failures)} for r in reports]
    text = []
    for r in reports:
        text.append(r.line())
        text += [f"    {f}" for f in r.failures[:10]]
    ok = all(r.passed for r in reports)
    results = {"space": s.id, "rmax": args.rmax, "passed": ok,
               "checks": [{"name": r.name, "passed": r.passed, "failures": r.failures} for r in reports]}
    return Outcome(results, rows, text, ok)


def cmd_solve(args):
    from .solver import induct_over_r

    s = _space(args)
    try:
        solved = induct_over_r(s, args.rmax)
    except (Stuck, Inconsistent) as exc:
        lines = [f"{type(exc).__name__} at r={exc.level}: {exc}"] + [f"    {e}" for e in exc.residual]
        return Outcome({"space": s.id, "error": type(exc).__name__, "level": exc.level, "message": str(exc),
                        "residual": [str(e) for e in exc.residual]}, [], lines, False)
    data = solved.to_json()
    rows = [{"unknown": name, "r": r, "value": v}
            for name, levels in data["coefficients"].items() for r, v in levels.items()]
    return Outcome(data, rows, solved.listing().splitlines())


def cmd_esh(args):
    s = _space(args)
    F = s.seidel_family()
    G = limit.generator_sequence(F, args.pmax, s.limit_vectors())
    rows = limit.generator_rows(G, args.truncate_u)
    report = limit.chain_strictness(G)
    steps = report.details["steps"]
    text = ["ordered basis: " + ", ".join(
        f"{g} = {v}" for g, v in zip(G.basis.labels, G.vectors))]
    text += [f"det A_{r} = {d}" for r, d in enumerate(G.dets)]
    for row in rows:
        text.append(f"x_{row['k']}^{row['p']} = {row['generator']}   (D_{row['p']} = {row['determinant']})")
    try:
        normalized = [
            {"p": n.p, "divisor": str(n.scale), "generator": str(n.value)}
            for n in limit.normalized_generators(G)
        ]
    except EngineError as exc:
        normalized = []
        text.append(f"normalization unavailable: {exc}")
    for n in normalized:
        text.append(f"y_{n['p']} = x_0^{n['p']} / ({n['divisor']})")
    for st in steps:
        text.append(f"p={st['p']}: " + ("strict, " + st["witness"]["generator"] + " " + st["witness"]["reason"]
                                        if st["strict"] else "not strict"))
    results = {
        "space": s.id,
        "pmax": args.pmax,
        "truncate_u": args.truncate_u,
        "basis": [str(v) for v in G.vectors],
        "determinants": [str(d) for d in G.dets],
        "generators": rows,
        "normalized": normalized,
        "chain": {"stable_at": report.details["stable_at"], "steps": steps},
    }
    return Outcome(results, rows, text, columns=["p", "k", "determinant", "generator"])


def cmd_zhao(args):
    C = zhao.build_complex(args.s, args.K)
    d2 = zhao.verify_d_squared(C)
    table = zhao.cohomology(C)
    factors = zhao.continuation_factors(args.s)
    rows = [{"degree": D, "rank": h.rank, "torsion": " ".join(map(str, h.torsion))} for D, h in table.items()]
    # the limit needs a run of factors whatever slope was asked for
    recognized = limit.recognize_rank_one(zhao.continuation_factors(max(args.s, 5)))
    text = [d2.line()]
    text += [f"H^{r['degree']}: rank {r['rank']}" + (f", torsion {r['torsion']}" if r["torsion"] else "") for r in rows]
    text += [f"kappa_{s}: x_{2 * s} -> {f} x_{2 * s + 2}" for s, f in enumerate(factors)]
    text.append(f"limit of the continuation maps: {recognized}")
    results = {
        "s": args.s,
        "K": args.K,
        "d_squared": {"passed": d2.passed, "failures": d2.failures},
        "cohomology": rows,
        "continuation_factors": [str(f) for f in factors],
        "limit": recognized,
    }
    if args.complex:
        results["complex"] = C.to_json()
    return Outcome(results, rows, text, d2.passed)


def cmd_properties(args):
    results = properties.run_all(args.seed)
    rows = [{"suite": r.name, "cases": r.cases, "failures": len(r.failures), "seed": r.seed} for r in results]
    text = [r.line() for r in results]
    for r in results:
        text += [f"    {f}" for f in r.failures[:5]]
    total = sum(r.cases for r in results)
    text.append(f"{total} cases, seed {args.seed}")
    ok = all(r.passed for r in results)
    return Outcome({"seed": args.seed, "cases": total, "suites": rows}, rows, text, ok)


# plumbing ------------------------------------------------------------------

def _add_output_flags(p, default):
    p.add_argument("--format", choices=("text", "json", "csv"), default=default)
    p.add_argument("--out", default=default, metavar="PATH", help="write here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="eqseidel", description="Equivariant quantum Seidel map computations.")
    parser.add_argument("--format", choices=("text", "json", "csv"), default="text")
    parser.add_argument("--out", default=None, metavar="PATH", help="write here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_output_flags(p, argparse.SUPPRESS)
        p.set_defaults(func=fn)
        return p

    def space_args(p):
        p.add_argument("--space", help="built-in id, e.g. 'projective_space(2)'")
        p.add_argument("--spec", metavar="FILE", help="a .eqh definition file")

    p = add("spaces", cmd_spaces, "list the built-in spaces")
    p.add_argument("--max-n", type=int, default=4)

    p = add("product", cmd_product, "product table at level r")
    space_args(p)
    p.add_argument("--r", type=int, default=0)

    p = add("seidel", cmd_seidel, "Seidel map at level r")
    space_args(p)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--weighted", action="store_true", help="show the weighted map instead")

    p = add("verify", cmd_verify, "gradedness, axioms, intertwining and inverse checks")
    space_args(p)
    p.add_argument("--rmax", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--solve", action="store_true", help="also re-derive the maps with the solver")

    p = add("solve", cmd_solve, "solve the ansatz level by level")
    space_args(p)
    p.add_argument("--rmax", type=int, default=5)

    p = add("esh", cmd_esh, "generators of the direct limit")
    space_args(p)
    p.add_argument("--pmax", type=int, default=3)
    p.add_argument("--truncate-u", type=int, default=None, metavar="K", help="show generators mod u^K")

    p = add("zhao", cmd_zhao, "the explicit complex for the complex plane")
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--K", type=int, default=6)
    p.add_argument("--complex", action="store_true", help="include the complex itself in JSON output")

    p = add("properties", cmd_properties, "seeded randomized property suites")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _inputs(args):
    skip = {"func", "format", "out", "command"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def render(outcome: Outcome, args) -> str:
    if args.format == "json":
        doc = {"schema": SCHEMA, "command": args.command, "inputs": _inputs(args), "results": outcome.results}
        return json.dumps(doc, indent=2) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        columns = outcome.columns or (list(outcome.rows[0]) if outcome.rows else ["result"])
        w = csv.DictWriter(buf, columns, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(outcome.rows)
        return buf.getvalue()
    return "\n".join(outcome.text) + "\n"


def _validate(args):
    for name in ("r", "rmax", "pmax", "s", "seed"):
        v = getattr(args, name, None)
        if v is not None and v < 0 and name != "seed":
            raise BadParam(f"--{name} must be non-negative")
    if getattr(args, "K", 1) < 1:
        raise BadParam("--K must be at least 1")
    if getattr(args, "jobs", 1) < 1:
        raise BadParam("--jobs must be at least 1")
    if getattr(args, "truncate_u", None) is not None and args.truncate_u < 0:
        raise BadParam("--truncate-u must be non-negative")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        _validate(args)
        outcome = args.func(args)
    except USAGE_ERRORS as exc:
        print(f"eqseidel: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else is a bug or an arithmetic fault
        print(f"eqseidel: internal fault: {type(exc).__name__}: {exc}", file=sys.stderr)
        traceback.print_exc(file=sys.stderr)
        return EXIT_FAULT
    text = render(outcome, args)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if outcome.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
