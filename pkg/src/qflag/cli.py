"""Command-line front end: ``qflag {irrep,rmatrix,dims,verify}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .errors import QFlagError
from .qfield import LaurentRat
from .report import CheckReport
from .repkit import build_irrep
from .rootdata import build_root_system

SUITES = ("ybe", "crels", "spectrum", "zrel", "central", "graded", "volume", "restricted")
KINDS = {
    "rh": "rh",
    "rc": "rc",
    "ra": "ra",
    "raminus": "ram",
    "rg": "rg",
    "rgminus": "rgm",
    "rhminus": "rhm",
    "rcminus": "rcm",
}
DEFAULT_MAX_RANK = 8


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, (LaurentRat, Fraction)):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _max_rank():
    raw = os.environ.get("QFLAG_MAX_RANK")
    if raw is None:
        return DEFAULT_MAX_RANK
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"QFLAG_MAX_RANK must be an integer, got {raw!r}") from None


def _check_rank(args):
    limit = _max_rank()
    if args.rank > limit:
        raise UsageError(f"rank {args.rank} exceeds QFLAG_MAX_RANK={limit}")


def _context(args):
    from .flagcalc import build_context

    _check_rank(args)
    return build_context(args.type.upper(), args.rank, args.node)


# ---------------------------------------------------------------- commands


def cmd_irrep(args):
    _check_rank(args)
    rs = build_root_system(args.type.upper(), args.rank)
    if args.weight:
        try:
            mu = tuple(int(c) for c in args.weight.split(","))
        except ValueError:
            raise UsageError(f"bad weight {args.weight!r}") from None
    elif args.node:
        if not 1 <= args.node <= rs.rank:
            raise UsageError(f"node {args.node} out of range 1..{rs.rank}")
        mu = rs.fundamental_weight(args.node - 1)
    else:
        raise UsageError("irrep needs --weight or --node")
    if len(mu) != rs.rank or not rs.is_dominant(mu):
        raise UsageError(f"{list(mu)} is not a dominant weight of {rs.label}")
    V = build_irrep(rs, mu)
    if args.format == "record":
        return [json.dumps(V.to_record(), sort_keys=True)], 0
    lines = [f"# {rs.label} highest weight {list(mu)} dimension {V.dim}"]
    for k, (lab, w) in enumerate(zip(V.labels, V.weights)):
        lines.append(f"{k + 1} {lab} {list(w)}")
    return lines, 0


def cmd_rmatrix(args):
    ctx = _context(args)
    name = KINDS[args.kind]
    M = ctx.rfamily.matrix(name)
    n = ctx.N
    entries = []
    for r, c, v in M.entries():
        i, j = divmod(r, n)
        k, l = divmod(c, n)
        entries.append((i + 1, j + 1, k + 1, l + 1, str(v)))
    if args.format == "record":
        rec = {"kind": args.kind, "context": [ctx.rs.kind, ctx.rs.rank, ctx.par.s],
               "N": n, "entries": [list(e) for e in entries]}
        return [json.dumps(rec, sort_keys=True)], 0
    lines = [f"# {args.kind} for {ctx.label}, N = {n}; columns i j k l value"]
    lines.extend(" ".join(map(str, e)) for e in entries)
    return lines, 0


def cmd_dims(args):
    from .flagcalc import derham_dims

    ctx = _context(args)
    maxdeg = args.max_degree
    if maxdeg is None:
        maxdeg = 2 * ctx.M + 1 if args.calculus == "d" else ctx.M + 1
    if maxdeg < 0:
        raise UsageError("--max-degree must be nonnegative")
    rep = derham_dims(ctx, args.calculus, maxdeg)
    if args.format == "record":
        rec = {"calculus": args.calculus, "context": [ctx.rs.kind, ctx.rs.rank, ctx.par.s],
               "dims": rep.dims}
        return [json.dumps(rec, sort_keys=True)], 0
    return rep.render().splitlines(), 0


def _run_suite(ctx, suite, exponents):
    from . import coeffmodel, flagcalc

    runners = {
        "ybe": flagcalc.ybe_check,
        "crels": flagcalc.crels_check,
        "spectrum": flagcalc.spectrum_check,
        "zrel": coeffmodel.verify_z_relations,
        "central": flagcalc.central_check,
        "graded": lambda c: flagcalc.graded_check(c, exponents),
        "volume": flagcalc.volume_form_check,
        "restricted": flagcalc.restricted_check,
    }
    start = time.perf_counter()
    rep = runners[suite](ctx)
    elapsed = (time.perf_counter() - start) * 1000.0
    return CheckReport(suite, rep.passed, rep.witness, rep.details), elapsed


def cmd_verify(args):
    ctx = _context(args)
    suites = [s.strip() for s in args.suite.split(",") if s.strip()] if args.suite else list(SUITES)
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {','.join(SUITES)}")
    if args.parallel and len(suites) > 1:
        # the shared context caches are filled first so that workers only read
        _ = ctx.rfamily.ra, ctx.rfamily.P_hat, ctx.rfamily.Q_hat
        with ThreadPoolExecutor(max_workers=len(suites)) as pool:
            results = list(pool.map(lambda s: _run_suite(ctx, s, args.exponents), suites))
    else:
        results = [_run_suite(ctx, s, args.exponents) for s in suites]
    triple = [ctx.rs.kind, ctx.rs.rank, ctx.par.s]
    lines = []
    for rep, elapsed in results:
        verdict = "pass" if rep.passed else "fail"
        if args.format == "record":
            rec = {"suite": rep.name, "context": triple, "verdict": verdict,
                   "witness": _jsonable(rep.witness), "elapsed-ms": round(elapsed, 3)}
            lines.append(json.dumps(rec, sort_keys=True))
        else:
            wit = "" if rep.passed else f"  witness={_jsonable(rep.witness)}"
            lines.append(f"{rep.name:<11} {ctx.label:<10} {verdict.upper()}{wit}")
    code = 0 if all(rep.passed for rep, _ in results) else 1
    return lines, code


# ------------------------------------------------------------------ parser


def build_parser():
    parser = argparse.ArgumentParser(prog="qflag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, node_required=True):
        p.add_argument("--type", required=True, choices=list("ABCDEFGabcdefg"))
        p.add_argument("--rank", required=True, type=int)
        p.add_argument("--node", type=int, required=node_required, help="crossed node, 1-based")
        p.add_argument("--format", choices=("table", "record"), default="table")
        p.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("irrep", help="irreducible module data")
    common(p, node_required=False)
    p.add_argument("--weight", help="highest weight, comma separated; defaults to the node's fundamental weight")
    p.set_defaults(func=cmd_irrep)

    p = sub.add_parser("rmatrix", help="one matrix of the braiding family")
    common(p)
    p.add_argument("--kind", choices=sorted(KINDS), default="rh")
    p.set_defaults(func=cmd_rmatrix)

    p = sub.add_parser("dims", help="graded fiber dimensions")
    common(p)
    p.add_argument("--calculus", choices=("del", "delbar", "d"), default="d")
    p.add_argument("--max-degree", type=int)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suite", help=f"comma separated subset of {','.join(SUITES)}")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--exponents", choices=("stated", "opposite"), default="stated",
                   help="exponent convention for the pure graded families")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        lines, code = args.func(args)
    except (UsageError, QFlagError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
