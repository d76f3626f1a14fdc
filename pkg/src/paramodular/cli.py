"""Command-line entry point: ``paramodular <verb> [options]``.

Exit codes: 0 success, 1 a verification failed, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from fractions import Fraction

from . import harder
from .cache import DiskCache, default_cache_dir
from .genus import ClassNumberError, gamma1, mass_check
from .hecke import DegreeMismatchError, hecke_degree
from .lattice import SUPPORTED_PRIMES
from .trace import (
    AmbiguousEigenvalueError,
    DataMissingError,
    PrimeContext,
    UnsupportedCaseError,
    compute_trace,
    new_eigenvalue,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("paramodular")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _fmt(x) -> str:
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return "-" if x is None else str(x)


def _emit(rows, header, fmt, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        return
    cells = [list(header)] + [[_fmt(v) for v in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    for c in cells:
        out.write("  ".join(s.rjust(w) for s, w in zip(c, widths)).rstrip() + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("aligned", "csv"), default="aligned")
    common.add_argument("--threads", type=int, default=1, help="worker processes for trace sums")
    common.add_argument("--cache-dir", default=None, help="on-disk cache (default: %(default)s -> user cache dir)")
    common.add_argument("--no-cache", action="store_true", help="keep intermediate results in memory only")
    common.add_argument("--data", default=None, help=f"data directory (default: ${harder.DATA_ENV} or bundled)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    def prime(s):
        p = int(s)
        if p not in SUPPORTED_PRIMES:
            raise argparse.ArgumentTypeError(f"p must be one of {SUPPORTED_PRIMES}")
        return p

    parser = _Parser(prog="paramodular", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("gamma", parents=[common], help="orders of Gamma^(1), Gamma^(2) and mass check")
    s.add_argument("--p", type=prime, required=True)

    s = sub.add_parser("dims", parents=[common], help="table of new-space dimensions")
    s.add_argument("--p", type=prime, required=True)
    s.add_argument("--j-max", type=int, default=20)
    s.add_argument("--k-max", type=int, default=15, help="largest k-3 column")

    s = sub.add_parser("hecke-reps", parents=[common], help="Hecke representatives for T_q")
    s.add_argument("--p", type=prime, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--list", action="store_true", help="print the matrices")

    for verb, text in (("trace", "trace of T_q (or a power)"), ("eigenvalue", "eigenvalue on a 1-dim new space")):
        s = sub.add_parser(verb, parents=[common], help=text)
        s.add_argument("--p", type=prime, required=True)
        s.add_argument("--q", type=int, required=True)
        s.add_argument("--j", type=int, required=True)
        s.add_argument("--k", type=int, required=True)
        if verb == "trace":
            s.add_argument("--power", type=int, default=1)

    s = sub.add_parser("verify", parents=[common], help="check Harder's congruence for one form")
    s.add_argument("--p", type=prime, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--record", default=None, help="eigenform record file (default: bundled level-p records)")
    s.add_argument("--label", default=None, help="record label when several match")

    sub.add_parser("verify-table", parents=[common], help="recompute the whole congruence table")
    return parser


def _context_factory(args):
    cache = DiskCache(None if args.no_cache else (args.cache_dir or default_cache_dir()))
    contexts = {}

    def get(p):
        if p not in contexts:
            contexts[p] = PrimeContext(p, cache=cache, threads=args.threads)
        return contexts[p]

    return get


def _check_q(p, q):
    if q < 2 or any(q % d == 0 for d in range(2, int(q**0.5) + 1)):
        raise UsageError(f"q must be prime, got {q}")
    if q == p:
        raise UsageError("q must differ from p")


def cmd_gamma(args, out):
    ctx = _context_factory(args)(args.p)
    g1 = len(gamma1(ctx.order)) if args.p in (2, 3) else None
    g2 = len(ctx.W(1))
    rep = mass_check(args.p, g1, g2, strict=False)
    if g1 is not None:
        out.write(f"|Gamma1| = {g1}\n")
    out.write(f"|Gamma2| = {g2}\n")
    for line in rep.lines():
        out.write(line + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_dims(args, out):
    ctx = _context_factory(args)(args.p)
    ks = range(0, args.k_max + 1)
    rows = []
    undefined = False
    for j in range(0, args.j_max + 1, 2):
        row = [j]
        for kk in ks:
            full = ctx.dim_full(j, kk + 3)
            old = ctx.old_dim(j, kk + 3)
            if old is None:
                undefined = True
                row.append(f"{full}*")
            else:
                row.append(full - old)
        rows.append(row)
    _emit(rows, [f"p={args.p}"] + [str(k) for k in ks], args.format, out)
    if undefined and args.format == "aligned":
        out.write("* full dimension; old-space rule undefined for this cell\n")
    return EXIT_OK


def cmd_hecke_reps(args, out):
    _check_q(args.p, args.q)
    ctx = _context_factory(args)(args.p)
    reps = ctx.hecke_reps(args.q)
    out.write(f"p={args.p} q={args.q} representatives={len(reps)} expected={hecke_degree(args.q)}\n")
    if args.list:
        for u in reps.reps:
            out.write(" ; ".join(" ".join(_fmt(c) for c in x.coords) for x in u.entries) + "\n")
    return EXIT_OK


def cmd_trace(args, out):
    _check_q(args.p, args.q)
    ctx = _context_factory(args)(args.p)
    res = compute_trace(ctx, args.q, args.j, args.k, harder.level1_traces(args.data), args.power)
    full, old, new = res.dims
    rows = [[args.p, args.q, args.j, args.k, args.power, res.total_trace, res.old_trace, res.new_trace, full, old, new]]
    _emit(rows, ["p", "q", "j", "k", "power", "trace", "old", "new", "dim", "dim_old", "dim_new"], args.format, out)
    return EXIT_OK


def cmd_eigenvalue(args, out):
    _check_q(args.p, args.q)
    ctx = _context_factory(args)(args.p)
    try:
        res = new_eigenvalue(ctx, args.q, args.j, args.k, harder.level1_traces(args.data))
    except AmbiguousEigenvalueError as exc:
        out.write(f"{exc}\n")
        for d, t in sorted(exc.power_traces.items()):
            out.write(f"tr(T_{args.q}^{d}) = {_fmt(t)}\n")
        return EXIT_FAIL
    full, old, new = res.dims
    out.write(f"dim full = {full}\ndim old = {old}\ndim new = {new}\n")
    out.write(f"tr(T_{args.q}) = {_fmt(res.total_trace)}\nold trace = {_fmt(res.old_trace)}\n")
    out.write(f"b_{args.q} = {_fmt(res.new_trace)}\n")
    return EXIT_OK


def _pick_record(args):
    weight = args.j + 2 * args.k - 2
    if args.record:
        records = harder.ingest_records(args.record)
    else:
        records = harder.load_records("levelp.txt", args.data)
    cands = [r for r in records if r.level == args.p and r.weight == weight]
    if args.label:
        cands = [r for r in cands if r.label == args.label]
    if len(cands) != 1:
        raise UsageError(f"{len(cands)} records match level {args.p}, weight {weight}; use --label")
    return cands[0]


def cmd_verify(args, out):
    _check_q(args.p, args.q)
    rec = None if args.p % args.ell == 0 else _pick_record(args)
    ctx = _context_factory(args)(args.p)
    res = new_eigenvalue(ctx, args.q, args.j, args.k, harder.level1_traces(args.data))
    rep = harder.check_congruence(rec, res.new_trace, args.p, args.q, args.j, args.k, args.ell)
    out.write(f"b_{args.q} = {_fmt(rep.b_q)}\n")
    if rec is not None:
        out.write(f"record {rec.label}: a_{args.q} = {rec.describe(args.q)}\n")
        out.write(f"|N(b - a - q^(k-2) - q^(j+k-1))| = {rep.residual_norm}\n")
    out.write(f"verdict: {rep.verdict}\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify_table(args, out):
    reports = harder.verify_table(args.data, _context_factory(args))
    rows = [
        [r.p, f"({r.j},{r.k})", r.q, r.ell, r.trace, r.b_q, r.a_q or "N/A", r.residual_norm, r.verdict]
        for r in reports
    ]
    _emit(rows, ["p", "(j,k)", "q", "ell", "tr(T_q)", "b_q", "a_q", "norm", "verdict"], args.format, out)
    for r in reports:
        if r.error:
            out.write(f"error p={r.p} (j,k)=({r.j},{r.k}): {r.error}\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


COMMANDS = {
    "gamma": cmd_gamma,
    "dims": cmd_dims,
    "hecke-reps": cmd_hecke_reps,
    "trace": cmd_trace,
    "eigenvalue": cmd_eigenvalue,
    "verify": cmd_verify,
    "verify-table": cmd_verify_table,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"paramodular: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        sys.stderr.write("paramodular: error: --threads must be positive\n")
        return EXIT_USAGE
    try:
        return COMMANDS[args.verb](args, out)
    except UsageError as exc:
        sys.stderr.write(f"paramodular: error: {exc}\n")
        return EXIT_USAGE
    except (UnsupportedCaseError, DataMissingError, harder.RecordParseError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"paramodular: error: {exc}\n")
        return EXIT_USAGE
    except (ClassNumberError, DegreeMismatchError) as exc:
        sys.stderr.write(f"paramodular: verification failed: {exc}\n")
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
