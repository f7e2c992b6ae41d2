"""Command line front end: ``gmark <command> [flags]``.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 uniqueness
violations found.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction
from typing import Iterable, List, Optional

from . import conjecture, dynamics, euclid, gca, markov, trop
from .core import LambdaParams, ReducedSeq, all_lambdas, cyclic_extension

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_VIOLATIONS = 0, 1, 2, 3

DOMAIN_ERRORS = (
    dynamics.NoConvergence,
    dynamics.ArgmaxMutation,
    markov.DigitBudgetExceeded,
    markov.NotASolution,
    markov.NonIntegerResult,
    trop.NoStrictArgmax,
)


# argument types

def _lambda(text):
    try:
        return LambdaParams.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _seq(text):
    try:
        return ReducedSeq.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _rationals(text):
    try:
        vals = tuple(Fraction(p.strip()) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated values, got {text!r}")
    return vals


def _ints(text):
    try:
        vals = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {text!r}")
    return vals


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a valid {kind.__name__}: {text!r}")
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return v

    return parse


def _nonneg_rational(text):
    try:
        v = Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text!r}")
    return v


# formatting

def fmt_num(v) -> str:
    """15 significant digits for reals, plain text for integers."""
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    return f"{float(v):.15g}"


def fmt_exact(v) -> str:
    return str(Fraction(v))


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


class Emitter:
    def __init__(self, fmt: str, out):
        self.fmt = fmt
        self.out = out
        self._csv = csv.writer(out, lineterminator="\n")

    def json(self, obj):
        self.out.write(dumps(obj) + "\n")

    def row(self, values: Iterable):
        self._csv.writerow(list(values))


# commands

def _sequences(args) -> List[ReducedSeq]:
    if args.seq_file:
        with open(args.seq_file) as fh:
            return [ReducedSeq.parse(line) for line in fh if line.strip()]
    return [args.seq if args.seq is not None else ReducedSeq()]


def cmd_chain(args, em: Emitter):
    if em.fmt == "csv":
        em.row(["seq", "depth", "w_i", "x1", "x2", "x3"])
    for w in _sequences(args):
        ch = markov.chain(w, args.lam, args.start, digit_budget=args.digit_budget)
        for d, t in enumerate(ch.triples):
            if em.fmt == "json":
                em.json(markov.record(args.lam, w[:d], t))
            else:
                em.row([str(w), d, w[d - 1] if d else "", *t])
    return EXIT_OK


def cmd_euclid_chain(args, em: Emitter):
    p = euclid.EuclidParams(args.k, args.init)
    if em.fmt == "csv":
        em.row(["seq", "depth", "w_i", "x1", "x2", "x3"])
    for w in _sequences(args):
        for d, t in enumerate(euclid.euclid_chain(w, p)):
            if em.fmt == "json":
                em.json({"k": fmt_exact(p.k), "seq": str(ReducedSeq(w[:d])), "triple": [fmt_exact(v) for v in t]})
            else:
                em.row([str(w), d, w[d - 1] if d else "", *(fmt_exact(v) for v in t)])
    return EXIT_OK


def cmd_gca_demo(args, em: Emitter):
    s = gca.b2_seed()
    seen = []
    for t in range(7):
        em.json({
            "t": t,
            "x": [fmt_exact(v) for v in s.x],
            "B": [list(r) for r in s.B],
            "Z": [list(z) for z in s.Z],
            "compatible": all(gca.check_compatibility(s.B, s.R, k) for k in (1, 2)),
        })
        seen.append(s.x)
        s = gca.mutate_seed(s, 1 if t % 2 == 0 else 2)
    em.json({"distinct_clusters": len(set(seen)), "returns_to_start": seen[-1] == seen[0]})
    return EXIT_OK


def _random_word(rng: random.Random, length: int) -> ReducedSeq:
    w: List[int] = []
    while len(w) < length:
        d = rng.randint(1, 3)
        if not w or w[-1] != d:
            w.append(d)
    return ReducedSeq(w)


def cmd_trop_verify(args, em: Emitter):
    cases = []
    if args.seq is not None or args.seq_file:
        cases = [(args.lam, w) for w in _sequences(args)]
    else:
        rng = random.Random(args.rng_seed)
        for _ in range(args.n or 1000):
            lam = LambdaParams(rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3))
            cases.append((lam, _random_word(rng, rng.randint(0, args.depth or 12))))
    failures = 0
    for lam, w in cases:
        rep = trop.verify_correspondence(w, lam, args.start)
        failures += not rep.ok
        if em.fmt == "json":
            em.json({"lambda": list(lam.as_tuple()), "seq": str(w), **rep.as_dict()})
        else:
            em.row([str(lam), str(w), rep.ok, rep.divergence if rep.divergence is not None else "", rep.reason])
    sys.stderr.write(f"{len(cases)} cases, {failures} divergences\n")
    return EXIT_OK


def cmd_trop_limit(args, em: Emitter):
    numeric, exact = trop.trop_limit_check(args.triple, args.lam, args.scale)
    em.json({
        "triple": list(args.triple),
        "lambda": list(args.lam.as_tuple()),
        "C": args.scale,
        "numeric": repr(numeric),
        "exact": exact,
        "error": repr(abs(numeric - exact)),
    })
    return EXIT_OK


def cmd_compare(args, em: Emitter):
    pK = euclid.EuclidParams(args.k, args.init)
    pE = euclid.EuclidParams(0, args.base)
    for w in _sequences(args):
        states = dynamics.run_comparison(w, pK, pE)
        if em.fmt == "csv":
            em.row(["depth", "w_i", "l", "m", "n", "spread", "min", "exact"])
            for d, s in enumerate(states):
                em.row([
                    d, s.step or "", *(fmt_num(v) for v in s.comp),
                    fmt_num(s.spread), fmt_num(s.min), " ".join(fmt_exact(v) for v in s.comp),
                ])
        else:
            for d, s in enumerate(states):
                em.json({
                    "depth": d,
                    "w_i": s.step,
                    "comp": [fmt_exact(v) for v in s.comp],
                    "euclid": [fmt_exact(v) for v in s.euclid],
                    "spread": fmt_exact(s.spread),
                    "min": fmt_exact(s.min),
                })
    return EXIT_OK


def cmd_q_estimate(args, em: Emitter):
    for w in _sequences(args):
        if not w:
            raise _Usage("--seq: need a nonempty prefix to extend")
        depth = args.depth or (dynamics.EXACT_MAX_DEPTH if args.mode == "exact" else dynamics.LOG_MAX_DEPTH)
        gen = cyclic_extension(w, depth)
        if args.mode == "exact":
            pK = euclid.EuclidParams(args.k, args.init)
            pE = euclid.EuclidParams(0, args.base)
            est = dynamics.estimate_q_euclid(gen, pK, pE, eps=args.eps, max_depth=depth)
            em.json({
                "prefix": str(w), "mode": "exact", "q": repr(est.q), "spread": repr(est.spread),
                "depth": est.depth, "tail": str(est.tail_class),
                "closed_form": None if est.closed_form is None else repr(est.closed_form),
            })
        else:
            est = dynamics.estimate_q_log(gen, args.lam, eps=args.eps, max_depth=depth)
            em.json({
                "prefix": str(w), "mode": "log", "lambda": list(args.lam.as_tuple()),
                "q": repr(est.q), "per_component": [repr(v) for v in est.per_component],
                "spread": repr(est.spread), "depth": est.depth, "tail": str(est.tail_class),
                "cesaro": None if est.cesaro is None else repr(est.cesaro),
            })
    return EXIT_OK


def cmd_ratios(args, em: Emitter):
    for w in _sequences(args):
        rs = dynamics.ratio_series(w, args.lam, args.mode, digit_budget=args.digit_budget)
        if em.fmt == "csv":
            em.row(["depth", "k_j"] + (["exact"] if args.mode == "exact" else []))
            for d, v in enumerate(rs.values, start=1):
                em.row([d, fmt_num(v)] + ([fmt_exact(v)] if args.mode == "exact" else []))
        else:
            for d, v in enumerate(rs.values, start=1):
                rec = {"seq": str(w), "depth": d, "k_j": fmt_num(v)}
                if args.mode == "exact":
                    rec["exact"] = fmt_exact(v)
                em.json(rec)
    return EXIT_OK


def cmd_q_table(args, em: Emitter):
    table = conjecture.q_table(
        args.n or 6, args.lam, eps=args.eps, max_depth=args.depth or 400, threads=args.threads
    )
    if em.fmt == "csv":
        for row in table.csv_rows():
            em.row(row)
    else:
        for seq, row in table.rows.items():
            em.json({
                "seq": str(seq), "q": repr(row.q), "spread": repr(row.spread),
                "depth": row.depth, "converged": row.converged, "class": row.cls,
            })
    return EXIT_OK


def cmd_uniq_scan(args, em: Emitter):
    lams = all_lambdas(args.lambda_grid) if args.lambda_grid is not None else [args.lam]
    bound = args.bound or 1000
    found = 0
    for lam in lams:
        rep = conjecture.uniqueness_scan(lam, bound, mode=args.grouping, threads=args.threads)
        found += len(rep.violations)
        if em.fmt == "csv":
            for v in rep.violations:
                em.row([str(lam), v.pattern, v.a, *v.pair1, *v.pair2, str(v.addr1), str(v.addr2)])
        else:
            em.json(rep.as_dict())
    return EXIT_VIOLATIONS if found else EXIT_OK


def cmd_search(args, em: Emitter):
    if args.a is None or args.a < 2:
        raise _Usage("--a: need an integer >= 2")
    cands = conjecture.candidate_search(args.a, args.lam, n=args.n or 6, tol=args.tol)
    for c in cands:
        if em.fmt == "csv":
            em.row([str(c.seq), *c.triple, c.matched])
        else:
            em.json({
                "seq": str(c.seq), "triple": [str(v) for v in c.triple],
                "euclid": list(c.euclid), "matched": c.matched,
            })
    return EXIT_OK


def cmd_fib_check(args, em: Emitter):
    n = args.n or 64
    partial, tail = euclid.fib_reciprocal_sum(n)
    upper = partial + tail
    em.json({
        "n_terms": n,
        "partial_sum": fmt_num(partial),
        "tail_bound": fmt_num(tail),
        "upper_bound": fmt_num(upper),
        "below_3_36": upper < Fraction(336, 100),
        "F_n": str(euclid.fibonacci(n)),
    })
    return EXIT_OK


COMMANDS = {
    "chain": cmd_chain,
    "euclid-chain": cmd_euclid_chain,
    "gca-demo": cmd_gca_demo,
    "trop-verify": cmd_trop_verify,
    "trop-limit": cmd_trop_limit,
    "compare": cmd_compare,
    "q-estimate": cmd_q_estimate,
    "ratios": cmd_ratios,
    "q-table": cmd_q_table,
    "uniq-scan": cmd_uniq_scan,
    "search": cmd_search,
    "fib-check": cmd_fib_check,
}

DEFAULT_FORMAT = {"compare": "csv", "ratios": "csv", "q-table": "csv"}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--lambda", dest="lam", type=_lambda, default=LambdaParams(), help="l1,l2,l3")
    common.add_argument("--seq", type=_seq, help="comma-separated directions, e.g. 1,2,3")
    common.add_argument("--seq-file", help="file with one sequence per line")
    common.add_argument("--mode", choices=("exact", "log"), default="exact")
    common.add_argument("--eps", type=_positive(float), default=dynamics.DEFAULT_EPS)
    common.add_argument("--tol", type=_positive(float), default=0.05)
    common.add_argument("--bound", type=_positive(int))
    common.add_argument("--depth", type=_positive(int))
    common.add_argument("--n", type=_positive(int))
    common.add_argument("--digit-budget", type=_positive(int), default=markov.DEFAULT_DIGIT_BUDGET)
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--rng-seed", type=int, default=0)
    common.add_argument("--threads", type=_positive(int))
    common.add_argument("--k", type=_nonneg_rational, default=Fraction(0), help="shift of the k-Euclid tree")
    common.add_argument("--init", type=_rationals, default=(1, 1, 1), help="root of the k-Euclid tree")
    common.add_argument("--base", type=_rationals, default=(1, 1, 1), help="root of the classical tree")
    common.add_argument("--start", type=_ints, default=(1, 1, 1), help="starting Markov triple")
    common.add_argument("--triple", type=_ints, default=(0, 0, 0), help="tropical triple")
    common.add_argument("--scale", type=_positive(float), default=1e4, help="the constant C")
    common.add_argument("--lambda-grid", type=int, help="scan every lambda in {0..N}^3")
    common.add_argument("--grouping", choices=("positional", "sorted"), default="sorted")
    common.add_argument("--a", type=int, help="target value for search")

    parser = _Parser(prog="gmark", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.threads is None:
            env = os.environ.get("GMARK_THREADS")
            try:
                args.threads = int(env) if env else 1
            except ValueError:
                raise _Usage(f"GMARK_THREADS: not an integer: {env!r}")
            if args.threads < 1:
                raise _Usage("GMARK_THREADS: must be positive")
        if args.lambda_grid is not None and args.lambda_grid < 0:
            raise _Usage("--lambda-grid: must be nonnegative")
        fmt = args.format or DEFAULT_FORMAT.get(args.command, "json")
        buf = io.StringIO()
        status = COMMANDS[args.command](args, Emitter(fmt, buf))
    except _Usage as exc:
        stderr.write(f"gmark: usage error: {exc}\n")
        return EXIT_USAGE
    except DOMAIN_ERRORS as exc:
        stderr.write(f"gmark: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    except (OSError, ValueError) as exc:
        stderr.write(f"gmark: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
