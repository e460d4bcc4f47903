"""Batch command-line front end: moment, table, verify, sample, asymptotics.

Output is machine readable: CSV (fixed headers, '.' decimal separator) or
JSON records.  Exact rationals print as decimal-free "num/den" strings that
parse back bit-for-bit; floats print with 17 significant digits.  Exit
codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import asymptotics as asym
from . import closed_form as cf
from . import verify as vf
from .core import BetaParams, MomentIndex
from .sampling import MatrixBetaSampler, RngSpec, StiefelBlockSampler, StiefelSpec


class UsageError(Exception):
    pass


def parse_rational(text: str, what: str) -> Fraction:
    """Parse 'p/q', integer, or decimal literals into an exact Fraction."""
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(
            f"{what} must be a rational like '7/2', an integer or a decimal string, got {text!r}"
        ) from None


def parse_params(alpha: str, beta: str, mode: str) -> BetaParams:
    a = parse_rational(alpha, "--alpha")
    b = parse_rational(beta, "--beta")
    if mode == "float":
        a, b = float(a), float(b)
    try:
        return BetaParams(a, b)
    except ValueError as e:
        raise UsageError(str(e)) from None


def fmt_value(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _make_index(m: int, r: int, z: int) -> MomentIndex:
    try:
        return MomentIndex(m, r, z)
    except ValueError as e:
        raise UsageError(str(e)) from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_moment(args) -> int:
    p = parse_params(args.alpha, args.beta, args.mode)
    idx = _make_index(args.m, args.r, args.z)
    value = cf.moment(p, idx)
    if args.format == "json":
        record = {
            "command": "moment",
            "params": {
                "alpha": args.alpha,
                "beta": args.beta,
                "m": idx.m,
                "r": idx.r,
                "z": idx.z_pow,
                "mode": args.mode,
            },
            "value": fmt_value(value),
            "error": None,
            "metadata": {},
        }
        print(json.dumps(record))
    else:
        print(fmt_value(value))
    return 0


def cmd_table(args) -> int:
    p = parse_params(args.alpha, args.beta, args.mode)
    ms = range(args.max_m + 1)
    rs = range(args.max_r + 1)
    zs = [z for z in range(args.max_z + 1) if not (args.even_z and z % 2)]
    rows = []
    for m in ms:
        for r in rs:
            for z in zs:
                rows.append((m, r, z, fmt_value(cf.moment(p, MomentIndex(m, r, z)))))
    if args.format == "json":
        records = [
            {
                "command": "table",
                "params": {"alpha": args.alpha, "beta": args.beta, "m": m, "r": r, "z": z},
                "value": v,
                "error": None,
                "metadata": {"mode": args.mode},
            }
            for m, r, z, v in rows
        ]
        print(json.dumps(records))
    else:
        print("alpha,beta,m,r,z,value")
        for m, r, z, v in rows:
            print(f"{args.alpha},{args.beta},{m},{r},{z},{v}")
    return 0


def cmd_verify(args) -> int:
    pair = None
    if args.alpha is not None or args.beta is not None:
        if args.alpha is None or args.beta is None:
            raise UsageError("--alpha and --beta must be given together")
        pair = (
            parse_rational(args.alpha, "--alpha"),
            parse_rational(args.beta, "--beta"),
        )
    try:
        checks = vf.run_suites(
            suite=args.suite,
            max_order=args.max_order,
            cells=args.cells,
            samples=args.samples,
            seed=args.seed,
            pair=pair,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    failures = sum(not c.passed for c in checks)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "command": "verify",
                    "params": {
                        "suite": args.suite,
                        "max_order": args.max_order,
                        "cells": args.cells,
                        "samples": args.samples,
                        "seed": args.seed,
                    },
                    "checks": [c.__dict__ for c in checks],
                    "total": len(checks),
                    "failures": failures,
                }
            )
        )
    else:
        print("suite,name,detail,value_a,value_b,margin,tol,status")
        for c in checks:
            status = "pass" if c.passed else "FAIL"
            print(f"{c.suite},{c.name},{c.detail},{c.value_a},{c.value_b},{c.margin},{c.tol},{status}")
        print(f"# checks={len(checks)} failures={failures}")
    return 1 if failures else 0


def cmd_sample(args) -> int:
    if args.sampler == "wishart":
        if args.alpha is None or args.beta is None:
            raise UsageError("sampler 'wishart' requires --alpha and --beta")
        p = parse_params(args.alpha, args.beta, "float")
        sampler = MatrixBetaSampler(p)
        params = {"sampler": "wishart", "alpha": args.alpha, "beta": args.beta}
    else:
        if args.n is None or args.k is None:
            raise UsageError("sampler 'stiefel' requires --n and --k")
        try:
            spec = StiefelSpec(args.n, args.k)
        except ValueError as e:
            raise UsageError(str(e)) from None
        sampler = StiefelBlockSampler(spec)
        params = {"sampler": "stiefel", "n": args.n, "k": args.k}
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    rng = RngSpec(args.seed, args.stream).generator()
    x, y, z = sampler.sample_batch(args.count, rng)
    params.update({"count": args.count, "seed": args.seed, "stream": args.stream})
    if args.format == "json":
        triples = [[fmt_value(float(a)), fmt_value(float(b)), fmt_value(float(c))] for a, b, c in zip(x, y, z)]
        print(json.dumps({"command": "sample", "params": params, "samples": triples}))
    else:
        print("x,y,z")
        for a, b, c in zip(x, y, z):
            print(f"{a:.17g},{b:.17g},{c:.17g}")
    return 0


def cmd_asymptotics(args) -> int:
    ratio = parse_rational(args.ratio, "--ratio")
    if args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError(f"need 1 <= --n-min <= --n-max, got {args.n_min}, {args.n_max}")
    ns = []
    n = args.n_min
    while n <= args.n_max:
        ns.append(n)
        n *= 2
    try:
        study = asym.DecayStudy(args.m, args.t, ratio, tuple(ns))
        summary = asym.decay_summary(study)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.format == "json":
        print(
            json.dumps(
                {
                    "command": "asymptotics",
                    "params": {"m": args.m, "t": args.t, "ratio": str(ratio), "n_values": ns},
                    "table": [
                        {
                            "n": n,
                            "k": study.k_of(n),
                            "value": str(v),
                            "value_float": fmt_value(float(v)),
                        }
                        for n, v in summary.table
                    ],
                    "fitted_slope": summary.slope,
                    "empirical_coefficient": _opt_float(summary.empirical_coefficient),
                    "limit_coefficient": _opt_str(summary.limit_coefficient),
                    "claimed_coefficient": _opt_str(summary.claimed_coefficient),
                }
            )
        )
    else:
        print("n,k,alpha,beta,value,value_float")
        for n, v in summary.table:
            p = study.params_of(n)
            print(f"{n},{study.k_of(n)},{p.alpha},{p.beta},{v},{float(v):.17g}")
        print(f"# fitted_slope={summary.slope:.17g}")
        if summary.empirical_coefficient is not None:
            print(f"# empirical_coefficient={summary.empirical_coefficient:.17g}")
            print(f"# limit_coefficient={summary.limit_coefficient} ({float(summary.limit_coefficient):.17g})")
            print(
                f"# claimed_coefficient={summary.claimed_coefficient} ({float(summary.claimed_coefficient):.17g})"
                " [disputed closed form, shown for the record]"
            )
    return 0


def _opt_float(v):
    return None if v is None else v


def _opt_str(v):
    return None if v is None else str(v)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="matbeta",
        description="Moments of the 2x2 matrix-variate Beta distribution: "
        "closed forms, verification oracles, samplers, decay studies.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    m = sub.add_parser("moment", help="evaluate one mixed moment E[X^m Y^r Z^z]")
    m.add_argument("--alpha", required=True)
    m.add_argument("--beta", required=True)
    m.add_argument("--m", type=int, default=0)
    m.add_argument("--r", type=int, default=0)
    m.add_argument("--z", type=int, default=0)
    m.add_argument("--mode", choices=("exact", "float"), default="exact")
    m.add_argument("--format", choices=("plain", "json"), default="plain")
    m.set_defaults(func=cmd_moment)

    t = sub.add_parser("table", help="moments over a Cartesian range of indices")
    t.add_argument("--alpha", required=True)
    t.add_argument("--beta", required=True)
    t.add_argument("--max-m", type=int, default=2)
    t.add_argument("--max-r", type=int, default=2)
    t.add_argument("--max-z", type=int, default=2)
    t.add_argument("--even-z", action="store_true", help="emit only even z exponents")
    t.add_argument("--mode", choices=("exact", "float"), default="exact")
    t.add_argument("--format", choices=("csv", "json"), default="csv")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run the verification suites")
    v.add_argument("--suite", choices=("exact", "quadrature", "montecarlo", "all"), default="all")
    v.add_argument("--max-order", type=int, default=4)
    v.add_argument("--cells", type=int, default=16)
    v.add_argument("--samples", type=int, default=200_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--alpha", help="restrict parameter grids to this alpha")
    v.add_argument("--beta", help="restrict parameter grids to this beta")
    v.add_argument("--format", choices=("csv", "json"), default="csv")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sample", help="emit sampled (x, y, z) triples")
    s.add_argument("--sampler", choices=("wishart", "stiefel"), required=True)
    s.add_argument("--alpha")
    s.add_argument("--beta")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--stream", type=int, default=0)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_sample)

    a = sub.add_parser("asymptotics", help="decay table, fitted exponent, leading coefficients")
    a.add_argument("--m", type=int, default=0)
    a.add_argument("--t", type=int, default=1)
    a.add_argument("--ratio", default="1/2")
    a.add_argument("--n-min", type=int, default=40)
    a.add_argument("--n-max", type=int, default=1280)
    a.add_argument("--format", choices=("csv", "json"), default="csv")
    a.set_defaults(func=cmd_asymptotics)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0
    except Exception as e:  # noqa: BLE001 - exit-code contract allows only 0/1/2
        print(f"internal error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
