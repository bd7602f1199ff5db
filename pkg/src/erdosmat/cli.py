"""Command-line surface tying the library into a usable tool.

Matrices are read in the shared text format (rational literals, one row
per line, ``#`` comments); all payload numbers are exact literals, with
``--approx`` adding decimal renderings alongside them, never replacing
them.  Exit codes: 0 success / verdict true, 1 verdict false, 2 usage
error, 3 input error, 4 budget-truncated enumeration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .assignment import delta, frobenius_sq, max_delta_matrix, max_trace
from .birkhoff import LinearReductionError, decompose, reduce_affine, reduce_linear
from .enumeration import canonical_form, enumerate_erdos
from .gram import count_bound, half_identity_family
from .linalg import (
    MatrixParseError,
    NotBistochasticError,
    format_matrix,
    parse_matrix,
)
from .rational import format_rational, parse_rational
from .surd import Surd, omega2, omega2_classes

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_TRUNCATED = 4

WITNESS_CAP = 100


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MatrixParseError, NotBistochasticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erdosmat",
        description="Verify, decompose and enumerate Erdos matrices exactly.",
    )
    parser.add_argument("--version", action="version", version=f"erdosmat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check whether a bistochastic matrix is Erdos")
    p.add_argument("file", help="matrix file, or - for stdin")
    p.add_argument("--method", choices=("auto", "brute", "hungarian"), default="auto")
    _common_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="enumerate all Erdos classes in dimension n")
    p.add_argument("-n", type=int, required=True, metavar="N")
    p.add_argument("--max-support", type=int, default=None, metavar="M")
    p.add_argument("--budget", default=None, metavar="DURATION",
                   help="wall-clock limit, e.g. 30s, 10m, 1h")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $ERDOSMAT_WORKERS or 1)")
    p.add_argument("--engine", choices=("auto", "jit", "numpy", "exact"), default="auto")
    p.add_argument("--set-filter", action="store_true",
                   help="pre-filter equivalent supports before solving (exact engine)")
    p.add_argument("--quiet", action="store_true", help="suppress progress on stderr")
    _common_flags(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("decompose", help="Birkhoff-von Neumann decomposition")
    p.add_argument("file", help="matrix file, or - for stdin")
    p.add_argument("--reduce", choices=("none", "affine", "linear"), default="none")
    _common_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("canon", help="canonical form under row/column permutations")
    p.add_argument("file", help="matrix file, or - for stdin")
    _common_flags(p)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("family", help="the Erdos matrices (I + P)/2, one per cycle type")
    p.add_argument("n", type=int)
    _common_flags(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("bound", help="binomial-sum bounds on the number of Erdos matrices")
    p.add_argument("n", type=int)
    _common_flags(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("omega2", help="diagonal entries of 2x2 matrices with a given gap")
    p.add_argument("alpha", help="rational gap in [0, 1/4]")
    _common_flags(p)
    p.set_defaults(func=cmd_omega2)

    p = sub.add_parser("maxdelta", help="the gap maximizer I/2 + J/2 and its gap (n-1)/4")
    p.add_argument("n", type=int)
    _common_flags(p)
    p.set_defaults(func=cmd_maxdelta)

    return parser


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--approx", action="store_true",
                   help="add decimal renderings alongside exact literals")


def _read_matrix(path: str, bistochastic: bool = True):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_matrix(text, bistochastic=bistochastic)


def _matrix_json(m) -> list:
    return [[format_rational(e) for e in row] for row in m]


def _emit_json(args, command: str, n: int, payload: dict) -> None:
    envelope = {
        "command": command,
        "n": n,
        "payload": payload,
        "tool_version": __version__,
    }
    print(json.dumps(envelope, indent=2))


def _fmt(args, value) -> str:
    text = format_rational(value)
    if args.approx:
        text += f" ~ {float(value):.6g}"
    return text


def _parse_duration(text: str) -> float:
    text = text.strip().lower()
    factor = 1.0
    if text.endswith(("s", "m", "h")):
        factor = {"s": 1.0, "m": 60.0, "h": 3600.0}[text[-1]]
        text = text[:-1]
    try:
        seconds = float(text) * factor
    except ValueError:
        raise ValueError(f"malformed duration {text!r}; use e.g. 30s, 10m, 1h")
    if seconds <= 0:
        raise ValueError("budget must be positive")
    return seconds


def cmd_verify(args) -> int:
    a = _read_matrix(args.file)
    cert = max_trace(a, method=args.method)
    frob = frobenius_sq(a)
    gap = cert.value - frob
    verdict = gap == 0
    witnesses = cert.witnesses[:WITNESS_CAP]
    if args.format == "json":
        payload = {
            "frob_sq": format_rational(frob),
            "maxtr": format_rational(cert.value),
            "delta": format_rational(gap),
            "erdos": verdict,
            "witnesses": [list(w.one_indexed()) for w in witnesses],
            "witness_count": len(cert.witnesses),
            "witnesses_complete": cert.complete,
        }
        if args.approx:
            payload["frob_sq_approx"] = float(frob)
            payload["maxtr_approx"] = float(cert.value)
            payload["delta_approx"] = float(gap)
        _emit_json(args, "verify", a.n, payload)
    else:
        print(f"frob_sq: {_fmt(args, frob)}")
        print(f"maxtr:   {_fmt(args, cert.value)}")
        print(f"delta:   {_fmt(args, gap)}")
        shown = " ".join(str(w) for w in witnesses)
        suffix = "" if cert.complete else " (not exhaustive)"
        print(f"witnesses ({len(witnesses)} of {len(cert.witnesses)}{suffix}): {shown}")
        print(f"verdict: {'Erdos' if verdict else 'not Erdos'}")
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_enumerate(args) -> int:
    budget = _parse_duration(args.budget) if args.budget else None

    progress = None
    if not args.quiet:
        state = {"last": -1}

        def progress(done, total):
            decile = 10 * done // total
            if decile != state["last"]:
                state["last"] = decile
                print(f"enumerate n={args.n}: {done}/{total} shards", file=sys.stderr)

    report = enumerate_erdos(
        args.n,
        max_support=args.max_support,
        budget=budget,
        workers=args.workers,
        engine=args.engine,
        use_set_filter=args.set_filter,
        progress=progress,
    )
    if args.format == "json":
        _emit_json(args, "enumerate", args.n, report.to_json())
    else:
        print(
            f"n={report.n}: {len(report.classes)} classes"
            f" ({'complete' if report.complete else 'TRUNCATED'},"
            f" {report.elapsed:.2f}s, engine {report.engine},"
            f" {report.workers} worker(s))"
        )
        print(
            f"sets visited {report.sets_visited}, rejected:"
            f" dependent {report.rejected_dependent},"
            f" negative_weight {report.rejected_negative},"
            f" maxtr_exceeded {report.rejected_maxtr}"
        )
        for k, c in enumerate(report.classes, start=1):
            support = " ".join(str(p) for p in c.support)
            weights = " ".join(format_rational(w) for w in c.weights)
            print(f"\nclass {k}: value {_fmt(args, c.common_value)}, "
                  f"sources {c.sources}")
            print(f"  support: {support}")
            print(f"  weights: {weights}")
            print("  " + format_matrix(c.canonical).replace("\n", "\n  "))
    return EXIT_OK if report.complete else EXIT_TRUNCATED


def cmd_decompose(args) -> int:
    a = _read_matrix(args.file)
    d = decompose(a)
    if args.reduce == "affine":
        d = reduce_affine(d)
    elif args.reduce == "linear":
        try:
            d = reduce_linear(d)
        except LinearReductionError as exc:
            print(f"linear reduction failed: {exc}", file=sys.stderr)
            return EXIT_FALSE
    if d.matrix() != a:
        raise RuntimeError("decomposition failed to reconstruct the input")
    if args.format == "json":
        payload = {
            "terms": d.to_json(),
            "term_count": len(d),
            "reduce": args.reduce,
        }
        _emit_json(args, "decompose", a.n, payload)
    else:
        for c, p in d:
            print(f"{format_rational(c)}  {p}")
    return EXIT_OK


def cmd_canon(args) -> int:
    a = _read_matrix(args.file)
    c = canonical_form(a)
    if args.format == "json":
        _emit_json(args, "canon", a.n, {"matrix": _matrix_json(c)})
    else:
        print(format_matrix(c))
    return EXIT_OK


def cmd_family(args) -> int:
    mats = half_identity_family(args.n)
    if args.format == "json":
        payload = {
            "count": len(mats),
            "matrices": [
                {"matrix": _matrix_json(a), "frob_sq": format_rational(frobenius_sq(a))}
                for a in mats
            ],
        }
        _emit_json(args, "family", args.n, payload)
    else:
        for k, a in enumerate(mats, start=1):
            print(f"matrix {k}: frob_sq {_fmt(args, frobenius_sq(a))}")
            print(format_matrix(a))
            print()
    return EXIT_OK


def cmd_bound(args) -> int:
    total, equivalence = count_bound(args.n)
    if args.format == "json":
        payload = {"total_bound": total, "equivalence_bound": equivalence}
        _emit_json(args, "bound", args.n, payload)
    else:
        print(f"total bound:       {total}")
        print(f"equivalence bound: {equivalence}")
    return EXIT_OK


def cmd_omega2(args) -> int:
    alpha = parse_rational(args.alpha)
    sols = omega2(alpha)
    classes = omega2_classes(alpha)
    if args.format == "json":
        payload = {
            "alpha": format_rational(alpha),
            "solutions": [str(s) for s in sols],
            "class_count": len(classes),
        }
        if args.approx:
            payload["solutions_approx"] = [_surd_float(s) for s in sols]
        _emit_json(args, "omega2", 2, payload)
    else:
        for s in sols:
            line = str(s)
            if args.approx:
                line += f" ~ {_surd_float(s):.6g}"
            print(line)
        print(f"classes up to p <-> 1-p: {len(classes)}")
    return EXIT_OK


def cmd_maxdelta(args) -> int:
    a = max_delta_matrix(args.n)
    gap = delta(a)
    if args.format == "json":
        payload = {"matrix": _matrix_json(a), "delta": format_rational(gap)}
        if args.approx:
            payload["delta_approx"] = float(gap)
        _emit_json(args, "maxdelta", args.n, payload)
    else:
        print(format_matrix(a))
        print(f"delta: {_fmt(args, gap)}")
    return EXIT_OK


def _surd_float(s: Surd) -> float:
    return float(s.a) + float(s.b) * math.sqrt(s.d)


if __name__ == "__main__":
    sys.exit(main())
