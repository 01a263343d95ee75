"""critline command line.

Exit codes: 0 success; 1 usage or parse error; 2 evaluation error (pole,
precondition); 3 I/O error; 4 an audited claim disagrees beyond
tolerance (a finding); 5 one of our own cross-checks failed.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys

from . import audits
from . import dirichlet as dch
from . import epstein as ep
from .errors import CritlineError
from .reports import atomic_write_text, csv_text, json_text, jsonl_text, write_sidecar
from .zeros import DEFAULT_STEP, build_zero_list
from .zeta import big_f, phi, zeta

EXIT_OK, EXIT_USAGE, EXIT_EVAL, EXIT_IO, EXIT_FINDING, EXIT_CHECK = 0, 1, 2, 3, 4, 5

EVAL_COLUMNS = ("function", "point", "re", "im", "abs_err")


class UsageError(Exception):
    pass


_POINT = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?([+-](\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)?[ij]?$")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-3.5+2i" through as a positional point rather than an option
        self._negative_number_matcher = _POINT

    def error(self, message):
        raise UsageError(message)


def parse_point(text: str) -> complex:
    """Parse "a", "bi", "a+bi" or "a-bi" (decimal; 'j' accepted for 'i')."""
    tok = text.strip()
    if not tok or not _POINT.match(tok):
        raise UsageError(f"cannot parse point {text!r}")
    try:
        z = complex(tok.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse point {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise UsageError(f"non-finite point {text!r}")
    return z


def parse_ints(text: str, n: int, what: str) -> tuple[int, ...]:
    parts = text.split(",")
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad {what} {text!r}: expected {n} comma-separated integers") from None
    if len(vals) != n:
        raise UsageError(f"bad {what} {text!r}: expected {n} comma-separated integers")
    return vals


def parse_floats(text: str, n: int, what: str) -> tuple[float, ...]:
    parts = text.split(",")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad {what} {text!r}: expected {n} comma-separated numbers") from None
    if len(vals) != n or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"bad {what} {text!r}: expected {n} comma-separated numbers")
    return vals


def parse_tolerances(items, allowed: dict[str, float]) -> dict[str, float]:
    tol = dict(allowed)
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        name, _, val = item.partition("=")
        if name not in allowed:
            raise UsageError(f"unknown tolerance {name!r}; known: {', '.join(sorted(allowed))}")
        try:
            v = float(val)
        except ValueError:
            raise UsageError(f"tolerance {name} must be a number, got {val!r}") from None
        if not v > 0 or not math.isfinite(v):
            raise UsageError(f"tolerance {name} must be positive and finite")
        tol[name] = v
    return tol


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the report here (atomic); default stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")
    common.add_argument("--zeros-file", default=os.environ.get("CRITLINE_ZEROS"), help="ZeroList file (env CRITLINE_ZEROS)")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a named tolerance")

    p = _Parser(prog="critline", description="Zeta, L- and Epstein-function evaluators and claim audits.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", parents=[common], help="evaluate a function at points")
    e.add_argument("function", choices=("zeta", "phi", "F", "L", "epstein"))
    e.add_argument("points", nargs="+", help='points like 2, 0.5+14.1i, -3i (F takes real t)')
    e.add_argument("--chi", default="4,2", help="character as q,j for L (default 4,2)")
    e.add_argument("--form", default="1,0,1", help="quadratic form a,b,c for epstein")

    z = sub.add_parser("zeros", parents=[common], help="first COUNT critical-line zero ordinates")
    z.add_argument("count", type=int)
    z.add_argument("--step", type=float, default=DEFAULT_STEP)
    z.add_argument("--zero-tol", type=float, default=1e-10, help="refinement tolerance")

    a = sub.add_parser("audit", parents=[common], help="run an audit grid")
    a.add_argument("target", choices=audits.TARGETS)
    a.add_argument("--q", type=int, help="principal-identity: a single modulus")
    a.add_argument("--variant", choices=("as-printed", "t-squared"), help="phase: accepted; both variants are always reported")
    a.add_argument("--form", help="epstein: form a,b,c for the zero search")
    a.add_argument("--region", help="epstein: sigma_lo,sigma_hi,t_lo,t_hi")
    a.add_argument("--grid-step", type=float, default=0.05, help="epstein: boundary sample spacing")
    a.add_argument("--no-gradients", action="store_true", help="phase: skip the denominator gradient scans")

    c = sub.add_parser("characters", parents=[common], help="dump the character table modulo Q as JSON")
    c.add_argument("q", type=int)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _render(rows, columns, fmt: str) -> str:
    return csv_text(rows, columns) if fmt == "csv" else jsonl_text(rows)


def cmd_eval(args) -> int:
    pts = [parse_point(p) for p in args.points]
    rows = []
    for s in pts:
        if args.function == "zeta":
            r = zeta(s)
        elif args.function == "phi":
            r = phi(s)
        elif args.function == "F":
            if s.imag != 0:
                raise UsageError(f"F takes a real t, got {s}")
            r = big_f(s.real)
        elif args.function == "L":
            q, j = parse_ints(args.chi, 2, "character")
            chars = dch.enumerate_characters(q)
            if not 1 <= j <= len(chars):
                raise UsageError(f"character label j must lie in [1, {len(chars)}]")
            r = dch.l_function(s, chars[j - 1])
        else:
            r = ep.epstein_continued(s, ep.QuadraticForm(*parse_ints(args.form, 3, "form")))
        rows.append({"function": args.function, "point": s, "re": r.real, "im": r.imag, "abs_err": r.abs_err})
    _emit(_render(rows, EVAL_COLUMNS, args.format), args.out)
    return EXIT_OK


def cmd_zeros(args) -> int:
    if args.count < 1:
        raise UsageError("count must be >= 1")
    if not args.step > 0 or not args.zero_tol > 0:
        raise UsageError("--step and --zero-tol must be positive")
    zl = build_zero_list(args.count, tol=args.zero_tol, step=args.step, workers=args.threads)
    _emit(zl.to_text(), args.out)
    return EXIT_OK


def cmd_audit(args) -> int:
    tol = parse_tolerances(args.tol, audits.DEFAULT_TOLERANCES[args.target])
    t = args.target
    columns = audits.AUDIT_COLUMNS
    if t == "hadamard":
        zl = audits.get_zero_list(200, args.zeros_file, workers=args.threads)
        rows, summ = audits.audit_hadamard(tol, zl)
    elif t == "phase":
        rows, summ = audits.audit_phase(tol, gradient_grids=not args.no_gradients)
        columns = (*audits.ph.LEDGER_COLUMNS, "finding")
    elif t == "principal-identity":
        if args.q is not None and not 2 <= args.q <= dch.Q_MAX:
            raise UsageError(f"--q must lie in [2, {dch.Q_MAX}]")
        qs = (args.q,) if args.q is not None else tuple(range(2, 51))
        rows, summ = audits.audit_principal_identity(tol, qs)
    elif t == "epstein":
        form = parse_ints(args.form, 3, "form") if args.form else audits.DEFAULT_FORM
        region = parse_floats(args.region, 4, "region") if args.region else audits.DEFAULT_REGION
        if not args.grid_step > 0:
            raise UsageError("--grid-step must be positive")
        rows, summ = audits.audit_epstein(tol, form, region, args.grid_step)
    else:
        rows, summ = audits.RUNNERS[t](tol)
    code = EXIT_CHECK if summ["check_failures"] else EXIT_FINDING if summ["findings"] else EXIT_OK
    summ = {"target": t, "tolerances": tol, **summ, "exit_code": code}
    _emit(_render(rows, columns, args.format), args.out)
    if args.out:
        write_sidecar(args.out, {"summary": summ})
        sys.stdout.write(json_text(summ))
    else:
        sys.stderr.write(json_text(summ))
    return code


def cmd_characters(args) -> int:
    _emit(json_text(dch.characters_json(args.q)), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 0:
            raise UsageError("--threads must be >= 0")
        handler = {"eval": cmd_eval, "zeros": cmd_zeros, "audit": cmd_audit, "characters": cmd_characters}[args.command]
        return handler(args)
    except UsageError as exc:
        sys.stderr.write(f"critline: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"critline: I/O error: {exc}\n")
        return EXIT_IO
    except CritlineError as exc:
        sys.stderr.write(f"critline: evaluation error: {exc}\n")
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
