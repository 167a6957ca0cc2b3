"""Command line entry point: ``twobridge {vol,info,scan,figure,selftest}``.

Exit codes: 0 success, 1 failed self-test, 2 invalid input, 3 unwritable output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from twobridge import dilog
from twobridge.freegroup import build_presentation
from twobridge.knotparams import (
    ParamError,
    cf_positive,
    epsilon_sequence,
    equivalent_params,
    lackenby_bounds,
    make_params,
)
from twobridge.polyseq import riley_poly
from twobridge.scan import format_fixed, records_to_csv, records_to_json, render_svg, scan
from twobridge.volume import riley_roots, volume

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_OUTPUT = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _params(p: int, q: int):
    try:
        return make_params(p, q)
    except ParamError as exc:
        raise CliError(EXIT_INPUT, f"{type(exc).__name__}: {exc}") from exc


def _write(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_OUTPUT, f"cannot write {output}: {exc}") from exc


def _complex(z: complex) -> str:
    return f"{z.real:+.15g} {z.imag:+.15g}i"


def cmd_vol(args: argparse.Namespace) -> int:
    result = volume(_params(args.p, args.q))
    if args.json:
        print(json.dumps(result.to_dict(), indent=2))
        return EXIT_OK
    print(format_fixed(max(result.volume, 0.0)))
    if args.all_roots:
        print(f"{'root':>44}  {'v_cross':>16}  {'v_theorem':>16}  degenerate")
        for r in result.per_root:
            print(
                f"{_complex(r.root):>44}  {r.v_cross:>16.12f}  {r.v_theorem:>16.12f}  "
                f"{'yes' if r.degenerate else 'no'}"
            )
        print(f"argmax root: {_complex(result.argmax_root)}")
    return EXIT_OK


def info_report(p: int, q: int, with_roots: bool = False) -> str:
    params = _params(p, q)
    cf = cf_positive(p, q)
    lower, upper = lackenby_bounds(cf)
    words = build_presentation(params)
    poly = riley_poly(params)
    deg = p - 1
    equivalent = ", ".join(f"K({a},{b})" for a, b in sorted(equivalent_params(params)))
    lines = [
        f"K({p},{q})",
        f"p = {p}",
        f"q = {q}",
        f"ell = {params.ell}",
        f"epsilon = {epsilon_sequence(params, p - 1)}",
        f"cf = {list(cf.terms)}",
        f"conway = C({' '.join(map(str, cf.terms))})",
        f"lackenby = [{format_fixed(lower)}, {format_fixed(upper)}]",
        f"equivalent = {equivalent}",
        f"w = {words.w}",
        f"w* = {words.w_star}",
        f"g = {words.g}",
        f"r = {words.r}",
        f"l = {words.l}",
        f"P_{deg} = {poly}",
        f"P_{deg} coefficients (degree 0 first) = {list(poly.coeffs)}",
    ]
    if with_roots:
        roots = riley_roots(params)
        lines.append(f"roots of P_{deg} ({roots.poly_degree}):")
        lines.append(f"  {'re':>22}  {'im':>22}  {'|P|/max|coeff|':>14}")
        for z, res in zip(roots.roots, roots.residuals):
            lines.append(f"  {z.real:>+22.15g}  {z.imag:>+22.15g}  {res:>14.3e}")
    return "\n".join(lines) + "\n"


def cmd_info(args: argparse.Namespace) -> int:
    sys.stdout.write(info_report(args.p, args.q, args.roots))
    return EXIT_OK


def _check_pmax(pmax: int) -> None:
    if pmax < 3:
        raise CliError(EXIT_INPUT, f"OutOfRange: pmax must be at least 3, got {pmax}")


def cmd_scan(args: argparse.Namespace) -> int:
    _check_pmax(args.pmax)
    records = scan(args.pmax)
    text = records_to_csv(records) if args.format == "csv" else records_to_json(records)
    _write(text, args.output)
    return EXIT_OK


def cmd_figure(args: argparse.Namespace) -> int:
    _check_pmax(args.pmax)
    _write(render_svg(scan(args.pmax), args.pmax), args.output)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    from twobridge import acceptance

    if args.dilog_tol is not None:
        dilog.set_config(dilog.DilogConfig(series_tol=args.dilog_tol))
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twobridge", description="Hyperbolic volumes of two-bridge knots K(p,q)."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_vol = sub.add_parser("vol", help="volume of K(p,q)")
    p_vol.add_argument("p", type=int)
    p_vol.add_argument("q", type=int)
    p_vol.add_argument("--all-roots", action="store_true", help="per-root table")
    p_vol.add_argument("--json", action="store_true", help="machine-readable result")
    p_vol.set_defaults(func=cmd_vol)

    p_info = sub.add_parser("info", help="signs, words, continued fraction and Riley polynomial")
    p_info.add_argument("p", type=int)
    p_info.add_argument("q", type=int)
    p_info.add_argument("--roots", action="store_true", help="append the roots of P_{p-1}")
    p_info.set_defaults(func=cmd_info)

    p_scan = sub.add_parser("scan", help="volumes of all K(p,q) with p <= pmax")
    p_scan.add_argument("--pmax", type=int, required=True)
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.add_argument("-o", "--output", help="output file (default: stdout)")
    p_scan.set_defaults(func=cmd_scan)

    p_fig = sub.add_parser("figure", help="SVG scatter of (q/p, volume)")
    p_fig.add_argument("--pmax", type=int, required=True)
    p_fig.add_argument("-o", "--output", required=True, help="SVG file to write")
    p_fig.set_defaults(func=cmd_figure)

    p_self = sub.add_parser("selftest", help="run the acceptance criteria")
    p_self.add_argument(
        "--dilog-tol",
        type=float,
        default=None,
        help="override the dilogarithm series tolerance (negative control)",
    )
    p_self.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
