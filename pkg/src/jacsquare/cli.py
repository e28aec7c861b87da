"""Command-line interface: ``jacsquare discr|periods|chi18|delta|twist|scan``.

Exit codes: 0 success, 2 singular input, 3 precision insufficient, 4 internal
consistency failure, 1 other errors (bad input files, usage).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import __version__
from .arith import BigComplex, format_complex, format_rational, parse_complex, parse_rational
from .errors import JacSquareError, SingularInputError
from .quartic import discriminant, discriminant_modular, parse_form


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _header(kind: str, prec: Optional[int], convention: str) -> list[str]:
    lines = [f"# jacsquare {kind} report", f"version: {__version__}", f"convention: {convention}"]
    if prec is not None:
        lines.append(f"precision: {prec}")
    return lines


def cmd_discr(args) -> int:
    F = parse_form(_read(args.quartic), degree=4)
    D = discriminant(F)
    lines = _header("discriminant", None, "Discr=Res(F_x,F_y,F_z)")
    lines.append(f"discriminant: {format_rational(D)}")
    if args.check:
        Dm = discriminant_modular(F)
        lines.append(f"modular_check: {'agree' if Dm == D else 'DISAGREE'}")
    lines.append(f"smooth: {'yes' if D != 0 else 'no'}")
    print("\n".join(lines))
    return SingularInputError.exit_code if D == 0 else 0


def _parse_point(text: Optional[str]):
    if text is None:
        return None
    re_s, _, im_s = text.partition(",")
    return complex(float(re_s), float(im_s or 0))


def cmd_periods(args) -> int:
    from .periods import make_curve, period_matrix
    from .periods.report import format_period_report

    F = parse_form(_read(args.quartic), degree=4)
    curve = make_curve(F)
    pd = period_matrix(curve, args.prec, base_point=_parse_point(args.base_point), variant=args.variant)
    sys.stdout.write(format_period_report(pd))
    return 0


def cmd_chi18(args) -> int:
    from .siegel import parse_tau
    from .theta import chi18_paper_literal, theta_nulls, zero_threshold

    tau = parse_tau(_read(args.tau))
    p = args.prec
    tn = theta_nulls(tau, p)
    mags = tn.magnitudes()
    conv = "classical-theta" + ("; paper-literal" if args.paper_literal else "")
    lines = _header("chi18", p, conv)
    lines.append(f"chi18: {format_complex(tn.chi18)}")
    if args.paper_literal:
        lines.append(f"chi18_paper_literal: {format_complex(chi18_paper_literal(tau, p))}")
    lines.append(f"cocycle: {format_complex(tn.cocycle)}")
    lines.append(f"vanishing_even_nulls: {sum(1 for m in mags if m < zero_threshold(p))}")
    lines.append(f"min_even_null: {mpmath.nstr(mags[0], 20)}")
    lines.append(f"lattice_terms: {tn.terms}")
    print("\n".join(lines))
    return 0


def cmd_delta(args) -> int:
    from .pipeline import delta_from_tau_omega, delta_of_quartic, format_delta_report
    from .periods.report import parse_omega1
    from .siegel import parse_tau

    if args.quartic:
        F = parse_form(_read(args.quartic), degree=4)
        rep = delta_of_quartic(F, args.prec, base_point=_parse_point(args.base_point), variant=args.variant)
    else:
        if not (args.tau and args.omega1):
            raise SystemExit("delta: give --quartic, or both --tau and --omega1")
        tau = parse_tau(_read(args.tau))
        omega1 = parse_omega1(_read(args.omega1))
        rep = delta_from_tau_omega(tau, omega1, args.prec)
    sys.stdout.write(format_delta_report(rep))
    return 0


def cmd_twist(args) -> int:
    from .pipeline import format_delta_report, parse_delta_report, twist_delta

    rep = parse_delta_report(_read(args.report))
    sys.stdout.write(format_delta_report(twist_delta(rep, parse_rational(args.D))))
    return 0


def cmd_scan(args) -> int:
    from .pipeline import degeneration_scan

    Q = parse_form(_read(args.conic), degree=2)
    H = parse_form(_read(args.quartic), degree=4)
    ts = [parse_rational(s) for s in args.t.replace(",", " ").split()]
    res = degeneration_scan(Q, H, ts, args.prec)
    lines = _header("degeneration scan", args.prec, "F = Q^2 + t^2 H; nulls are |theta| of the 36 even characteristics")
    lines.append("# t  discriminant  delta_rational  exponent  min_even_null  second_even_null")
    for row in res.rows:
        if row.report is None:
            lines.append(f"{format_rational(row.t)}  {format_rational(row.discriminant)}  {row.error}")
            continue
        r = row.report
        exp = "none" if r.exponent_vs_discr is None else "%d,%d" % r.exponent_vs_discr
        dr = "none" if r.delta_rational is None else format_rational(r.delta_rational)
        lines.append(
            f"{format_rational(row.t)}  {format_rational(row.discriminant)}  {dr}  {exp}  "
            f"{mpmath.nstr(row.min_null, 12)}  {mpmath.nstr(row.second_null, 12)}"
        )
    lines.append(f"monotone: {'yes' if res.monotone else 'no'}")
    lines.append("separation: " + " ".join(mpmath.nstr(s, 6) for s in res.separation))
    lines.append("loglog_slopes: " + " ".join("%.4f" % s for s in res.slopes))
    lines.append(f"vanishing_in_limit: {res.vanishing_in_limit}")
    print("\n".join(lines))
    return 0 if res.monotone and all(r.report is not None for r in res.rows) else 4


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacsquare", description="Genus-3 Jacobian square criterion toolkit")
    ap.add_argument("--version", action="version", version=f"jacsquare {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("discr", help="exact discriminant of a ternary quartic")
    s.add_argument("quartic")
    s.add_argument("--check", action="store_true", help="cross-check by multi-modular recomputation")
    s.set_defaults(func=cmd_discr)

    s = sub.add_parser("periods", help="period matrix and tau of a smooth quartic")
    s.add_argument("quartic")
    s.add_argument("--prec", type=int, default=100)
    s.add_argument("--base-point", help="base point 're,im' for the loops")
    s.add_argument("--variant", type=int, default=0, help="alternative homology reduction")
    s.set_defaults(func=cmd_periods)

    s = sub.add_parser("chi18", help="product of the 36 even theta nulls")
    s.add_argument("--tau", required=True)
    s.add_argument("--prec", type=int, default=100)
    s.add_argument("--paper-literal", action="store_true", help="also report the unnormalised-series variant")
    s.set_defaults(func=cmd_chi18)

    s = sub.add_parser("delta", help="Delta and the Jacobian verdict")
    s.add_argument("--quartic")
    s.add_argument("--tau")
    s.add_argument("--omega1")
    s.add_argument("--prec", type=int, default=100)
    s.add_argument("--base-point")
    s.add_argument("--variant", type=int, default=0)
    s.set_defaults(func=cmd_delta)

    s = sub.add_parser("twist", help="Delta of a quadratic twist")
    s.add_argument("--report", required=True)
    s.add_argument("-D", required=True, help="twisting parameter p/q (not a square)")
    s.set_defaults(func=cmd_twist)

    s = sub.add_parser("scan", help="degenerate Q^2 + t^2 H towards the hyperelliptic locus")
    s.add_argument("--conic", required=True)
    s.add_argument("--quartic", required=True)
    s.add_argument("--t", required=True, help="comma separated list of rationals")
    s.add_argument("--prec", type=int, default=100)
    s.set_defaults(func=cmd_scan)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SingularInputError as exc:
        d = "" if exc.discriminant is None else f" (discriminant {format_rational(Fraction(exc.discriminant))})"
        print(f"error: {exc}{d}", file=sys.stderr)
        return exc.exit_code
    except JacSquareError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
