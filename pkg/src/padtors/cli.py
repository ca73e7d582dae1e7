"""Command-line front end with deterministic, machine-readable JSON output.

Subcommands: counterexample, tate, torsion-scan, separation, ell-log.
Exit codes: 0 success, 1 usage or domain error, 2 certification mismatch,
3 precision exhaustion / convergence failure.  Every nonzero exit prints a
structured error object.  Identical configurations produce byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .padic import PadicNumber, PrecisionError, check_prime
from .elliptic import CurvePoint, WeierstrassCurve
from .hensel import HenselError
from .tate import build_tate_model
from .family import CertificationError, build_family_model, separation_check

DEFAULT_PREC = 60
DEFAULT_SERIES_ORDER = 64


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    p: int
    prec: int
    series_order: int
    trace: bool = False
    out: str | None = None

    def validate(self) -> None:
        check_prime(self.p)
        if self.prec < 4:
            raise UsageError(f"prec must be >= 4, got {self.prec}")
        if self.series_order < 8:
            raise UsageError(
                f"series order must be >= 8, got {self.series_order}")


def _default_prec() -> int:
    env = os.environ.get("PADTORS_PREC")
    if env is None:
        return DEFAULT_PREC
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"PADTORS_PREC must be an integer, got {env!r}")


def _rational(s: str) -> Fraction:
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad rational {s!r}: {e}")


def _pad(fr: Fraction, p: int, prec: int) -> PadicNumber:
    if fr == 0:
        return PadicNumber.exact_zero(p)
    return PadicNumber.from_rational(fr.numerator, fr.denominator, p, prec)


def _curve_from(cfg: RunConfig, args) -> WeierstrassCurve:
    a4 = _pad(_rational(args.a4), cfg.p, cfg.prec)
    a6 = _pad(_rational(args.a6), cfg.p, cfg.prec)
    return WeierstrassCurve(a4, a6)


def _strip_traces(obj):
    if isinstance(obj, dict):
        return {k: _strip_traces(v) for k, v in obj.items()
                if k != "newton_trace"}
    if isinstance(obj, list):
        return [_strip_traces(v) for v in obj]
    return obj


def cmd_counterexample(cfg: RunConfig, args) -> dict:
    if args.n_min > args.n_max:
        raise UsageError(f"--n-min {args.n_min} > --n-max {args.n_max}")
    if args.n_min < 2:
        raise UsageError("--n-min must be >= 2")
    model = build_family_model(cfg.p, cfg.prec, cfg.series_order)
    report = model.accumulation_report(args.n_min, args.n_max)
    if not cfg.trace:
        report = _strip_traces(report)
    return report


def cmd_tate(cfg: RunConfig, args) -> dict:
    model = build_tate_model(cfg.p, cfg.prec, cfg.series_order)
    out = model.leading_coefficients(args.coeffs)
    out.update({"p": cfg.p, "prec": cfg.prec,
                "series_order": cfg.series_order})
    return out


def cmd_torsion_scan(cfg: RunConfig, args) -> dict:
    E = _curve_from(cfg, args)
    records, warnings = E.torsion_scan(args.max_order, args.disk_val,
                                       args.scan_depth)
    return {"curve": E.to_json(), "max_order": args.max_order,
            "disk_val": args.disk_val,
            "records": [r.to_json() for r in records],
            "warnings": warnings}


def cmd_separation(cfg: RunConfig, args) -> dict:
    E = _curve_from(cfg, args)
    return separation_check(E, args.max_order, args.disk_val,
                            args.scan_depth)


def cmd_ell_log(cfg: RunConfig, args) -> dict:
    E = _curve_from(cfg, args)
    if args.point_inf:
        P = CurvePoint.infinity()
    else:
        if args.x is None or args.y is None:
            raise UsageError("need --x and --y (or --point-inf)")
        P = E.point(_pad(_rational(args.x), cfg.p, cfg.prec),
                    _pad(_rational(args.y), cfg.p, cfg.prec))
    value = E.log(P)
    out = {"curve": E.to_json(), "point": P.to_json(),
           "log": value.to_json()}
    if not P.is_infinity:
        doubled = E.log(E.add(P, P))
        residual = doubled - value * 2
        out["doubling_check"] = {
            "passed": residual.is_zero_like(),
            "residual": residual.to_json(),
        }
    return out


def _build_parser() -> _Parser:
    parser = _Parser(prog="padtors", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, curve=False):
        sp.add_argument("--p", type=int, default=5)
        sp.add_argument("--prec", type=int, default=None)
        sp.add_argument("--series-order", type=int,
                        default=DEFAULT_SERIES_ORDER)
        sp.add_argument("--trace", action="store_true")
        sp.add_argument("--out", default=None)
        if curve:
            sp.add_argument("--a4", required=True,
                            help="rational, e.g. -1 or 3/4")
            sp.add_argument("--a6", required=True)

    sp = sub.add_parser("counterexample",
                        help="torsion parameters t_n accumulating at t = 0")
    common(sp)
    sp.add_argument("--n-min", type=int, default=4)
    sp.add_argument("--n-max", type=int, default=10)
    sp.set_defaults(fn=cmd_counterexample)

    sp = sub.add_parser("tate", help="leading Tate series coefficients")
    common(sp)
    sp.add_argument("--coeffs", type=int, default=8)
    sp.set_defaults(fn=cmd_tate)

    sp = sub.add_parser("torsion-scan",
                        help="certified torsion parameters in a disk")
    common(sp, curve=True)
    sp.add_argument("--max-order", type=int, required=True)
    sp.add_argument("--disk-val", type=int, default=0)
    sp.add_argument("--scan-depth", type=int, default=3)
    sp.set_defaults(fn=cmd_torsion_scan)

    sp = sub.add_parser("separation",
                        help="separation report on a good-reduction curve")
    common(sp, curve=True)
    sp.add_argument("--max-order", type=int, required=True)
    sp.add_argument("--disk-val", type=int, default=0)
    sp.add_argument("--scan-depth", type=int, default=3)
    sp.set_defaults(fn=cmd_separation)

    sp = sub.add_parser("ell-log", help="elliptic logarithm of a point")
    common(sp, curve=True)
    sp.add_argument("--x", default=None)
    sp.add_argument("--y", default=None)
    sp.add_argument("--point-inf", action="store_true")
    sp.set_defaults(fn=cmd_ell_log)
    return parser


def _render(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def run(argv=None) -> tuple[int, str]:
    """Execute a command line; returns (exit_code, output_text)."""
    try:
        args = _build_parser().parse_args(argv)
        cfg = RunConfig(p=args.p,
                        prec=args.prec if args.prec is not None
                        else _default_prec(),
                        series_order=args.series_order,
                        trace=args.trace, out=args.out)
        cfg.validate()
        return 0, _render(args.fn(cfg, args))
    except UsageError as e:
        return 1, _render({"error": {"type": "usage", "message": str(e)}})
    except CertificationError as e:
        return 2, _render({"error": {"type": "certification",
                                     "message": str(e)}})
    except (PrecisionError, HenselError) as e:
        return 3, _render({"error": {"type": "precision",
                                     "message": str(e)}})
    except (ValueError, ZeroDivisionError, ArithmeticError) as e:
        return 1, _render({"error": {"type": "domain", "message": str(e)}})


def main(argv=None) -> int:
    code, text = run(argv)
    out = None
    if code == 0:
        try:
            out = _build_parser().parse_args(argv).out
        except UsageError:  # cannot happen after a successful run
            out = None
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
