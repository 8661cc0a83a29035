"""Command-line front end.

Subcommands: ``qfim``, ``scan``, ``avg-fisher``, ``compare``, ``poles`` and
``selfcheck``. Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import analysis
from ._validation import TWO_PI
from .errors import NumericalError
from .kspace import classify_region, poles
from .qfim import asymptotic_qfim, closed_form_qfim, finite_time_qfim
from .walk import WalkSpec, oracle_qfim

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
MAX_STEPS = 10_000


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _angle(args, value: float, name: str) -> float:
    if value is None:
        raise UsageError(f"--{name} is required")
    if args.deg:
        value = math.radians(value)
    if not (math.isfinite(value) and 0.0 <= value < TWO_PI):
        raise UsageError(f"--{name} must lie in [0, 2*pi) radians, got {value!r}")
    return value


def _range(args, text: str, name: str) -> tuple[float, float]:
    try:
        a, b = (float(p) for p in text.split(":"))
    except ValueError:
        raise UsageError(f"--{name} must look like a:b, got {text!r}") from None
    if args.deg:
        a, b = math.radians(a), math.radians(b)
    for v in (a, b):
        if not (math.isfinite(v) and 0.0 <= v <= TWO_PI):
            raise UsageError(f"--{name} endpoints must lie in [0, 2*pi], got {text!r}")
    return a, b


def _grid_counts(text: str) -> tuple[int, int]:
    try:
        n1, n2 = (int(p) for p in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--grid must look like N1xN2, got {text!r}") from None
    if n1 < 2 or n2 < 2:
        raise UsageError("--grid counts must be at least 2")
    if n1 * n2 > analysis.MAX_CELLS:
        raise UsageError(f"--grid exceeds {analysis.MAX_CELLS} cells")
    return n1, n2


def _bloch(args) -> tuple[float, float, float]:
    r2 = args.r2
    if not abs(r2) <= 1.0:
        raise UsageError(f"|--r2| must not exceed 1, got {r2!r}")
    if args.r1 is None and args.r3 is None:
        # pure state with the requested r2 and r1 = 0
        return (0.0, r2, math.sqrt(max(0.0, 1.0 - r2 * r2)))
    r1 = args.r1 or 0.0
    r3 = args.r3 if args.r3 is not None else math.sqrt(max(0.0, 1.0 - r1 * r1 - r2 * r2))
    if r1 * r1 + r2 * r2 + r3 * r3 > 1.0 + 1e-9:
        raise UsageError("Bloch vector longer than 1")
    return (r1, r2, r3)


def _steps(args) -> int:
    if args.t is None:
        raise UsageError(f"--t is required for --method {args.method}")
    if not 1 <= args.t <= MAX_STEPS:
        raise UsageError(f"--t must lie in [1, {MAX_STEPS}]")
    return args.t


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ssqw-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _render_mapping(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d) + "\n"
    if fmt == "csv":
        return _rows_csv(list(d), [list(d.values())])
    return "".join(f"{k} {_fmt(v)}\n" for k, v in d.items())


def cmd_qfim(args) -> int:
    t1 = _angle(args, args.theta1, "theta1")
    t2 = _angle(args, args.theta2, "theta2")
    r = _bloch(args)
    method = args.method
    if method == "closed":
        res = closed_form_qfim(t1, t2, r[1])
    elif method == "asymptotic":
        res = asymptotic_qfim(t1, t2, r)
    elif method == "finite":
        res = finite_time_qfim(t1, t2, r, _steps(args))
    else:
        res = oracle_qfim(WalkSpec(t1, t2, _steps(args), r))
    d = res.to_dict()
    if args.format == "json":
        text = json.dumps(d) + "\n"
    else:
        keys = list(d)
        text = _rows_csv(keys, [[";".join(d[k]) if k == "flags" else d[k] for k in keys]])
    _emit(text, args.out)
    return 0


def cmd_scan(args) -> int:
    n1, n2 = _grid_counts(args.grid)
    a1 = _range(args, args.range1, "range1")
    a2 = _range(args, args.range2, "range2")
    if not abs(args.r2) <= 1.0:
        raise UsageError("|--r2| must not exceed 1")
    quantity = args.quantity
    method = args.method
    if quantity == "incompat" and method not in ("finite", "oracle"):
        raise UsageError("--quantity incompat needs --method finite or oracle")
    t = _steps(args) if method in ("finite", "oracle") else None
    grid = analysis.ScanGrid((*a1, n1), (*a2, n2), quantity, args.r2)
    t1, t2, values = analysis.scan(grid, method, t=t, r=_bloch(args))
    rows = []
    for x, y, v in zip(t1, t2, values):
        region = classify_region(float(x), float(y))
        rows.append((float(x), float(y), quantity, float(v), region.value, region.winding))
    header = ["theta1", "theta2", "quantity", "value", "region", "winding"]
    if args.format == "json":
        text = json.dumps([dict(zip(header, row)) for row in rows]) + "\n"
    else:
        text = _rows_csv(header, rows)
    _emit(text, args.out)
    return 0


def cmd_avg_fisher(args) -> int:
    t2 = _angle(args, args.theta2, "theta2")
    closed = analysis.avg_fisher_ssqw(t2, "closed")
    numeric = analysis.avg_fisher_ssqw(t2, "numeric")
    d = {"theta2": t2, "closed": closed, "numeric": numeric, "difference": numeric - closed,
         "oqw": analysis.avg_fisher_oqw()}
    _emit(_render_mapping(d, args.format), args.out)
    return 0


def cmd_compare(args) -> int:
    eta = analysis.crossing_eta()
    if args.eta:
        d = {"eta": eta}
    else:
        t1 = _angle(args, args.theta1, "theta1")
        t2 = _angle(args, args.theta2, "theta2")
        om = float(analysis.omega_ssqw(t1, t2, args.r2))
        oq = float(analysis.omega_oqw(t1))
        d = {
            "omega_ssqw": om,
            "omega_oqw": oq,
            "omega_min_ssqw": float(analysis.omega_min_ssqw(t1)),
            "advantage": om - oq,
            "eta": eta,
        }
    _emit(_render_mapping(d, args.format), args.out)
    return 0


def cmd_poles(args) -> int:
    t1 = _angle(args, args.theta1, "theta1")
    t2 = _angle(args, args.theta2, "theta2")
    ps = poles(t1, t2)
    items = [
        {"name": f"z{i + 1}", "re": z.real, "im": z.imag, "abs": abs(z), "inside": inside}
        for i, (z, inside) in enumerate(zip(ps.as_tuple(), ps.inside))
    ]
    if args.format == "json":
        text = json.dumps({"poles": items, "n_inside": sum(ps.inside)}) + "\n"
    elif args.format == "csv":
        text = _rows_csv(list(items[0]), [list(it.values()) for it in items])
    else:
        text = "".join(
            f"{it['name']} {_fmt(it['re'])} {_fmt(it['im'])} "
            f"{'inside' if it['inside'] else 'outside'}\n"
            for it in items
        )
    _emit(text, args.out)
    return 0


def _selfchecks():
    rng = np.random.default_rng(2024)
    r = rng.normal(size=3)
    r /= np.linalg.norm(r)
    a = finite_time_qfim(2.1, 0.7, r, 12)
    b = oracle_qfim(WalkSpec(2.1, 0.7, 12, r))
    yield "finite-time vs position oracle", max(
        np.abs(a.fisher - b.fisher).max(), np.abs(a.uhlmann - b.uhlmann).max()
    ) < 1e-8

    from .kspace import a_k_super, projector_A1, projector_closed_form, u_k
    from .pauli import conjugation_superop

    k = np.linspace(-3.0, 3.0, 31)
    yield "super-operator vs conjugation", np.abs(
        a_k_super(1.3, 4.1, k) - conjugation_superop(u_k(1.3, 4.1, k))
    ).max() < 1e-12
    p = projector_A1(1.3, 4.1, k)
    yield "projector idempotent and explicit", (
        np.abs(p @ p - p).max() < 1e-10
        and np.abs(p - projector_closed_form(1.3, 4.1, k)).max() < 1e-10
    )
    c = closed_form_qfim(1.0, 2.5, 0.5).fisher
    s = asymptotic_qfim(1.0, 2.5, (0.0, 0.5, math.sqrt(0.75))).fisher
    yield "asymptotic vs closed form", np.abs(c - s).max() < 1e-8
    yield "golden-ratio root", abs(analysis.golden_root() - (math.sqrt(5) - 1) / 2) < 1e-9
    yield "precision ratio", abs(analysis.precision_ratio() - 1 / (1 - 2 / math.pi)) < 1e-4


def cmd_selfcheck(args) -> int:
    ok = True
    for name, passed in _selfchecks():
        ok &= bool(passed)
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
    return 0 if ok else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--deg", action="store_true", help="angles are given in degrees")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--theta1", type=float)
    point.add_argument("--theta2", type=float)

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--r1", type=float)
    state.add_argument("--r2", type=float, default=0.0)
    state.add_argument("--r3", type=float)
    state.add_argument("--t", type=int)
    state.add_argument("--method", choices=analysis.METHODS, default="closed")

    parser = argparse.ArgumentParser(
        prog="ssqw", description="Quantum Fisher information of split-step quantum walks."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qfim", parents=[common, point, state], help="Fisher matrix at one point")
    p.set_defaults(func=cmd_qfim, default_format="json")

    p = sub.add_parser("scan", parents=[common, state], help="grid scan to CSV")
    p.add_argument("--quantity", choices=analysis.QUANTITIES, default="f11")
    p.add_argument("--grid", default="101x101", metavar="N1xN2")
    p.add_argument("--range1", default=f"0:{TWO_PI!r}", metavar="a:b")
    p.add_argument("--range2", default=f"0:{TWO_PI!r}", metavar="a:b")
    p.set_defaults(func=cmd_scan, default_format="csv")

    p = sub.add_parser("avg-fisher", parents=[common], help="theta1-averaged F11")
    p.add_argument("--theta2", type=float)
    p.set_defaults(func=cmd_avg_fisher, default_format="text")

    p = sub.add_parser("compare", parents=[common, point], help="precision products")
    p.add_argument("--r2", type=float, default=0.0)
    p.add_argument("--eta", action="store_true", help="print only the crossover angle")
    p.set_defaults(func=cmd_compare, default_format="text")

    p = sub.add_parser("poles", parents=[common, point], help="poles of the projector integrand")
    p.set_defaults(func=cmd_poles, default_format="text")

    p = sub.add_parser("selfcheck", help="quick internal consistency checks")
    p.set_defaults(func=cmd_selfcheck, default_format="text", out=None, deg=False, format=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ssqw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"ssqw: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"ssqw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
