"""Command-line front end: ``zhat compute|reversed|surgery|radial|params|falsetheta``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .engine import false_theta, zhat_negative_definite, zhat_three_star
from .indefinite import ConeError, zhat_reversed
from .modular import (ASYMPTOTIC_DEGREE, ASYMPTOTIC_GRID, RadialError, radial_extrapolate, report_json,
                      required_order)
from .plumbing import PlumbingError, parse_plumbing, spinc_labels, three_star_params
from .series import QSeries, format_exponent, format_series, series_from_json, series_to_json
from .surgery import (SurgeryError, SurgerySlope, alexander_boundary_check, figure_eight_FK, normalized, parse_knot,
                      surgery_zhat)

EXIT_OK, EXIT_PRECONDITION, EXIT_MISMATCH, EXIT_IO = 0, 2, 3, 4


class Mismatch(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: str | None
    order: Fraction | None
    spinc: int | None
    slope: SurgerySlope | None
    cone: tuple[tuple[int, int], tuple[int, int]] | None
    fmt: str
    precision: int
    jobs: int


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _cone(text: str):
    try:
        c, cp = (tuple(int(x) for x in part.split(",")) for part in text.split(";"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cone must look like '1,0;8,21', got {text!r}") from None
    if len(c) != 2 or len(cp) != 2:
        raise argparse.ArgumentTypeError(f"cone vectors must have two entries: {text!r}")
    return c, cp


def _slope(text: str) -> SurgerySlope:
    try:
        return SurgerySlope.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(t) for t in text.split(",") if t.strip())


def _resolve(path: str) -> Path:
    """A path on disk, or the name of a file shipped with the package."""
    p = Path(path)
    if p.exists():
        return p
    shipped = resources.files("zhat") / "data" / p.name
    if shipped.is_file():
        return Path(str(shipped))
    raise FileNotFoundError(f"no such file: {path}")


def _load_graph(path: str | None):
    if path is None:
        raise PlumbingError("--graph is required")
    return parse_plumbing(_resolve(path).read_text())


def _document_cone(path: str):
    """Cone vectors from an ``"indefinite"`` block of the graph file, else the defaults."""
    obj = json.loads(_resolve(path).read_text())
    block = obj.get("indefinite") or {}
    return tuple(block.get("c", (1, 0))), tuple(block.get("cprime", (8, 21)))


def _series_table(s: QSeries) -> list[list[str]]:
    return [[format_exponent(e), format_exponent(c)] for e, c in s.items()]


def _emit_series(s: QSeries, fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        obj = {"series": series_to_json(s)}
        obj.update(extra or {})
        return json.dumps(obj, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["exponent", "coefficient"])
        w.writerows(_series_table(s))
        return buf.getvalue().rstrip("\n")
    return format_series(s)


def _default_order(cfg: RunConfig, fallback) -> Fraction:
    order = cfg.order if cfg.order is not None else Fraction(fallback)
    if order <= 0:
        raise ValueError("order must be positive")
    return order


def cmd_zhat(cfg: RunConfig, args) -> list[str]:
    g = _load_graph(cfg.graph)
    order = _default_order(cfg, 10)
    label = None
    if cfg.spinc is not None:
        labels = spinc_labels(g)
        if not 0 <= cfg.spinc < len(labels):
            raise PlumbingError(f"spinc index {cfg.spinc} out of range (0..{len(labels) - 1})")
        label = labels[cfg.spinc]
    s = zhat_negative_definite(g, label, order, jobs=cfg.jobs)
    out = [_emit_series(s, cfg.fmt)]
    if args.cross_check:
        other = zhat_three_star(g, order)
        diff = s.first_difference(other)
        if diff is not None:
            raise Mismatch(f"engines differ at q^{format_exponent(diff)}")
        out.append(f"engines agree to q^{format_exponent(order)}")
    return out


def _surgery_reference(args) -> tuple[QSeries, Fraction | None]:
    knot = parse_knot(_resolve(args.knot).read_text()) if args.knot else figure_eight_FK()
    slope = args.slope or SurgerySlope(-1, 1)
    return surgery_zhat(knot, slope, args.a)


def cmd_reversed(cfg: RunConfig, args) -> list[str]:
    g = _load_graph(cfg.graph)
    three_star_params(g)
    order = _default_order(cfg, 12)
    c, cp = cfg.cone if cfg.cone is not None else _document_cone(cfg.graph)
    s = zhat_reversed(g, order, c, cp, literal=args.literal)
    out = [_emit_series(s, cfg.fmt)]
    if args.against_surgery:
        raw, guaranteed = _surgery_reference(args)
        e1, s1, n1 = normalized(s)
        e2, s2, n2 = normalized(raw)
        # compare normalized series strictly below q^order
        bound = order
        for ser in (n1, n2):
            if ser.order is not None:
                bound = min(bound, ser.order)
        if guaranteed is not None:
            bound = min(bound, guaranteed - e2)
        a, b = n1.truncate(bound), n2.truncate(bound)
        diff = a.first_difference(b)
        if diff is not None:
            raise Mismatch(f"series differ at q^{format_exponent(diff)} after normalization")
        last = max((e for e in a.exponents() if e < bound), default=Fraction(0))
        sign = s1 * s2
        out.append(f"match through q^{format_exponent(last)} (sign {'+1' if sign > 0 else '-1'})")
    return out


def cmd_surgery(cfg: RunConfig, args) -> list[str]:
    knot = parse_knot(_resolve(args.knot).read_text()) if args.knot else figure_eight_FK()
    if cfg.slope is None:
        raise SurgeryError("--slope is required")
    raw, guaranteed = surgery_zhat(knot, cfg.slope, args.a, cfg.order)
    extra = {"guaranteed_order": None if guaranteed is None else format_exponent(guaranteed),
             "knot": knot.name, "slope": str(cfg.slope)}
    out = [_emit_series(raw, cfg.fmt, extra)]
    if cfg.fmt == "plain":
        out.append("guaranteed order: " + ("exact" if guaranteed is None else f"q^{format_exponent(guaranteed)}"))
    if args.cross_check and knot.alexander is not None:
        rep = alexander_boundary_check(knot)
        if not rep.passed:
            raise Mismatch("Alexander boundary check failed at x^" + format_exponent(rep.mismatches()[0]))
        out.append("Alexander boundary check passed")
    return out


def _load_series(text: str) -> QSeries:
    if not text.lstrip().startswith("{"):
        text = _resolve(text).read_text()
    obj = json.loads(text)
    return series_from_json(obj.get("series", obj))


def cmd_radial(cfg: RunConfig, args) -> list[str]:
    grid = args.tgrid if args.tgrid is not None else ASYMPTOTIC_GRID
    degree = args.degree if args.degree is not None else (ASYMPTOTIC_DEGREE if args.tgrid is None else 3)
    if args.series:
        s = _load_series(args.series)
    else:
        g = _load_graph(cfg.graph)
        order = cfg.order if cfg.order is not None else Fraction(required_order(grid, cfg.precision))
        s = zhat_three_star(g, order)
    rep = radial_extrapolate(s, args.x, grid, cfg.precision, degree)
    if cfg.fmt == "json":
        return [report_json(rep.to_json())]
    if cfg.fmt == "csv":
        return [rep.to_csv().rstrip("\n")]
    import mpmath
    lines = [f"x = {rep.x}"]
    for row in rep.rows():
        lines.append(f"t = {row[0]}: {row[1]} + {row[2]}i")
    if rep.extrapolant is not None:
        ext = rep.extrapolant
        lines.append(f"extrapolant: {mpmath.nstr(mpmath.re(ext), 30)} + {mpmath.nstr(mpmath.im(ext), 30)}i")
        lines.append(f"error estimate: {mpmath.nstr(rep.error_estimate, 6)}")
    return lines


def cmd_params(cfg: RunConfig, args) -> list[str]:
    g = _load_graph(cfg.graph)
    d = three_star_params(g)
    obj = {
        "m": format_exponent(d.m),
        "b": [format_exponent(x) for x in d.b],
        "4c": [format_exponent(4 * x) for x in d.c],
        "d": format_exponent(d.d),
        "prefactor_exponent": format_exponent(d.prefactor_exponent),
        "sign": d.sign,
        "signature": d.inertia.signature,
        "vertex_order": list(d.order),
    }
    if cfg.fmt == "json":
        return [json.dumps(obj, sort_keys=True)]
    if cfg.fmt == "csv":
        return ["j,b,4c"] + [f"{j},{b},{c}" for j, (b, c) in enumerate(zip(obj["b"], obj["4c"]))]
    return [f"{k} = {', '.join(map(str, v)) if isinstance(v, list) else v}" for k, v in obj.items()]


def cmd_falsetheta(cfg: RunConfig, args) -> list[str]:
    if args.m is None or args.r is None:
        raise ValueError("--m and --r are required")
    order = _default_order(cfg, 10)
    return [_emit_series(false_theta(args.m, args.r, order).series, cfg.fmt)]


COMMANDS = {
    "compute": cmd_zhat,
    "reversed": cmd_reversed,
    "surgery": cmd_surgery,
    "radial": cmd_radial,
    "params": cmd_params,
    "falsetheta": cmd_falsetheta,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zhat", description="q-series invariants of plumbed three-manifolds")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--graph")
        p.add_argument("--order", type=_fraction)
        p.add_argument("--spinc", type=int)
        p.add_argument("--slope", type=_slope)
        p.add_argument("--cone", type=_cone)
        p.add_argument("--format", dest="fmt", choices=("json", "csv", "plain"), default="plain")
        p.add_argument("--precision", type=int, default=128)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--cross-check", action="store_true")
        p.add_argument("--against-surgery", action="store_true")
        p.add_argument("--knot", help="knot series JSON (default: figure-eight)")
        p.add_argument("--a", type=int, default=0, help="surgery label")
        p.add_argument("--literal", action="store_true", help="reversed: skip the overall sign flip")
        p.add_argument("--x", type=_fraction, default=Fraction(0))
        p.add_argument("--tgrid", type=_grid)
        p.add_argument("--degree", type=int)
        p.add_argument("--series", help="series JSON file or text")
        p.add_argument("--m", type=int)
        p.add_argument("--r", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        if args.jobs < 1:
            raise ValueError("jobs must be at least 1")
        cfg = RunConfig(args.command, args.graph, args.order, args.spinc, args.slope, args.cone,
                        args.fmt, args.precision, args.jobs)
        lines = COMMANDS[args.command](cfg, args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO
    except Mismatch as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (PlumbingError, ConeError, SurgeryError, RadialError, ValueError, KeyError) as exc:
        reason = exc.args[0] if exc.args else type(exc).__name__
        print(f"error: {reason}", file=sys.stderr)
        return EXIT_PRECONDITION
    for line in lines:
        print(line)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
