"""Command-line interface.

Exit codes: 0 success, 2 invalid input geometry or malformed file,
3 verification failure, 4 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from pathlib import Path
from typing import Sequence

from .generate import FAMILIES, generate, scale_to_area
from .interior import DEFAULT_SEED, ConfigError
from .io import InputError, partition_json, polygon_json, read_partition, read_polygon, write_json
from .kernel.polygon import InvalidPolygon, polygon_area, remove_duplicates, snap_ring, validate_polygon
from .model import Kind, Partition
from .pipeline import estimate, partition
from .svg import SCALE, render_svg
from .verify import TOL_SIZE, BoundCheck, VerificationReport, check_structure, verify_pieces

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_CONFIG = 0, 2, 3, 4
AREA_REL = 1e-9


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _kind(text: str, allow_area: bool = True) -> Kind | str:
    if allow_area and text.strip().lower() == "area":
        return "area"
    try:
        return Kind.parse(text)
    except ValueError:
        names = ", ".join((["area"] if allow_area else []) + [k.value for k in Kind])
        raise _Fail(EXIT_CONFIG, f"unknown type {text!r}; choose from {names}")


def _load_ring(path: str, snap: bool = True) -> list:
    try:
        raw = read_polygon(path)
    except InputError as exc:
        raise _Fail(EXIT_INPUT, str(exc))
    if snap:
        raw = snap_ring(raw)
    try:
        ring = validate_polygon(raw, reorient=True)
    except InvalidPolygon as exc:
        raise _Fail(EXIT_INPUT, f"invalid polygon: {exc}")
    if polygon_area(remove_duplicates(raw)) < 0:
        _warn("input polygon is clockwise; reversed to counterclockwise")
    return ring


def _check_config(kind, args) -> None:
    if kind == "area":
        if not args.areas:
            raise _Fail(EXIT_CONFIG, "--type area needs --areas")
    elif args.areas:
        raise _Fail(EXIT_CONFIG, "--areas only applies to --type area")
    if (args.gamma is not None or args.delta is not None) and kind not in (Kind.GEODESIC_DIAMETER, Kind.PERIMETER):
        raise _Fail(EXIT_CONFIG, "--gamma and --delta only apply to geodesic-diameter and perimeter")
    if not (args.bound > 0 and math.isfinite(args.bound)):
        raise _Fail(EXIT_CONFIG, "--bound must be positive")


def _parse_areas(text: str | None) -> list[float] | None:
    if not text:
        return None
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise _Fail(EXIT_CONFIG, f"--areas must be comma-separated numbers, got {text!r}")


def run(ring, kind, *, areas=None, bound=1.0, seed=DEFAULT_SEED, gamma=None, delta=None,
        tol_area=None, tol_size=TOL_SIZE) -> tuple[Partition, VerificationReport]:
    """Partition and verify; raises _Fail on configuration problems."""
    try:
        part = partition(ring, kind, areas=areas, bound=bound, seed=seed, gamma=gamma, delta=delta)
    except ConfigError as exc:
        raise _Fail(EXIT_CONFIG, f"configuration error: {exc}")
    except ValueError as exc:
        if isinstance(exc, InvalidPolygon):
            raise _Fail(EXIT_INPUT, f"invalid polygon: {exc}")
        raise _Fail(EXIT_CONFIG, f"configuration error: {exc}")
    k = None if kind == "area" else kind
    rep = verify_pieces(ring, part.pieces, k, bound=bound, tol_area=tol_area, tol_size=tol_size)
    if k is None:
        worst = max(abs(p.area - p.meta["target_area"]) / p.meta["target_area"] for p in part.pieces)
        rep.bound_checks.append(BoundCheck("relative area error <= 1e-9", worst, AREA_REL, worst <= AREA_REL))
    elif part.boundary is not None:
        rep.bound_checks.extend(check_structure(part.boundary, part.interior, k, total=len(part)))
    return part, rep


def _sizes(part: Partition, rep: VerificationReport) -> list[float]:
    if rep.sizes:
        return [s.measured for s in rep.sizes]
    return [p.area for p in part.pieces]


def _report_dict(part: Partition, rep: VerificationReport) -> dict:
    d = rep.to_dict()
    for key in ("estimate", "boundary_pieces", "interior_pieces", "ibis", "fragments"):
        if key in part.metadata:
            d[key] = part.metadata[key]
    return d


# -- commands --------------------------------------------------------------------

def cmd_partition(args) -> int:
    kind = _kind(args.type)
    _check_config(kind, args)
    areas = _parse_areas(args.areas)
    ring = _load_ring(args.input, not args.no_snap)
    part, rep = run(ring, kind, areas=areas, bound=args.bound, seed=args.seed, gamma=args.gamma,
                    delta=args.delta, tol_area=args.tol_area, tol_size=args.tol_size)
    write_json(partition_json(part, ring, _report_dict(part, rep), _sizes(part, rep)), args.output)
    if args.svg:
        Path(args.svg).write_text(render_svg(part.pieces, ring))
    if not rep.passed:
        print(f"verification failed: {_failure_summary(rep)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _failure_summary(rep: VerificationReport) -> str:
    bits = []
    if not rep.coverage_ok:
        bits.append(f"coverage residual {rep.covered_area_residual:.3g}, overlap {rep.max_pairwise_overlap:.3g}, "
                    f"outside {rep.outside_area:.3g}, malformed {len(rep.malformed)}")
    bad = [s for s in rep.sizes if not s.passed]
    if bad:
        bits.append(f"{len(bad)} pieces over size (worst {max(s.measured for s in bad):.6g})")
    bits += [f"{b.name}: {b.lhs:.6g} > {b.rhs:.6g}" for b in rep.bound_checks if b.enforced and not b.passed]
    return "; ".join(bits)


def cmd_estimate(args) -> int:
    kind = _kind(args.type, allow_area=False)
    args.areas = None
    _check_config(kind, args)
    ring = _load_ring(args.input, not args.no_snap)
    try:
        out = estimate(ring, kind, bound=args.bound, seed=args.seed, gamma=args.gamma, delta=args.delta)
    except ConfigError as exc:
        raise _Fail(EXIT_CONFIG, f"configuration error: {exc}")
    write_json(out, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        part, poly = read_partition(args.partition)
        if args.polygon:
            poly = read_polygon(args.polygon)
    except InputError as exc:
        raise _Fail(EXIT_INPUT, str(exc))
    if poly is None:
        raise _Fail(EXIT_INPUT, "partition file has no polygon; pass --polygon")
    try:
        ring = validate_polygon(poly, reorient=True)
    except InvalidPolygon as exc:
        raise _Fail(EXIT_INPUT, f"invalid polygon: {exc}")
    kind = _kind(args.type or part.kind or "area")
    rep = verify_pieces(ring, part.pieces, None if kind == "area" else kind, bound=args.bound,
                        tol_area=args.tol_area, tol_size=args.tol_size)
    write_json(rep.to_dict(), args.output)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_generate(args) -> int:
    if args.n < 3:
        raise _Fail(EXIT_CONFIG, "n must be at least 3")
    try:
        ring = generate(args.family, args.n, args.seed, args.width, args.height)
    except ValueError as exc:
        raise _Fail(EXIT_CONFIG, str(exc))
    if args.area is not None:
        ring = scale_to_area(ring, args.area)
    write_json(polygon_json(ring), args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        part, poly = read_partition(args.partition)
    except InputError as exc:
        raise _Fail(EXIT_INPUT, str(exc))
    svg = render_svg(part.pieces, poly, args.scale)
    if args.output in (None, "-"):
        sys.stdout.write(svg)
    else:
        Path(args.output).write_text(svg)
    return EXIT_OK


REPORT_FIELDS = ("input", "kind", "vertices", "area", "pieces", "boundary_pieces", "interior_pieces",
                 "estimate", "lower_bound", "max_size", "residual", "overlap", "passed", "seconds")


def cmd_report(args) -> int:
    """Run several kinds over several inputs; write a CSV and PNG figures."""
    from .plotting import plot_counts, plot_partition

    kinds = [_kind(t, allow_area=False) for t in args.types.split(",")]
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for path in args.inputs:
        ring = _load_ring(path)
        stem = Path(path).stem
        for kind in kinds:
            t = time.perf_counter()
            part, rep = run(ring, kind, bound=args.bound, seed=args.seed)
            secs = time.perf_counter() - t
            row = {
                "input": stem, "kind": kind.value, "vertices": len(ring), "area": polygon_area(ring),
                "pieces": len(part), "boundary_pieces": part.metadata["boundary_pieces"],
                "interior_pieces": part.metadata["interior_pieces"], "estimate": part.metadata["estimate"],
                "lower_bound": part.metadata["lower_bound"],
                "max_size": max(s.measured for s in rep.sizes), "residual": rep.covered_area_residual,
                "overlap": rep.max_pairwise_overlap, "passed": rep.passed, "seconds": round(secs, 3),
            }
            rows.append(row)
            plot_partition(part.pieces, ring, out / f"{stem}_{kind.value}.png",
                           f"{stem}, {kind.value}: {len(part)} pieces (lower bound {row['lower_bound']})")
            print(f"{stem:>16} {kind.value:<18} pieces={len(part):<7} passed={rep.passed}", file=sys.stderr)
    with open(out / "report.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=REPORT_FIELDS)
        w.writeheader()
        w.writerows(rows)
    if rows:
        plot_counts(rows, out / "counts.png")
    return EXIT_OK if all(r["passed"] for r in rows) else EXIT_VERIFY


# -- argument parsing ------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bound", type=float, default=1.0, help="size bound (default 1)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="grid offset seed")
    p.add_argument("--gamma", type=float, help="grid cell size (geodesic-diameter and perimeter only)")
    p.add_argument("--delta", type=float, help="fragment length (geodesic-diameter and perimeter only)")
    p.add_argument("--no-snap", action="store_true", help="keep input coordinates as given (default: snap to a 2^-30 grid)")
    p.add_argument("-o", "--output", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polypart", description="Partition simple polygons into size-bounded pieces.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition a polygon and verify the result")
    p.add_argument("input", help='polygon JSON {"polygon": [[x, y], ...]} or - for stdin')
    p.add_argument("--type", required=True, help="area or one of: " + ", ".join(k.value for k in Kind))
    p.add_argument("--areas", help="comma-separated piece areas for --type area")
    p.add_argument("--svg", help="also write an SVG rendering here")
    p.add_argument("--tol-area", type=float, help="absolute area tolerance (default 1e-9 * area)")
    p.add_argument("--tol-size", type=float, default=TOL_SIZE, help="size tolerance (default 1e-6)")
    _add_common(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("estimate", help="piece-count estimate and lower bound")
    p.add_argument("input")
    p.add_argument("--type", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", help="re-verify a partition file")
    p.add_argument("partition")
    p.add_argument("--polygon", help="polygon JSON, if the partition file lacks one")
    p.add_argument("--type", help="override the kind stored in the file")
    p.add_argument("--bound", type=float, default=1.0)
    p.add_argument("--tol-area", type=float)
    p.add_argument("--tol-size", type=float, default=TOL_SIZE)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a test polygon")
    p.add_argument("--family", default="random", choices=FAMILIES)
    p.add_argument("-n", type=int, default=20, help="vertex count (random, star) or size parameter")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=float, default=3.0, help="rect width")
    p.add_argument("--height", type=float, default=1.0, help="rect height")
    p.add_argument("--area", type=float, help="rescale to this area")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("render", help="render a partition file as SVG")
    p.add_argument("partition")
    p.add_argument("--scale", type=float, default=SCALE, help="pixels per unit (default 100)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("report", help="run kinds over inputs, write report.csv and PNG figures")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--types", default=",".join(k.value for k in Kind))
    p.add_argument("--bound", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out-dir", default="report")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
