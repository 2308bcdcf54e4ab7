"""Command line interface.

Exit codes: 0 success, 2 invalid input document, 3 numerical failure
(non-Morse field, no critical points, ...), 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import classical, morse
from .documents import dumps, parse_document
from .errors import NumericError, ValidationError
from .forcelines import DEFAULT_RESOLUTION, force_line
from .linalg import RANK_TOL
from .render import render_svg

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

CSV_HEADER = ["edge", "component", "point_index", "x", "y", "start_tag", "end_tag"]


def edge_label(e):
    return f"{e[0]}-{e[1]}"


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_scene(path):
    doc = parse_document(_read(path))
    if isinstance(doc, classical.ClassicalFramework):
        return morse.paraboloid_lift(doc)
    return doc


def format_report(mode, edges, vectors) -> str:
    """Dimension line followed by each basis vector scaled to max |entry| = 1."""
    lines = [f"mode: {mode}", f"edges: {len(edges)}", f"dimension: {len(vectors)}"]
    for n, vec in enumerate(vectors, start=1):
        v = np.asarray(vec, dtype=float)
        v = v / np.max(np.abs(v))
        lines.append(f"vector {n}:")
        for e, w in zip(edges, v):
            w = 0.0 if abs(w) < 5e-13 else w
            lines.append(f"  {edge_label(e)}: {w:.12g}")
    return "\n".join(lines) + "\n"


def cmd_selfstress(args) -> str:
    doc = parse_document(_read(args.path))
    if args.mode == "classical":
        if not isinstance(doc, classical.ClassicalFramework):
            raise ValidationError("--classical needs a framework document (vertices with x, y)")
        if args.per_critical_point:
            raise ValidationError("--per-critical-point applies to --morse only")
        basis = classical.self_stress_basis(doc, args.tol)
        vectors = list(basis.vectors)
        if args.unit_vectors:
            vectors = [classical.to_unit_convention(doc, w).values for w in basis]
        return format_report("classical", basis.edges, vectors)
    if args.unit_vectors:
        raise ValidationError("--unit-vectors applies to --classical only")
    scene = morse.paraboloid_lift(doc) if isinstance(doc, classical.ClassicalFramework) else doc
    basis = morse.self_stress_basis(scene, args.per_critical_point, args.tol)
    mode = "morse-per-critical-point" if args.per_critical_point else "morse"
    return format_report(mode, basis.edges, list(basis.vectors))


def forcelines_csv(scene, grid) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    crit = morse.critical_sets(scene)
    for e in scene.graph.edges:
        fl = force_line(e, scene.fields[e[0]], scene.fields[e[1]], scene.bbox,
                        crit[e[0]], crit[e[1]], resolution=grid)
        if fl.degenerate:
            writer.writerow([edge_label(e), "", "", "", "", "degenerate", "degenerate"])
            continue
        for c, comp in enumerate(fl.components):
            for k, (x, y) in enumerate(comp.polyline.points):
                writer.writerow([edge_label(e), c, k, repr(float(x)), repr(float(y)),
                                 str(comp.start), str(comp.end)])
    return buf.getvalue()


def cmd_forcelines(args) -> str:
    scene = _load_scene(args.path)
    grid = args.grid or (scene.render or {}).get("grid", DEFAULT_RESOLUTION)
    return forcelines_csv(scene, grid)


def cmd_render(args) -> str:
    scene = _load_scene(args.path)
    opts = scene.render or {}
    grid = args.grid or opts.get("grid", DEFAULT_RESOLUTION)
    levels = args.levels if args.levels is not None else opts.get("levels", 8)
    return render_svg(scene, levels=levels, grid=grid, stress_labels=args.stress_labels)


def cmd_lift(args) -> str:
    doc = parse_document(_read(args.path))
    if not isinstance(doc, classical.ClassicalFramework):
        raise ValidationError("lift needs a framework document (vertices with x, y)")
    return dumps(morse.paraboloid_lift(doc))


def _grid(text):
    n = int(text)
    if n < 8:
        raise argparse.ArgumentTypeError("grid must be at least 8")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morse-tensegrity",
        description="Self-stresses of point and function tensegrities, and their lines of forces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("selfstress", help="print the self-stress space")
    p.add_argument("path")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--classical", dest="mode", action="store_const", const="classical")
    mode.add_argument("--morse", dest="mode", action="store_const", const="morse")
    p.add_argument("--per-critical-point", action="store_true",
                   help="one equilibrium condition per critical point instead of the signed sum")
    p.add_argument("--tol", type=float, default=RANK_TOL, help="relative rank tolerance")
    p.add_argument("--unit-vectors", action="store_true",
                   help="report classical stresses per unit edge direction")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_selfstress, mode="morse")

    p = sub.add_parser("forcelines", help="write force-line polylines as CSV")
    p.add_argument("path")
    p.add_argument("--grid", type=_grid, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_forcelines)

    p = sub.add_parser("render", help="draw level sets, force lines and stresses as SVG")
    p.add_argument("path")
    p.add_argument("--out", default=None)
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--grid", type=_grid, default=None)
    p.add_argument("--stress-labels", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("lift", help="turn a framework into a scene of paraboloids")
    p.add_argument("path")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lift)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
        _write(args.out, text)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
