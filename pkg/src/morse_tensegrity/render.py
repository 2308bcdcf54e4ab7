"""SVG figures: level sets, force lines, critical points and stresses."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .field import ScalarField
from .forcelines import DEFAULT_RESOLUTION, force_line, grid_axes, trace_zero_set
from .morse import Scene, critical_sets, self_stress_basis

WIDTH = 640.0
LEVEL_STYLE = 'fill="none" stroke="#a8a8a8" stroke-width="0.6"'
COMPACT_STYLE = 'fill="none" stroke="#000000" stroke-width="1.6"'
OPEN_STYLE = 'fill="none" stroke="#c8c8c8" stroke-width="1" stroke-dasharray="4 3"'


class _Canvas:
    def __init__(self, bbox):
        self.box = bbox
        self.width = WIDTH
        self.height = round(WIDTH * bbox.height / bbox.width, 2)

    def xy(self, x, y):
        sx = (x - self.box.xmin) / self.box.width * self.width
        sy = (self.box.ymax - y) / self.box.height * self.height
        return min(max(sx, 0.0), self.width), min(max(sy, 0.0), self.height)

    def path(self, points, closed=False):
        coords = []
        for x, y in points:
            c = "%.2f %.2f" % self.xy(x, y)
            if not coords or coords[-1] != c:
                coords.append(c)
        if len(coords) < 2:
            return None
        d = "M " + " L ".join(coords) + (" Z" if closed else "")
        return d


def level_values(f: ScalarField, xs, ys, levels: int):
    """``levels`` distinct quantiles of ``f`` sampled on the grid."""
    if levels <= 0:
        return []
    vals = f.grid(xs, ys)
    qs = np.quantile(vals, [(k + 1) / (levels + 1) for k in range(levels)])
    out = []
    for q in qs:
        if not out or q > out[-1]:
            out.append(float(q))
    return out


def _label_position(fl, crit, edge):
    compact = fl.compact_components
    if compact:
        best = max(compact, key=lambda c: c.polyline.length())
        return best.polyline.midpoint()
    ci, cj = crit[edge[0]], crit[edge[1]]
    if not ci or not cj:
        return None
    pairs = [(np.hypot(a.x - b.x, a.y - b.y), a, b) for a in ci for b in cj]
    _, a, b = min(pairs, key=lambda t: t[0])
    return ((a.x + b.x) / 2, (a.y + b.y) / 2)


def render_svg(scene: Scene, levels: int = 8, grid: int = DEFAULT_RESOLUTION,
               stress_labels: bool = False) -> str:
    box = scene.bbox
    canvas = _Canvas(box)
    xs, ys = grid_axes(box, grid)
    crit = critical_sets(scene)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{canvas.width:g}" height="{canvas.height:g}" '
        f'viewBox="0 0 {canvas.width:g} {canvas.height:g}">',
        f'<rect x="0" y="0" width="{canvas.width:g}" height="{canvas.height:g}" fill="#ffffff"/>',
        f'<g id="level-sets" {LEVEL_STYLE}>',
    ]
    for v in scene.graph.vertex_ids:
        f = scene.fields[v]
        for c in level_values(f, xs, ys, levels):
            h = f - c
            if h.is_zero:
                continue
            for pl in trace_zero_set(h, box, grid):
                d = canvas.path(pl.points, pl.closed)
                if d:
                    out.append(f'<path d="{d}"/>')
    out.append("</g>")

    lines = {}
    out.append('<g id="force-lines">')
    for e in scene.graph.edges:
        fl = force_line(e, scene.fields[e[0]], scene.fields[e[1]], box,
                        crit[e[0]], crit[e[1]], resolution=grid)
        lines[e] = fl
        for comp in fl.components:
            d = canvas.path(comp.polyline.points, comp.polyline.closed)
            if d:
                style = COMPACT_STYLE if comp.compact else OPEN_STYLE
                out.append(f'<path d="{d}" {style}/>')
    out.append("</g>")

    out.append('<g id="critical-points" font-family="sans-serif" font-size="12">')
    for v in scene.graph.vertex_ids:
        many = len(crit[v]) > 1
        for k, cp in enumerate(crit[v]):
            x, y = canvas.xy(cp.x, cp.y)
            label = escape(str(v).upper() + (str(k + 1) if many else ""))
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="#000000"/>')
            tx = min(x + 4, canvas.width - 10)
            ty = max(y - 4, 12)
            out.append(f'<text x="{tx:.2f}" y="{ty:.2f}">{label}</text>')
    out.append("</g>")

    if stress_labels and scene.graph.edges:
        basis = self_stress_basis(scene)
        if basis.dimension:
            w = basis.vectors[0] / np.max(np.abs(basis.vectors[0]))
            out.append('<g id="stresses" font-family="sans-serif" font-size="11" fill="#202020">')
            for k, e in enumerate(scene.graph.edges):
                pos = _label_position(lines[e], crit, e)
                if pos is None:
                    continue
                x, y = canvas.xy(*pos)
                x = min(max(x, 4.0), canvas.width - 30)
                y = min(max(y, 12.0), canvas.height - 4)
                val = 0.0 if abs(w[k]) < 5e-13 else w[k]
                out.append(f'<text x="{x:.2f}" y="{y:.2f}">{val:.3g}</text>')
            out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"
