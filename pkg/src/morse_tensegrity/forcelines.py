"""Lines of forces: zero sets of ``df_i ^ df_j``.

The zero set is extracted with marching squares and chained into
polylines; :func:`classify` then cuts the polylines at critical points so
that bounded pieces joining two critical points can be told apart from
pieces running off the box.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, NamedTuple, Sequence, Union

import numpy as np

from .errors import IdenticallyZeroField
from .field import BBox, CriticalPoint, Point2, ScalarField, gradient

BOUNDARY = "boundary"
CLOSED = "closed"
DEFAULT_RESOLUTION = 512


class CriticalPointRef(NamedTuple):
    vertex: Hashable
    index: int

    def __str__(self):
        return f"cp:{self.vertex}:{self.index}"


Tag = Union[CriticalPointRef, str]


@dataclass(frozen=True)
class Polyline:
    points: tuple
    closed: bool = False

    def __post_init__(self):
        pts = tuple(Point2(float(x), float(y)) for x, y in self.points)
        if len(pts) < 2:
            raise ValueError("a polyline needs at least two points")
        object.__setattr__(self, "points", pts)

    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=float)

    def length(self) -> float:
        a = self.array()
        if self.closed:
            a = np.vstack([a, a[:1]])
        return float(np.sum(np.hypot(*np.diff(a, axis=0).T)))

    def midpoint(self) -> Point2:
        """Point halfway along the arc length."""
        a = self.array()
        if self.closed:
            a = np.vstack([a, a[:1]])
        seg = np.hypot(*np.diff(a, axis=0).T)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        half = cum[-1] / 2
        k = min(int(np.searchsorted(cum, half, side="right")) - 1, len(seg) - 1)
        t = 0.0 if seg[k] == 0 else (half - cum[k]) / seg[k]
        p = a[k] + t * (a[k + 1] - a[k])
        return Point2(float(p[0]), float(p[1]))


class Component(NamedTuple):
    polyline: Polyline
    start: Tag
    end: Tag

    @property
    def compact(self) -> bool:
        if self.start == CLOSED:
            return True
        return isinstance(self.start, CriticalPointRef) and isinstance(self.end, CriticalPointRef)


@dataclass(frozen=True)
class ForceLine:
    edge: tuple
    components: tuple = ()
    degenerate: bool = False

    @property
    def compact_components(self) -> list[Component]:
        return [c for c in self.components if c.compact]


def jacobian_field(f: ScalarField, g: ScalarField) -> ScalarField:
    """``f_x g_y - f_y g_x``, the coefficient of ``dx^dy`` in ``df ^ dg``."""
    fx, fy = gradient(f)
    gx, gy = gradient(g)
    parts = defaultdict(list)
    for a, b, sign in ((fx, gy, 1.0), (fy, gx, -1.0)):
        for (i1, j1), c1 in a.terms.items():
            for (i2, j2), c2 in b.terms.items():
                parts[(i1 + i2, j1 + j2)].append(sign * c1 * c2)
    # fsum is exactly rounded, so swapping f and g negates every coefficient
    return ScalarField({k: math.fsum(v) for k, v in parts.items()})


def grid_axes(bbox, resolution: int):
    box = BBox(*map(float, bbox))
    return (np.linspace(box.xmin, box.xmax, resolution),
            np.linspace(box.ymin, box.ymax, resolution))


def cell_diagonal(bbox, resolution: int) -> float:
    box = BBox(*map(float, bbox))
    return float(np.hypot(box.width, box.height) / (resolution - 1))


# corner order: 0=(i,j) 1=(i+1,j) 2=(i+1,j+1) 3=(i,j+1)
# side order:   0=bottom 1=right 2=top 3=left; side s joins corners s and s+1
_SIDE_CORNERS = ((0, 1), (1, 2), (3, 2), (0, 3))


def _crossing(values, xs, ys, i, j, side):
    """Key and location of the zero crossing on one side of cell (i, j)."""
    corners = ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))
    ca, cb = (corners[c] for c in _SIDE_CORNERS[side])
    va, vb = values[ca[1], ca[0]], values[cb[1], cb[0]]
    t = va / (va - vb)
    if t <= 0.0:
        return ("n", ca[0], ca[1]), (xs[ca[0]], ys[ca[1]])
    if t >= 1.0:
        return ("n", cb[0], cb[1]), (xs[cb[0]], ys[cb[1]])
    p = (xs[ca[0]] + t * (xs[cb[0]] - xs[ca[0]]), ys[ca[1]] + t * (ys[cb[1]] - ys[ca[1]]))
    if side in (0, 2):
        return ("h", ca[0], ca[1]), p
    return ("v", ca[0], ca[1]), p


def marching_segments(h: ScalarField, xs, ys):
    """Zero-crossing segments as ``(key_a, key_b) -> (point_a, point_b)``.

    Samples with value exactly zero count as positive; a crossing that
    lands on a sample is keyed by that sample so curves through grid nodes
    stay connected.  Saddle cells are resolved with ``h`` at the centre.
    """
    values = h.grid(xs, ys)
    pos = values >= 0
    case = (pos[:-1, :-1].astype(np.uint8)
            | pos[:-1, 1:] << 1
            | pos[1:, 1:] << 2
            | pos[1:, :-1] << 3)
    jj, ii = np.nonzero((case != 0) & (case != 15))
    segments = {}
    for j, i in zip(jj.tolist(), ii.tolist()):
        c = int(case[j, i])
        bits = [(c >> k) & 1 for k in range(4)]
        sides = [s for s, (a, b) in enumerate(_SIDE_CORNERS) if bits[a] != bits[b]]
        if len(sides) == 2:
            pairs = [tuple(sides)]
        else:
            centre = h(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))
            if (centre >= 0) == bool(bits[0]):
                # corners 0 and 2 are joined through the centre; cut off 1 and 3
                pairs = [(0, 1), (2, 3)]
            else:
                pairs = [(3, 0), (1, 2)]
        for sa, sb in pairs:
            ka, pa = _crossing(values, xs, ys, i, j, sa)
            kb, pb = _crossing(values, xs, ys, i, j, sb)
            if ka == kb:
                continue
            key = (ka, kb) if ka < kb else (kb, ka)
            if key not in segments:
                segments[key] = (pa, pb) if ka < kb else (pb, pa)
    return segments


def _chain(segments):
    adj = defaultdict(list)
    where = {}
    for (ka, kb), (pa, pb) in segments.items():
        adj[ka].append(kb)
        adj[kb].append(ka)
        where[ka], where[kb] = pa, pb
    for k in adj:
        adj[k].sort()
    used = set()

    def walk(start, nxt):
        path = [start]
        prev, cur = start, nxt
        used.add(frozenset((prev, cur)))
        while True:
            path.append(cur)
            if len(adj[cur]) != 2:
                return path, False
            a, b = adj[cur]
            step = b if a == prev else a
            e = frozenset((cur, step))
            if e in used:
                return path, cur == start
            used.add(e)
            prev, cur = cur, step

    chains = []
    for k in sorted(adj):
        if len(adj[k]) == 2:
            continue
        for n in adj[k]:
            if frozenset((k, n)) not in used:
                chains.append(walk(k, n))
    for k in sorted(adj):
        for n in adj[k]:
            if frozenset((k, n)) not in used:
                path, closed = walk(k, n)
                if closed and path[-1] == path[0]:
                    path = path[:-1]
                chains.append((path, closed))

    out = []
    for keys, closed in chains:
        pts = []
        for key in keys:
            p = where[key]
            if not pts or pts[-1] != p:
                pts.append(p)
        if closed and len(pts) > 1 and pts[0] == pts[-1]:
            pts.pop()
        if len(pts) < 2 or (closed and len(pts) < 3):
            continue
        out.append(_canonical(pts, closed))
    out.sort(key=lambda pl: (pl.points[0], pl.points[-1], len(pl.points)))
    return out


def _canonical(pts, closed):
    if closed:
        k = min(range(len(pts)), key=lambda n: pts[n])
        pts = pts[k:] + pts[:k]
        if len(pts) > 2 and pts[-1] < pts[1]:
            pts = [pts[0]] + pts[:0:-1]
    elif pts[-1] < pts[0]:
        pts = pts[::-1]
    return Polyline(tuple(pts), closed)


def trace_zero_set(h: ScalarField, bbox, resolution: int = DEFAULT_RESOLUTION) -> list[Polyline]:
    """Polylines approximating ``{h = 0}`` inside ``bbox``.

    ``h`` is sampled on ``resolution x resolution`` nodes spanning the box,
    including its edges, so the cell size is ``extent / (resolution - 1)``.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    if h.is_zero:
        raise IdenticallyZeroField("cannot trace the zero set of the zero polynomial")
    xs, ys = grid_axes(BBox(*map(float, bbox)).validate(), resolution)
    return _chain(marching_segments(h, xs, ys))


def _split(points, closed, marks, crit_locs, crit_refs):
    """Cut a point sequence at runs of points near critical points."""
    n = len(points)
    if closed:
        if all(m is None for m in marks):
            return [(points, CLOSED, CLOSED)]
        starts = [k for k in range(n) if marks[k] is not None and marks[k - 1] != marks[k]]
        if not starts:
            return []  # whole loop inside one snap disc
        r = starts[0]
        points = points[r:] + points[:r] + [points[r]]
        marks = marks[r:] + marks[:r] + [marks[r]]
        n += 1
    pieces = []
    cur, start_tag = [], BOUNDARY
    k = 0
    while k < n:
        m = marks[k]
        if m is None:
            cur.append(points[k])
            k += 1
            continue
        while k < n and marks[k] == m:
            k += 1
        loc = crit_locs[m]
        if cur:
            pieces.append((cur + [loc], start_tag, crit_refs[m]))
        cur, start_tag = [loc], crit_refs[m]
    if len(cur) >= 2:
        pieces.append((cur, start_tag, BOUNDARY))
    return pieces


def classify(edge: Sequence, polylines: Sequence[Polyline], crit_i: Sequence[CriticalPoint],
             crit_j: Sequence[CriticalPoint], snap_tol: float) -> ForceLine:
    """Tag polyline ends and cut the polylines at nearby critical points.

    Every run of consecutive points within ``snap_tol`` of a critical point
    is replaced by the critical point itself, which then ends the piece
    before the run and starts the piece after it.  Remaining open ends are
    tagged ``BOUNDARY``; untouched loops are tagged ``CLOSED``.
    """
    if snap_tol <= 0:
        raise ValueError("snap_tol must be positive")
    vi, vj = edge
    refs = [CriticalPointRef(vi, k) for k in range(len(crit_i))]
    refs += [CriticalPointRef(vj, k) for k in range(len(crit_j))]
    locs = [Point2(*c.location) for c in crit_i] + [Point2(*c.location) for c in crit_j]
    carr = np.array(locs, dtype=float).reshape(-1, 2)

    comps = []
    for pl in polylines:
        pts = list(pl.points)
        if carr.size:
            a = pl.array()
            d = np.hypot(a[:, None, 0] - carr[None, :, 0], a[:, None, 1] - carr[None, :, 1])
            near = np.argmin(d, axis=1)
            marks = [int(c) if d[k, c] <= snap_tol else None for k, c in enumerate(near)]
        else:
            marks = [None] * len(pts)
        for seq, start, end in _split(pts, pl.closed, marks, locs, refs):
            clean = []
            for p in seq:
                if not clean or clean[-1] != p:
                    clean.append(p)
            if len(clean) < 2:
                continue
            is_closed = start == CLOSED
            comps.append(Component(Polyline(tuple(clean), is_closed), start, end))
    return ForceLine(tuple(edge), tuple(comps))


def force_line(edge, f_i: ScalarField, f_j: ScalarField, bbox, crit_i, crit_j,
               resolution: int = DEFAULT_RESOLUTION, snap_tol: float | None = None) -> ForceLine:
    """Trace and classify the force line of one edge.

    An identically zero Jacobian (for instance equal fields) yields a
    ``degenerate`` force line with no components.
    """
    h = jacobian_field(f_i, f_j)
    if h.is_zero:
        return ForceLine(tuple(edge), (), degenerate=True)
    if snap_tol is None:
        snap_tol = 2.0 * cell_diagonal(bbox, resolution)
    lines = trace_zero_set(h, bbox, resolution)
    return classify(edge, lines, crit_i, crit_j, snap_tol)
