"""Bivariate polynomial scalar fields and their Morse critical points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import DegenerateHessian, NonMorseField, ZeroGradientField

MAX_DEGREE = 64

GRAD_TOL = 1e-9
DEGENERACY_TOL = 1e-9


class Point2(NamedTuple):
    x: float
    y: float


class BBox(NamedTuple):
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def diam(self) -> float:
        return float(np.hypot(self.width, self.height))

    def contains(self, x, y, margin=0.0):
        return ((x >= self.xmin - margin) & (x <= self.xmax + margin)
                & (y >= self.ymin - margin) & (y <= self.ymax + margin))

    def validate(self):
        if not all(np.isfinite(v) for v in self):
            raise ValueError(f"bbox has non-finite bounds: {tuple(self)}")
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(f"bbox is degenerate or unordered: {tuple(self)}")
        return self


class ScalarField:
    """Sparse polynomial ``sum c_ij x^i y^j`` with real coefficients.

    Zero coefficients are never stored, so two fields compare equal exactly
    when their coefficient maps agree.  Instances are treated as immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], float] | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            i, j, c = int(i), int(j), float(c)
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial ({i}, {j})")
            if i + j > MAX_DEGREE:
                raise ValueError(f"monomial degree {i + j} exceeds {MAX_DEGREE}")
            if not np.isfinite(c):
                raise ValueError(f"non-finite coefficient for x^{i} y^{j}")
            if c != 0.0:
                clean[(i, j)] = c
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def from_triples(cls, triples: Iterable[Iterable[float]]) -> ScalarField:
        acc: dict[tuple[int, int], float] = {}
        for i, j, c in triples:
            acc[(int(i), int(j))] = acc.get((int(i), int(j)), 0.0) + float(c)
        return cls(acc)

    @classmethod
    def constant(cls, c: float) -> ScalarField:
        return cls({(0, 0): c})

    @classmethod
    def paraboloid(cls, a: float, b: float) -> ScalarField:
        """``(x - a)^2 + (y - b)^2`` expanded."""
        a, b = float(a), float(b)
        return cls({(2, 0): 1.0, (1, 0): -2.0 * a, (0, 2): 1.0,
                    (0, 1): -2.0 * b, (0, 0): a * a + b * b})

    @property
    def terms(self) -> dict[tuple[int, int], float]:
        return dict(self._terms)

    def to_triples(self) -> list[list]:
        return [[i, j, c] for (i, j), c in self._terms.items()]

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self._terms), default=0)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ScalarField):
            other = ScalarField.constant(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0.0) + c
        return ScalarField(acc)

    __radd__ = __add__

    def __neg__(self):
        return ScalarField({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ScalarField):
            other = ScalarField.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ScalarField):
            return ScalarField({k: c * float(other) for k, c in self._terms.items()})
        acc: dict[tuple[int, int], list[float]] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                acc.setdefault((i1 + i2, j1 + j2), []).append(c1 * c2)
        return ScalarField({k: math.fsum(v) for k, v in acc.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "ScalarField(0)"
        parts = []
        for (i, j), c in self._terms.items():
            mono = "*".join(p for p in (
                "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
            ) if p)
            parts.append(f"{c:g}*{mono}" if mono else f"{c:g}")
        return "ScalarField(" + " + ".join(parts) + ")"

    # -- calculus -----------------------------------------------------------

    def dx(self) -> ScalarField:
        return ScalarField({(i - 1, j): i * c for (i, j), c in self._terms.items() if i > 0})

    def dy(self) -> ScalarField:
        return ScalarField({(i, j - 1): j * c for (i, j), c in self._terms.items() if j > 0})

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x, y):
        """Evaluate at scalars or broadcastable arrays."""
        scalar = np.ndim(x) == 0 and np.ndim(y) == 0
        if scalar:
            x, y = float(x), float(y)
            return float(sum(c * x ** i * y ** j for (i, j), c in self._terms.items()))
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast_shapes(x.shape, y.shape))
        for (i, j), c in self._terms.items():
            out = out + c * x ** i * y ** j
        return out

    def grid(self, xs, ys) -> np.ndarray:
        """Values on the tensor grid, shape ``(len(ys), len(xs))``.

        Evaluated as ``Vy @ C.T @ Vx.T`` with Vandermonde factors, which is
        far cheaper than per-monomial broadcasting on large grids.
        """
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if not self._terms:
            return np.zeros((ys.size, xs.size))
        di = max(i for i, _ in self._terms) + 1
        dj = max(j for _, j in self._terms) + 1
        coef = np.zeros((di, dj))
        for (i, j), c in self._terms.items():
            coef[i, j] = c
        vx = xs[:, None] ** np.arange(di)[None, :]
        vy = ys[:, None] ** np.arange(dj)[None, :]
        return vy @ coef.T @ vx.T


def evaluate(f: ScalarField, p) -> float:
    return f(p[0], p[1])


def gradient(f: ScalarField) -> tuple[ScalarField, ScalarField]:
    return f.dx(), f.dy()


def hessian_at(f: ScalarField, p) -> np.ndarray:
    fx, fy = gradient(f)
    x, y = p
    hxy = fx.dy()(x, y)
    return np.array([[fx.dx()(x, y), hxy], [hxy, fy.dy()(x, y)]])


def degeneracy_threshold(hessian, rel_tol=DEGENERACY_TOL) -> float:
    return rel_tol * (1.0 + float(np.max(np.abs(hessian))))


def morse_index(hessian, rel_tol: float = DEGENERACY_TOL) -> int:
    """Number of negative eigenvalues of a symmetric 2x2 Hessian.

    Raises DegenerateHessian when ``|det|`` does not clear the scale-aware
    threshold ``rel_tol * (1 + max|entry|)``.
    """
    h = np.asarray(hessian, dtype=float)
    det = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
    if abs(det) <= degeneracy_threshold(h, rel_tol):
        raise DegenerateHessian(f"Hessian determinant {det:.3g} is below the degeneracy threshold")
    if det < 0:
        return 1
    return 2 if h[0, 0] + h[1, 1] < 0 else 0


@dataclass(frozen=True)
class CriticalPoint:
    location: Point2
    morse_index: int
    hessian_det: float

    @property
    def sign(self) -> int:
        """The weight ``(-1)^index`` used in the equilibrium sums."""
        return -1 if self.morse_index % 2 else 1

    @property
    def x(self) -> float:
        return self.location.x

    @property
    def y(self) -> float:
        return self.location.y


def classify_point(f: ScalarField, p, rel_tol: float = DEGENERACY_TOL) -> CriticalPoint:
    h = hessian_at(f, p)
    det = float(h[0, 0] * h[1, 1] - h[0, 1] ** 2)
    try:
        idx = morse_index(h, rel_tol)
    except DegenerateHessian as err:
        raise NonMorseField(f"degenerate critical point near ({p[0]:.6g}, {p[1]:.6g}): {err}") from err
    return CriticalPoint(Point2(float(p[0]), float(p[1])), idx, det)


def _newton_steps(gx, gy, hxx, hxy, hyy):
    det = hxx * hyy - hxy * hxy
    scale = np.maximum(np.maximum(np.abs(hxx), np.abs(hyy)), np.abs(hxy)) ** 2
    regular = np.abs(det) > 1e-14 * np.maximum(scale, 1e-300)
    safe = np.where(regular, det, 1.0)
    sx = np.where(regular, (hyy * gx - hxy * gy) / safe, 0.0)
    sy = np.where(regular, (hxx * gy - hxy * gx) / safe, 0.0)
    if not regular.all():
        # least-squares step for (near) singular Hessians
        idx = np.flatnonzero(~regular)
        mats = np.stack([np.stack([hxx[idx], hxy[idx]], -1),
                         np.stack([hxy[idx], hyy[idx]], -1)], -2)
        rhs = np.stack([gx[idx], gy[idx]], -1)[..., None]
        step = (np.linalg.pinv(mats, rcond=1e-12) @ rhs)[..., 0]
        sx[idx] = step[:, 0]
        sy[idx] = step[:, 1]
    return sx, sy


def find_critical_points(
    f: ScalarField,
    bbox,
    *,
    seeds: int = 64,
    max_iter: int = 60,
    grad_tol: float = GRAD_TOL,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> list[CriticalPoint]:
    """Locate and classify every gradient zero of ``f`` inside ``bbox``.

    Newton's method on the gradient system is started from a uniform
    ``seeds x seeds`` grid.  Iterates that leave the box by more than 10% of
    its diagonal are dropped.  A root is accepted when its gradient norm is
    below ``grad_tol * (1 + max|coeff|)``; roots closer than
    ``1e-8 * diam`` are merged, keeping the smaller residual.

    Parameters
    ----------
    f : ScalarField
    bbox : BBox or 4-sequence ``(xmin, ymin, xmax, ymax)``
    seeds : int
        Seeds per axis.
    max_iter : int
        Newton iteration cap.

    Returns
    -------
    list of CriticalPoint
        Sorted lexicographically by ``(x, y)``.

    Raises
    ------
    ZeroGradientField
        If ``f`` is constant.
    NonMorseField
        If an accepted root has a degenerate Hessian.
    """
    box = BBox(*map(float, bbox)).validate()
    fx, fy = gradient(f)
    if fx.is_zero and fy.is_zero:
        raise ZeroGradientField("field is constant; every point is critical")
    fxx, fxy, fyy = fx.dx(), fx.dy(), fy.dy()
    diam = box.diam

    xs = np.linspace(box.xmin, box.xmax, seeds)
    ys = np.linspace(box.ymin, box.ymax, seeds)
    X, Y = (a.ravel().copy() for a in np.meshgrid(xs, ys))
    active = np.ones(X.size, dtype=bool)
    lost = np.zeros(X.size, dtype=bool)

    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        x, y = X[idx], Y[idx]
        sx, sy = _newton_steps(fx(x, y), fy(x, y), fxx(x, y), fxy(x, y), fyy(x, y))
        x, y = x - sx, y - sy
        X[idx], Y[idx] = x, y
        step = np.hypot(sx, sy)
        bad = ~np.isfinite(x) | ~np.isfinite(y) | ~box.contains(x, y, 0.1 * diam)
        lost[idx[bad]] = True
        done = bad | (step < 1e-13 * diam)
        active[idx[done]] = False

    keep = ~lost & box.contains(X, Y)
    X, Y = X[keep], Y[keep]
    gnorm = np.hypot(fx(X, Y), fy(X, Y))
    ok = gnorm < grad_tol * (1.0 + f.max_abs_coeff())
    X, Y, gnorm = X[ok], Y[ok], gnorm[ok]

    merge = 1e-8 * diam
    roots: list[tuple[float, float]] = []
    for k in np.argsort(gnorm, kind="stable"):
        p = (float(X[k]), float(Y[k]))
        if all(np.hypot(p[0] - q[0], p[1] - q[1]) >= merge for q in roots):
            roots.append(p)

    points = [classify_point(f, p, degeneracy_tol) for p in roots]
    points.sort(key=lambda c: (c.location.x, c.location.y))
    return points
