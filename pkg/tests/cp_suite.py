"""Polynomials with analytically known Morse critical points, and a grid oracle.

Every case is built symbolically with sympy; the expected critical points
and Morse indices come from the construction, never from the solver.
"""

import numpy as np
import sympy as sp
from scipy import ndimage

from morse_tensegrity.field import ScalarField

X, Y = sp.symbols("x y")


def to_field(expr):
    poly = sp.Poly(sp.expand(expr), X, Y)
    return ScalarField({m: float(c) for m, c in poly.terms()})


def _spread_roots(rng, k, lo=-2.0, hi=2.0, gap=0.5):
    while True:
        r = np.sort(rng.uniform(lo, hi, k))
        if k == 1 or np.min(np.diff(r)) > gap:
            return [float(v) for v in r]


def _antiderivative(var, roots, scale):
    """Polynomial whose derivative is ``scale * prod(var - r)``."""
    t = sp.Symbol("t")
    d = scale * sp.prod([(t - sp.Float(r, 30)) for r in roots])
    return sp.integrate(d, (t, 0, var))


def scale_of(roots, k, scale):
    """Second derivative of the antiderivative at root ``k``."""
    return scale * np.prod([roots[k] - r for m, r in enumerate(roots) if m != k])


def separable_case(rng, rotate=False):
    kx, ky = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    while True:
        sx = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2)
        sy = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2)
        rx, ry = _spread_roots(rng, kx), _spread_roots(rng, ky)
        curv = [abs(scale_of(rx, i, sx)) for i in range(kx)]
        curv += [abs(scale_of(ry, j, sy)) for j in range(ky)]
        # bounded Hessian conditioning keeps the two gradient-zero curves
        # from crossing at grazing angles once rotated
        if max(curv) <= 10 * min(curv):
            break
    if rotate:
        theta = float(rng.uniform(0, np.pi))
        c, s = np.cos(theta), np.sin(theta)
        u = sp.Float(c, 30) * X + sp.Float(s, 30) * Y
        v = -sp.Float(s, 30) * X + sp.Float(c, 30) * Y
    else:
        c, s = 1.0, 0.0
        u, v = X, Y
    expr = _antiderivative(u, rx, sx) + _antiderivative(v, ry, sy)
    points = []
    for i, a in enumerate(rx):
        for j, b in enumerate(ry):
            neg = int(scale_of(rx, i, sx) < 0) + int(scale_of(ry, j, sy) < 0)
            # (u, v) = R (x, y)  =>  (x, y) = R^T (u, v)
            points.append(((c * a - s * b, s * a + c * b), neg))
    return expr, points


def product_case(rng):
    a, b = rng.uniform(0.6, 2.0, 2)
    x0, y0 = rng.uniform(-0.5, 0.5, 2)
    k = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2)
    expr = k * ((X - x0) ** 2 - a ** 2) * ((Y - y0) ** 2 - b ** 2)
    centre_index = 2 if k > 0 else 0
    pts = [((x0, y0), centre_index)]
    pts += [((x0 + sx * a, y0 + sy * b), 1) for sx in (-1, 1) for sy in (-1, 1)]
    return expr, pts


def build_suite(n=50, seed=7):
    rng = np.random.default_rng(seed)
    cases = []
    for k in range(n):
        kind = k % 5
        if kind in (0, 1):
            expr, pts = separable_case(rng)
        elif kind in (2, 3):
            expr, pts = separable_case(rng, rotate=True)
        else:
            expr, pts = product_case(rng)
        cases.append((expr, sorted(pts)))
    return cases


def suite_bbox(points, pad=0.9):
    xy = np.array([p for p, _ in points])
    # slight asymmetry keeps grid nodes off the roots
    return (float(xy[:, 0].min() - pad - 0.013), float(xy[:, 1].min() - pad - 0.007),
            float(xy[:, 0].max() + pad + 0.011), float(xy[:, 1].max() + pad + 0.017))


def grid_sign_change_count(expr, bbox, n=2000, merge=6):
    """Clusters of grid cells where both gradient components change sign.

    Gradients are differentiated and evaluated by sympy/numpy, independently
    of the package.  Flagged cells closer than ``merge`` cells are merged
    before counting, so a root on a cell boundary, or one where the two
    zero curves cross at a shallow angle, counts once.
    """
    xs = np.linspace(bbox[0], bbox[2], n + 1)
    ys = np.linspace(bbox[1], bbox[3], n + 1)
    flags = None
    for var in (X, Y):
        v = _grid_values(sp.diff(sp.expand(expr), var), xs, ys)
        s = v > 0
        c = np.stack([s[:-1, :-1], s[:-1, 1:], s[1:, :-1], s[1:, 1:]])
        change = c.any(axis=0) & ~c.all(axis=0)
        flags = change if flags is None else flags & change
    flags = ndimage.binary_dilation(flags, iterations=merge)
    _, count = ndimage.label(flags, structure=np.ones((3, 3)))
    return count


def _grid_values(expr, xs, ys):
    poly = sp.Poly(expr, X, Y)
    coef = np.zeros((max(poly.degree(X), 0) + 1, max(poly.degree(Y), 0) + 1))
    for (i, j), c in poly.terms():
        coef[i, j] = float(c)
    vx = xs[:, None] ** np.arange(coef.shape[0])
    vy = ys[:, None] ** np.arange(coef.shape[1])
    return vy @ coef.T @ vx.T
