"""Constant-coefficient 1-forms and 2-forms on R^3.

A 1-form ``a dx + b dy + c dz`` is stored as ``(a, b, c)``; a 2-form as its
coefficients on ``(dy^dz, dz^dx, dx^dy)``.  With this basis order the wedge
product of two 1-forms is the ordinary cross product of their coefficient
vectors.  Every 2-form in three dimensions is decomposable, so nothing
beyond the three coefficients is tracked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .field import ScalarField


@dataclass(frozen=True)
class OneForm:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise ValueError(f"non-finite 1-form coefficients {self.as_tuple()}")

    def as_tuple(self):
        return (self.a, self.b, self.c)

    def __add__(self, other: OneForm) -> OneForm:
        return OneForm(self.a + other.a, self.b + other.b, self.c + other.c)

    def __mul__(self, s: float) -> OneForm:
        return OneForm(s * self.a, s * self.b, s * self.c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class TwoForm:
    p: float  # dy^dz
    q: float  # dz^dx
    r: float  # dx^dy

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.p, self.q, self.r)):
            raise ValueError(f"non-finite 2-form coefficients {self.as_tuple()}")

    def as_tuple(self):
        return (self.p, self.q, self.r)

    def norm(self) -> float:
        return math.sqrt(self.p * self.p + self.q * self.q + self.r * self.r)

    def __add__(self, other: TwoForm) -> TwoForm:
        return TwoForm(self.p + other.p, self.q + other.q, self.r + other.r)

    def __neg__(self) -> TwoForm:
        return TwoForm(-self.p, -self.q, -self.r)

    def __mul__(self, s: float) -> TwoForm:
        return TwoForm(s * self.p, s * self.q, s * self.r)

    __rmul__ = __mul__


ZERO_TWO_FORM = TwoForm(0.0, 0.0, 0.0)
DX = OneForm(1.0, 0.0, 0.0)
DY = OneForm(0.0, 1.0, 0.0)
DZ = OneForm(0.0, 0.0, 1.0)


def wedge(u: OneForm, v: OneForm) -> TwoForm:
    return TwoForm(
        u.b * v.c - u.c * v.b,
        u.c * v.a - u.a * v.c,
        u.a * v.b - u.b * v.a,
    )


def point_form(p) -> OneForm:
    """``x dx + y dy + dz`` for the point ``p = (x, y)``."""
    return OneForm(float(p[0]), float(p[1]), 1.0)


def field_form_at(f: ScalarField, p) -> OneForm:
    """``df + dz`` evaluated at ``p``."""
    x, y = p
    return OneForm(f.dx()(x, y), f.dy()(x, y), 1.0)
