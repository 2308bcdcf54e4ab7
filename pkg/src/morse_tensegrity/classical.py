"""Planar bar frameworks and their self-stress spaces.

Edge columns of the equilibrium matrix use displacement vectors
``P_j - P_i`` rather than unit directions.  Under this convention a stress
balances at every vertex exactly when the 2-form sums
``sum_j w_ij dP_j ^ dP_i`` vanish; :func:`to_unit_convention` converts a
stress to the unit-direction convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterator, Mapping, Sequence

import numpy as np

from .errors import PointAtInfinity, ValidationError
from .field import Point2
from .forms import ZERO_TWO_FORM, point_form, wedge
from .linalg import RANK_TOL, kernel


@dataclass(frozen=True)
class Graph:
    vertex_ids: tuple
    edges: tuple

    def __init__(self, vertex_ids: Sequence[Hashable], edges: Sequence[Sequence[Hashable]]):
        object.__setattr__(self, "vertex_ids", tuple(vertex_ids))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in edges))
        self._validate()

    def _validate(self):
        if len(set(self.vertex_ids)) != len(self.vertex_ids):
            seen, dup = set(), None
            for v in self.vertex_ids:
                if v in seen:
                    dup = v
                    break
                seen.add(v)
            raise ValidationError(f"duplicate vertex id {dup!r}")
        known = set(self.vertex_ids)
        pairs = set()
        for e in self.edges:
            if len(e) != 2:
                raise ValidationError(f"edge {e!r} does not have two endpoints")
            u, v = e
            if u not in known or v not in known:
                raise ValidationError(f"edge {e!r} references an unknown vertex")
            if u == v:
                raise ValidationError(f"edge {e!r} is a loop")
            key = frozenset(e)
            if key in pairs:
                raise ValidationError(f"duplicate edge {e!r}")
            pairs.add(key)

    @property
    def index(self) -> dict:
        return {v: k for k, v in enumerate(self.vertex_ids)}

    def edge_index(self, u, v) -> int:
        for k, e in enumerate(self.edges):
            if e == (u, v) or e == (v, u):
                return k
        raise KeyError((u, v))

    def neighbors(self, v) -> list[tuple[int, Hashable]]:
        """``(edge position, other endpoint)`` for every edge at ``v``."""
        out = []
        for k, (a, b) in enumerate(self.edges):
            if a == v:
                out.append((k, b))
            elif b == v:
                out.append((k, a))
        return out


@dataclass(frozen=True)
class ClassicalFramework:
    graph: Graph
    positions: Mapping[Hashable, Point2]

    def __post_init__(self):
        pos = {}
        for v in self.graph.vertex_ids:
            if v not in self.positions:
                raise ValidationError(f"vertex {v!r} has no position")
            x, y = self.positions[v]
            if not (np.isfinite(x) and np.isfinite(y)):
                raise ValidationError(f"vertex {v!r} has a non-finite position")
            pos[v] = Point2(float(x), float(y))
        for u, v in self.graph.edges:
            if pos[u] == pos[v]:
                raise ValidationError(f"edge ({u!r}, {v!r}) joins coincident positions")
        object.__setattr__(self, "positions", pos)

    def coordinates(self) -> np.ndarray:
        return np.array([self.positions[v] for v in self.graph.vertex_ids], dtype=float).reshape(-1, 2)


@dataclass(frozen=True)
class StressVector:
    """Edge-indexed stress; ``w[u, v]`` and ``w[v, u]`` are the same value."""

    edges: tuple
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.size != len(self.edges):
            raise ValidationError(f"stress has {vals.size} values for {len(self.edges)} edges")
        vals.setflags(write=False)
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, graph: Graph, values: Mapping) -> StressVector:
        out = np.zeros(len(graph.edges))
        got = set()
        for (u, v), w in values.items():
            k = graph.edge_index(u, v)
            out[k] = w
            got.add(k)
        if len(got) != len(graph.edges):
            raise ValidationError("stress must assign a value to every edge")
        return cls(graph.edges, out)

    def __getitem__(self, uv):
        u, v = uv
        for k, e in enumerate(self.edges):
            if e == (u, v) or e == (v, u):
                return float(self.values[k])
        raise KeyError(uv)

    def as_dict(self) -> dict:
        return {e: float(w) for e, w in zip(self.edges, self.values)}


@dataclass(frozen=True)
class StressBasis:
    edges: tuple
    vectors: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[0])

    def __len__(self):
        return self.dimension

    def __iter__(self) -> Iterator[StressVector]:
        for row in self.vectors:
            yield StressVector(self.edges, row)

    def __getitem__(self, k) -> StressVector:
        return StressVector(self.edges, self.vectors[k])


def basis_from_matrix(matrix, edges, rank_tol=RANK_TOL) -> StressBasis:
    vecs = kernel(matrix, rank_tol)
    if vecs.shape[1] != len(edges):
        vecs = vecs.reshape(0, len(edges))
    return StressBasis(tuple(edges), vecs)


def equilibrium_matrix(fw: ClassicalFramework) -> np.ndarray:
    """``2|V| x |E|`` matrix; block ``i`` of column ``{i, j}`` holds ``P_j - P_i``."""
    g = fw.graph
    idx = g.index
    m = np.zeros((2 * len(g.vertex_ids), len(g.edges)))
    for k, (u, v) in enumerate(g.edges):
        pu = np.asarray(fw.positions[u])
        pv = np.asarray(fw.positions[v])
        m[2 * idx[u]:2 * idx[u] + 2, k] = pv - pu
        m[2 * idx[v]:2 * idx[v] + 2, k] = pu - pv
    return m


def self_stress_basis(fw: ClassicalFramework, rank_tol: float = RANK_TOL) -> StressBasis:
    return basis_from_matrix(equilibrium_matrix(fw), fw.graph.edges, rank_tol)


def vertex_form_sums(fw: ClassicalFramework, w: StressVector) -> dict:
    """Per-vertex 2-form ``sum_j w_ij dP_j ^ dP_i``."""
    g = fw.graph
    vals = np.asarray(w.values)
    if len(w.edges) != len(g.edges):
        raise ValidationError("stress is not keyed by the framework's edges")
    sums = {}
    for v in g.vertex_ids:
        dpi = point_form(fw.positions[v])
        acc = ZERO_TWO_FORM
        for k, other in g.neighbors(v):
            acc = acc + vals[k] * wedge(point_form(fw.positions[other]), dpi)
        sums[v] = acc
    return sums


def form_residual(fw: ClassicalFramework, w: StressVector) -> float:
    sums = vertex_form_sums(fw, w)
    return max((s.norm() for s in sums.values()), default=0.0)


def to_unit_convention(fw: ClassicalFramework, w: StressVector) -> StressVector:
    """Rescale a displacement-convention stress to unit edge directions."""
    lengths = np.array([
        np.hypot(*(np.asarray(fw.positions[v]) - np.asarray(fw.positions[u])))
        for u, v in fw.graph.edges
    ])
    return StressVector(w.edges, np.asarray(w.values) * lengths)


def projective_transform(fw: ClassicalFramework, A) -> ClassicalFramework:
    a = np.asarray(A, dtype=float)
    if a.shape != (3, 3):
        raise ValueError("projective map must be a 3x3 matrix")
    if abs(np.linalg.det(a)) < 1e-300 or np.linalg.matrix_rank(a) < 3:
        raise ValueError("projective map is singular")
    new = {}
    for v in fw.graph.vertex_ids:
        x, y = fw.positions[v]
        hx, hy, hw = a @ np.array([x, y, 1.0])
        if abs(hw) < 1e-12:
            raise PointAtInfinity(f"image has homogeneous weight {hw:.3g}", vertex=v)
        new[v] = Point2(hx / hw, hy / hw)
    return ClassicalFramework(fw.graph, new)
