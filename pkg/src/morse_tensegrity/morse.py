"""Self-stresses of graphs whose vertices carry scalar fields.

At a critical point ``P`` of ``f_i`` the 2-form ``dF_j ^ dF_i`` reduces to
``df_j(P) ^ dz``, so the equilibrium condition at vertex ``i`` becomes the
planar vector equation

    sum_k (-1)^ind(P_ik) sum_j w_ij grad f_j(P_ik) = 0

summed over the critical points of ``f_i`` inside the scene box.  The sign
of each row block is a convention and does not affect the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping

import numpy as np

from .classical import (
    ClassicalFramework,
    Graph,
    StressBasis,
    StressVector,
    basis_from_matrix,
)
from .errors import NoCriticalPoints, NumericError, ValidationError
from .field import (
    DEGENERACY_TOL,
    GRAD_TOL,
    BBox,
    CriticalPoint,
    ScalarField,
    find_critical_points,
    gradient,
)
from .linalg import RANK_TOL


@dataclass(frozen=True)
class SolverParams:
    seeds: int = 64
    max_iter: int = 60
    grad_tol: float = GRAD_TOL
    degeneracy_tol: float = DEGENERACY_TOL
    rank_tol: float = RANK_TOL


@dataclass(frozen=True)
class Scene:
    """Graph, per-vertex fields and the box critical points are sought in.

    ``pinned`` maps vertex ids to explicit critical-point lists, bypassing
    the Newton search for those vertices.  ``render`` holds optional figure
    settings (``grid``, ``levels``) carried along for round-tripping.
    """

    graph: Graph
    fields: Mapping[Hashable, ScalarField]
    bbox: BBox
    pinned: Mapping[Hashable, tuple] = field(default_factory=dict)
    params: SolverParams = SolverParams()
    render: Mapping[str, int] | None = None

    def __post_init__(self):
        for v in self.graph.vertex_ids:
            if v not in self.fields:
                raise ValidationError(f"vertex {v!r} has no field")
        extra = set(self.fields) - set(self.graph.vertex_ids)
        if extra:
            raise ValidationError(f"fields given for unknown vertices {sorted(map(str, extra))}")
        for v in self.pinned:
            if v not in self.fields:
                raise ValidationError(f"pinned critical points for unknown vertex {v!r}")
        try:
            box = BBox(*map(float, self.bbox)).validate()
        except (TypeError, ValueError) as err:
            raise ValidationError(str(err)) from err
        object.__setattr__(self, "bbox", box)
        object.__setattr__(self, "fields", dict(self.fields))
        object.__setattr__(self, "pinned", {v: tuple(c) for v, c in self.pinned.items()})


def critical_points(scene: Scene, v) -> list[CriticalPoint]:
    """Critical points of vertex ``v``'s field, pinned or searched."""
    if v in scene.pinned:
        return list(scene.pinned[v])
    p = scene.params
    try:
        return find_critical_points(
            scene.fields[v], scene.bbox, seeds=p.seeds, max_iter=p.max_iter,
            grad_tol=p.grad_tol, degeneracy_tol=p.degeneracy_tol,
        )
    except NumericError as err:
        raise type(err)(err.detail, vertex=v) from err


def critical_sets(scene: Scene) -> dict:
    return {v: critical_points(scene, v) for v in scene.graph.vertex_ids}


@dataclass(frozen=True)
class MorseEquilibriumSystem:
    matrix: np.ndarray
    critical_sets: Mapping[Hashable, list]
    row_labels: tuple  # (vertex, critical point index or None, component)
    edges: tuple


def assemble(scene: Scene, per_critical_point: bool = False) -> MorseEquilibriumSystem:
    """Build the linear system whose kernel is the self-stress space.

    With ``per_critical_point`` each critical point contributes its own
    two rows instead of the index-signed sum over the vertex's critical set.
    """
    g = scene.graph
    crit = critical_sets(scene)
    for v in g.vertex_ids:
        if not crit[v]:
            raise NoCriticalPoints("no critical points inside the scene box", vertex=v)
    grads = {v: gradient(f) for v, f in scene.fields.items()}

    blocks, labels = [], []
    for v in g.vertex_ids:
        nbrs = g.neighbors(v)
        rows = np.zeros((len(crit[v]), 2, len(g.edges)))
        for k, cp in enumerate(crit[v]):
            x, y = cp.location
            for e, other in nbrs:
                gx, gy = grads[other]
                rows[k, :, e] = cp.sign * np.array([gx(x, y), gy(x, y)])
        if per_critical_point:
            for k in range(len(crit[v])):
                blocks.append(rows[k])
                labels += [(v, k, "x"), (v, k, "y")]
        else:
            blocks.append(rows.sum(axis=0))
            labels += [(v, None, "x"), (v, None, "y")]
    if blocks:
        matrix = np.vstack(blocks)
    else:
        matrix = np.zeros((0, len(g.edges)))
    return MorseEquilibriumSystem(matrix, crit, tuple(labels), g.edges)


def self_stress_basis(scene: Scene, per_critical_point: bool = False,
                      rank_tol: float | None = None) -> StressBasis:
    system = assemble(scene, per_critical_point)
    tol = scene.params.rank_tol if rank_tol is None else rank_tol
    return basis_from_matrix(system.matrix, scene.graph.edges, tol)


def verify(scene: Scene, w: StressVector, per_critical_point: bool = False) -> float:
    """Largest per-vertex force imbalance of ``w``."""
    if tuple(w.edges) != scene.graph.edges:
        raise ValidationError("stress is not keyed by the scene's edges")
    system = assemble(scene, per_critical_point)
    if system.matrix.shape[0] == 0:
        return 0.0
    forces = (system.matrix @ np.asarray(w.values)).reshape(-1, 2)
    return float(np.max(np.hypot(forces[:, 0], forces[:, 1])))


def paraboloid_lift(fw: ClassicalFramework) -> Scene:
    """Replace each vertex position ``(a, b)`` by ``(x - a)^2 + (y - b)^2``.

    The scene box is the framework's bounding box grown by 50% (a quarter of
    the extent on every side); a zero extent falls back to the larger one,
    or to 1 for a single point.
    """
    fields = {v: ScalarField.paraboloid(*fw.positions[v]) for v in fw.graph.vertex_ids}
    xy = fw.coordinates()
    if xy.size == 0:
        raise ValidationError("framework has no vertices")
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    ext = hi - lo
    fallback = max(float(ext.max()), 1.0)
    ext = np.where(ext > 0, ext, fallback)
    mid = (lo + hi) / 2
    half = 0.75 * ext
    box = BBox(mid[0] - half[0], mid[1] - half[1], mid[0] + half[0], mid[1] + half[1])
    return Scene(fw.graph, fields, box)
