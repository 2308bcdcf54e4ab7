import numpy as np
import pytest
import sympy as sp

from morse_tensegrity.classical import (
    ClassicalFramework,
    Graph,
    StressVector,
    equilibrium_matrix,
    form_residual,
    projective_transform,
    self_stress_basis,
    to_unit_convention,
    vertex_form_sums,
)
from morse_tensegrity.errors import PointAtInfinity, ValidationError
from morse_tensegrity.linalg import canonical_basis, kernel, principal_angles

from conftest import SPOKES, WHEEL_EDGES, random_framework, random_projective, wheel_framework


def single_edge():
    return ClassicalFramework(Graph(["a", "b"], [("a", "b")]), {"a": (0, 0), "b": (1, 0)})


def triangle():
    return ClassicalFramework(Graph("abc", [("a", "b"), ("b", "c"), ("c", "a")]),
                              {"a": (0, 0), "b": (1, 0), "c": (0, 1)})


def sympy_kernel(fw):
    """Exact null space from a matrix assembled independently in sympy."""
    ids = list(fw.graph.vertex_ids)
    rows = []
    for v in ids:
        pv = sp.Matrix([sp.nsimplify(c) for c in fw.positions[v]])
        rx, ry = [], []
        for a, b in fw.graph.edges:
            if v in (a, b):
                other = b if v == a else a
                d = sp.Matrix([sp.nsimplify(c) for c in fw.positions[other]]) - pv
            else:
                d = sp.Matrix([0, 0])
            rx.append(d[0])
            ry.append(d[1])
        rows += [rx, ry]
    return sp.Matrix(rows).nullspace()


# -- graph / framework validation ------------------------------------------

def test_graph_rejects_loops_duplicates_unknowns():
    with pytest.raises(ValidationError):
        Graph(["a", "b"], [("a", "a")])
    with pytest.raises(ValidationError):
        Graph(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(ValidationError):
        Graph(["a", "b"], [("a", "z")])
    with pytest.raises(ValidationError):
        Graph(["a", "a"], [])


def test_framework_rejects_coincident_edge_endpoints():
    with pytest.raises(ValidationError):
        ClassicalFramework(Graph("ab", [("a", "b")]), {"a": (1, 1), "b": (1, 1)})
    with pytest.raises(ValidationError):
        ClassicalFramework(Graph("ab", [("a", "b")]), {"a": (1, 1)})


# -- equilibrium matrix -----------------------------------------------------

def test_single_edge_matrix():
    m = equilibrium_matrix(single_edge())
    assert m.shape == (4, 1)
    assert m[:, 0].tolist() == [1, 0, -1, 0]


def test_triangle_is_stress_free():
    assert self_stress_basis(triangle()).dimension == 0
    assert sympy_kernel(triangle()) == []


def test_wheel_matrix_shape_and_kernel():
    fw = wheel_framework()
    assert equilibrium_matrix(fw).shape == (10, 8)
    exact = sympy_kernel(fw)
    assert len(exact) == 1
    basis = self_stress_basis(fw)
    assert basis.dimension == 1
    w = basis[0]
    for a, b in WHEEL_EDGES:
        ratio = w[a, b] / w["a", "o"]
        expected = 1.0 if (a, b) in SPOKES else -0.5
        assert ratio == pytest.approx(expected, rel=1e-12)
    ex = np.array(exact[0], dtype=float).ravel()
    assert np.allclose(ex / ex[4], np.asarray(w.values) / w.values[4])


def test_single_edge_has_no_self_stress():
    assert self_stress_basis(single_edge()).dimension == 0


def test_basis_normalization(rng):
    for _ in range(20):
        fw = random_framework(rng, 6, 9, 0.7)
        m = equilibrium_matrix(fw)
        basis = self_stress_basis(fw)
        v = basis.vectors
        assert np.allclose(v @ v.T, np.eye(basis.dimension), atol=1e-12)
        for row in v:
            nz = np.flatnonzero(np.abs(row) > 1e-9)
            assert row[nz[0]] > 0
        smax = np.linalg.svd(m, compute_uv=False)[0]
        for row in v:
            assert np.linalg.norm(m @ row) <= 1e-10 * smax
        # dimension = |E| - rank
        assert basis.dimension == m.shape[1] - np.linalg.matrix_rank(m, tol=1e-10 * smax)


def test_canonical_basis_independent_of_input_basis(rng):
    k = np.linalg.qr(rng.normal(size=(9, 3)))[0].T
    q = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    a = canonical_basis(k)
    b = canonical_basis(q @ k)
    assert np.allclose(a, b, atol=1e-12)


def test_kernel_of_empty_and_zero_matrices():
    assert kernel(np.zeros((4, 0))).shape == (0, 0)
    z = kernel(np.zeros((2, 3)))
    assert np.allclose(z @ z.T, np.eye(3))


# -- 2-form equivalence ------------------------------------------------------

def test_form_residual_zero_stress(rng):
    fw = random_framework(rng)
    assert form_residual(fw, StressVector(fw.graph.edges, np.zeros(len(fw.graph.edges)))) == 0.0


def test_form_residual_of_wheel_self_stress():
    fw = wheel_framework()
    w = StressVector.from_mapping(fw.graph, {e: (1.0 if e in SPOKES else -0.5) for e in WHEEL_EDGES})
    assert form_residual(fw, w) < 1e-12


def test_form_residual_single_edge_positive():
    fw = single_edge()
    assert form_residual(fw, StressVector(fw.graph.edges, [1.0])) > 0


def test_form_sum_components_match_force_sums(rng):
    """The dy^dz and dz^dx parts are the rotated force sum."""
    fw = random_framework(rng)
    w = StressVector(fw.graph.edges, rng.normal(size=len(fw.graph.edges)))
    forces = (equilibrium_matrix(fw) @ w.values).reshape(-1, 2)
    sums = vertex_form_sums(fw, w)
    for k, v in enumerate(fw.graph.vertex_ids):
        s = sums[v]
        assert s.p == pytest.approx(forces[k, 1], abs=1e-10)
        assert s.q == pytest.approx(-forces[k, 0], abs=1e-10)


def test_torque_component_vanishes_with_forces(rng):
    checked = 0
    while checked < 100:
        fw = random_framework(rng, 6, 10, 0.7)
        basis = self_stress_basis(fw)
        if basis.dimension == 0:
            continue
        w = StressVector(fw.graph.edges, rng.normal(size=basis.dimension) @ basis.vectors)
        for s in vertex_form_sums(fw, w).values():
            assert abs(s.p) < 1e-9 and abs(s.q) < 1e-9
            assert abs(s.r) < 1e-9 * (1 + 5) ** 2
        checked += 1


def test_unit_convention_scales_by_length():
    fw = ClassicalFramework(Graph("ab", [("a", "b")]), {"a": (0, 0), "b": (3, 4)})
    w = to_unit_convention(fw, StressVector(fw.graph.edges, [2.0]))
    assert w.values[0] == 10.0


# -- projective maps ---------------------------------------------------------

def test_identity_and_translation():
    fw = wheel_framework()
    assert projective_transform(fw, np.eye(3)).positions == fw.positions
    t = projective_transform(fw, [[1, 0, 1], [0, 1, 2], [0, 0, 1]])
    for v in fw.graph.vertex_ids:
        assert t.positions[v] == (fw.positions[v].x + 1, fw.positions[v].y + 2)


def test_point_at_infinity():
    fw = wheel_framework()
    # third row sends the vertex (3, 3) to weight 0
    with pytest.raises(PointAtInfinity):
        projective_transform(fw, [[1, 0, 0], [0, 1, 0], [1 / 6, 1 / 6, -1.0]])


def test_projective_invariance_of_dimension(rng):
    fixtures = [wheel_framework(), triangle()] + [random_framework(rng, 5, 8, 0.6) for _ in range(3)]
    for fw in fixtures:
        dim = self_stress_basis(fw).dimension
        for _ in range(20):
            moved = projective_transform(fw, random_projective(rng, fw))
            assert self_stress_basis(moved).dimension == dim


def test_principal_angles_helper():
    a = np.array([[1.0, 0, 0], [0, 1.0, 0]])
    assert np.allclose(principal_angles(a, a[::-1] * 3), 0)
