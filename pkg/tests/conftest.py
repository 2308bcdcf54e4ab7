from importlib import resources

import numpy as np
import pytest

from morse_tensegrity import documents
from morse_tensegrity.classical import ClassicalFramework, Graph
from morse_tensegrity.field import ScalarField

WHEEL_EDGES = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"),
               ("a", "o"), ("b", "o"), ("c", "o"), ("d", "o")]
WHEEL_POSITIONS = {"a": (3, 3), "b": (-3, 3), "c": (-3, -3), "d": (3, -3), "o": (0, 0)}
SPOKES = [("a", "o"), ("b", "o"), ("c", "o"), ("d", "o")]
HORIZONTAL_RIM = [("a", "b"), ("c", "d")]
VERTICAL_RIM = [("b", "c"), ("d", "a")]

FIXTURES = ["five_field_wheel.json", "square_wheel_framework.json", "two_paraboloids.json",
            "splitting.json", "saddle_triangle.json"]


def fixture_path(name):
    return str(resources.files("morse_tensegrity") / "data" / name)


def fixture_text(name):
    return (resources.files("morse_tensegrity") / "data" / name).read_text()


def wheel_framework():
    return ClassicalFramework(Graph(list(WHEEL_POSITIONS), WHEEL_EDGES), WHEEL_POSITIONS)


def random_framework(rng, n_min=4, n_max=10, p=0.5, lo=-5.0, hi=5.0):
    n = int(rng.integers(n_min, n_max + 1))
    ids = [f"v{k}" for k in range(n)]
    edges = [(ids[i], ids[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    pos = {v: tuple(rng.uniform(lo, hi, 2)) for v in ids}
    return ClassicalFramework(Graph(ids, edges), pos)


def random_projective(rng, fw, scale=0.05):
    while True:
        a = np.eye(3) + scale * rng.normal(size=(3, 3))
        w = np.array([a[2] @ [x, y, 1.0] for x, y in fw.positions.values()])
        if np.min(np.abs(w)) > 0.2 and np.linalg.cond(a) < 10:
            return a


@pytest.fixture
def wheel_scene():
    return documents.parse_scene(fixture_text("five_field_wheel.json"))


@pytest.fixture
def wheel():
    return wheel_framework()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def paraboloid(a, b):
    return ScalarField.paraboloid(a, b)


# -- acceptance reporting ---------------------------------------------------

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE.append((number, line))
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
