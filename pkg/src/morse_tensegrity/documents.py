"""JSON scene and framework documents.

Both formats carry ``version: 1`` and reject unknown keys.  A scene::

    {"version": 1,
     "bbox": [xmin, ymin, xmax, ymax],
     "vertices": [{"id": "a", "function": [[2, 0, 1.0], [0, 2, 1.0]]}],
     "edges": [["a", "b"]],
     "pinned_critical_points": {"a": [{"x": 0, "y": 0, "index": 0}]},
     "render": {"grid": 512, "levels": 8}}

``function`` lists ``[i, j, coeff]`` triples for ``coeff * x^i * y^j``.
A framework replaces ``function`` by ``x`` and ``y`` and has no ``bbox``.
"""

from __future__ import annotations

import json
import numbers

from .classical import ClassicalFramework, Graph
from .errors import ParseError, ValidationError
from .field import BBox, CriticalPoint, Point2, ScalarField, hessian_at
from .morse import Scene

VERSION = 1

SCENE_KEYS = {"version", "bbox", "vertices", "edges", "pinned_critical_points", "render"}
SCENE_REQUIRED = {"version", "bbox", "vertices", "edges"}
FRAMEWORK_KEYS = {"version", "vertices", "edges"}
RENDER_KEYS = {"grid", "levels"}


def _loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from err


def _check_keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where} must be an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ValidationError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = sorted(required - set(obj))
    if missing:
        raise ValidationError(f"{where}: missing key(s) {', '.join(missing)}")


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, numbers.Real):
        raise ValidationError(f"{where} must be a number")
    return float(v)


def _integer(v, where, minimum=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"{where} must be an integer")
    if minimum is not None and v < minimum:
        raise ValidationError(f"{where} must be >= {minimum}")
    return v


def _version(doc):
    v = doc.get("version")
    if isinstance(v, bool) or v != VERSION:
        raise ValidationError(f"unsupported document version {v!r} (expected {VERSION})")


def _graph(doc, vertex_ids):
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise ValidationError("edges must be a list")
    pairs = []
    for n, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise ValidationError(f"edges[{n}] must be a pair of vertex ids")
        pairs.append(tuple(e))
    return Graph(vertex_ids, pairs)


def _function(triples, where):
    if not isinstance(triples, list):
        raise ValidationError(f"{where} must be a list of [i, j, coeff] triples")
    terms = {}
    for n, t in enumerate(triples):
        if not (isinstance(t, list) and len(t) == 3):
            raise ValidationError(f"{where}[{n}] must be [i, j, coeff]")
        i = _integer(t[0], f"{where}[{n}] x-exponent", 0)
        j = _integer(t[1], f"{where}[{n}] y-exponent", 0)
        c = _number(t[2], f"{where}[{n}] coefficient")
        if (i, j) in terms:
            raise ValidationError(f"{where}: monomial x^{i} y^{j} listed twice")
        terms[(i, j)] = c
    try:
        return ScalarField(terms)
    except ValueError as err:
        raise ValidationError(f"{where}: {err}") from err


def scene_from_dict(doc) -> Scene:
    _check_keys(doc, SCENE_KEYS, SCENE_REQUIRED, "scene")
    _version(doc)
    box = doc["bbox"]
    if not (isinstance(box, list) and len(box) == 4):
        raise ValidationError("bbox must be [xmin, ymin, xmax, ymax]")
    box = BBox(*(_number(v, "bbox entry") for v in box))
    try:
        box.validate()
    except ValueError as err:
        raise ValidationError(str(err)) from err

    if not isinstance(doc["vertices"], list):
        raise ValidationError("vertices must be a list")
    ids, fields = [], {}
    for n, v in enumerate(doc["vertices"]):
        _check_keys(v, {"id", "function"}, {"id", "function"}, f"vertices[{n}]")
        if not isinstance(v["id"], str):
            raise ValidationError(f"vertices[{n}].id must be a string")
        if v["id"] in fields:
            raise ValidationError(f"duplicate vertex id {v['id']!r}")
        ids.append(v["id"])
        fields[v["id"]] = _function(v["function"], f"vertex {v['id']!r} function")
    graph = _graph(doc, ids)

    pinned = {}
    for vid, pts in (doc.get("pinned_critical_points") or {}).items():
        if vid not in fields:
            raise ValidationError(f"pinned critical points for unknown vertex {vid!r}")
        if not isinstance(pts, list):
            raise ValidationError(f"pinned critical points of {vid!r} must be a list")
        cps = []
        for n, p in enumerate(pts):
            where = f"pinned_critical_points[{vid!r}][{n}]"
            _check_keys(p, {"x", "y", "index"}, {"x", "y", "index"}, where)
            loc = Point2(_number(p["x"], f"{where}.x"), _number(p["y"], f"{where}.y"))
            idx = _integer(p["index"], f"{where}.index", 0)
            if idx > 2:
                raise ValidationError(f"{where}.index must be 0, 1 or 2")
            h = hessian_at(fields[vid], loc)
            cps.append(CriticalPoint(loc, idx, float(h[0, 0] * h[1, 1] - h[0, 1] ** 2)))
        pinned[vid] = tuple(cps)

    render = None
    if doc.get("render") is not None:
        r = doc["render"]
        _check_keys(r, RENDER_KEYS, set(), "render")
        render = {}
        if "grid" in r:
            render["grid"] = _integer(r["grid"], "render.grid", 8)
        if "levels" in r:
            render["levels"] = _integer(r["levels"], "render.levels", 0)
    return Scene(graph, fields, box, pinned=pinned, render=render)


def framework_from_dict(doc) -> ClassicalFramework:
    _check_keys(doc, FRAMEWORK_KEYS, FRAMEWORK_KEYS, "framework")
    _version(doc)
    if not isinstance(doc["vertices"], list):
        raise ValidationError("vertices must be a list")
    if not doc["vertices"]:
        raise ValidationError("framework has no vertices")
    ids, pos = [], {}
    for n, v in enumerate(doc["vertices"]):
        _check_keys(v, {"id", "x", "y"}, {"id", "x", "y"}, f"vertices[{n}]")
        if not isinstance(v["id"], str):
            raise ValidationError(f"vertices[{n}].id must be a string")
        if v["id"] in pos:
            raise ValidationError(f"duplicate vertex id {v['id']!r}")
        ids.append(v["id"])
        pos[v["id"]] = Point2(_number(v["x"], f"vertices[{n}].x"), _number(v["y"], f"vertices[{n}].y"))
    return ClassicalFramework(_graph(doc, ids), pos)


def is_framework_document(doc) -> bool:
    if not isinstance(doc, dict) or "bbox" in doc:
        return False
    verts = doc.get("vertices")
    return isinstance(verts, list) and all(isinstance(v, dict) and "function" not in v for v in verts)


def parse_scene(text: str) -> Scene:
    return scene_from_dict(_loads(text))


def parse_framework(text: str) -> ClassicalFramework:
    return framework_from_dict(_loads(text))


def parse_document(text: str):
    """Scene or framework, decided by the document's shape."""
    doc = _loads(text)
    if is_framework_document(doc):
        return framework_from_dict(doc)
    return scene_from_dict(doc)


def scene_to_dict(scene: Scene) -> dict:
    doc = {
        "version": VERSION,
        "bbox": list(scene.bbox),
        "vertices": [{"id": v, "function": scene.fields[v].to_triples()}
                     for v in scene.graph.vertex_ids],
        "edges": [list(e) for e in scene.graph.edges],
    }
    if scene.pinned:
        doc["pinned_critical_points"] = {
            v: [{"x": c.x, "y": c.y, "index": c.morse_index} for c in cps]
            for v, cps in scene.pinned.items()
        }
    if scene.render is not None:
        doc["render"] = dict(scene.render)
    return doc


def framework_to_dict(fw: ClassicalFramework) -> dict:
    return {
        "version": VERSION,
        "vertices": [{"id": v, "x": fw.positions[v].x, "y": fw.positions[v].y}
                     for v in fw.graph.vertex_ids],
        "edges": [list(e) for e in fw.graph.edges],
    }


def dumps(obj) -> str:
    doc = framework_to_dict(obj) if isinstance(obj, ClassicalFramework) else scene_to_dict(obj)
    return json.dumps(doc, indent=2) + "\n"
