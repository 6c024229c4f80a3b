"""JSON design files.

Every key is a parameter symbol with a fixed unit; nothing is inferred.

clip (all required)
    l_nail mm, b_nail mm, h_nail mm, w_nail mm, r_clip mm, E_nail MPa
lower_link
    l_low mm, l_low1 mm, l_low2 mm, b_low mm, h_low mm, w_low mm, r_cp mm,
    theta_pr deg, l_low11 mm, E_low MPa; optional n_b (count, default 2)
linkage (all required)
    l_clip mm, l_12 mm, l_23 mm, theta_2 deg
actuator (all required)
    tau_m_max N*mm, r_pg mm
workspace (optional section; w1, w2 required when present)
    w1 mm, w2 mm, w_body mm, w_tip mm, chamfer mm, object_slidable bool,
    strategy1_min_gap mm
claw (optional section)
    max_moment N*mm, reference_arm mm, load N
search (optional section)
    axes: {"<section>.<key>": [lo, hi, n], ...}, max_points, refine_evals, workers
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass

from foldgrip.beams import ClipDesign, LowerLinkDesign
from foldgrip.errors import DesignError, DesignFileError
from foldgrip.explorer import Axis, DesignPoint, SearchSpace
from foldgrip.linkage import ActuatorSpec, LinkageGeometry
from foldgrip.switching import ClawCapacity, WorkspaceScenario

NUM, INT, BOOL = "number", "integer", "boolean"

# section -> {key: (unit, kind, required)}
SCHEMA = {
    "clip": {
        "l_nail": ("mm", NUM, True),
        "b_nail": ("mm", NUM, True),
        "h_nail": ("mm", NUM, True),
        "w_nail": ("mm", NUM, True),
        "r_clip": ("mm", NUM, True),
        "E_nail": ("MPa", NUM, True),
    },
    "lower_link": {
        "l_low": ("mm", NUM, True),
        "l_low1": ("mm", NUM, True),
        "l_low2": ("mm", NUM, True),
        "b_low": ("mm", NUM, True),
        "h_low": ("mm", NUM, True),
        "w_low": ("mm", NUM, True),
        "r_cp": ("mm", NUM, True),
        "theta_pr": ("deg", NUM, True),
        "l_low11": ("mm", NUM, True),
        "E_low": ("MPa", NUM, True),
        "n_b": ("count", INT, False),
    },
    "linkage": {
        "l_clip": ("mm", NUM, True),
        "l_12": ("mm", NUM, True),
        "l_23": ("mm", NUM, True),
        "theta_2": ("deg", NUM, True),
    },
    "actuator": {
        "tau_m_max": ("N*mm", NUM, True),
        "r_pg": ("mm", NUM, True),
    },
    "workspace": {
        "w1": ("mm", NUM, True),
        "w2": ("mm", NUM, True),
        "w_body": ("mm", NUM, False),
        "w_tip": ("mm", NUM, False),
        "chamfer": ("mm", NUM, False),
        "object_slidable": ("-", BOOL, False),
        "strategy1_min_gap": ("mm", NUM, False),
    },
    "claw": {
        "max_moment": ("N*mm", NUM, False),
        "reference_arm": ("mm", NUM, False),
        "load": ("N", NUM, False),
    },
}
REQUIRED_SECTIONS = ("clip", "lower_link", "linkage", "actuator")
SEARCH_KEYS = {"axes", "max_points", "refine_evals", "workers"}


@dataclass(frozen=True)
class SearchConfig:
    space: SearchSpace
    refine_evals: int = 0
    workers: int = 1


@dataclass(frozen=True)
class DesignFile:
    point: DesignPoint
    raw: dict
    workspace: WorkspaceScenario | None = None
    claw: ClawCapacity | None = None
    claw_load: float | None = None
    search: SearchConfig | None = None


def _check_value(path: str, value, kind: str):
    if kind == BOOL:
        if not isinstance(value, bool):
            raise DesignFileError(f"{path}: expected true/false, got {value!r}", path)
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DesignFileError(f"{path}: expected a number, got {value!r}", path)
    if kind == INT:
        if int(value) != value:
            raise DesignFileError(f"{path}: expected an integer, got {value!r}", path)
        return int(value)
    return float(value)


def _section(doc: dict, name: str) -> dict:
    body = doc[name]
    if not isinstance(body, dict):
        raise DesignFileError(f"{name}: expected an object", name)
    spec = SCHEMA[name]
    for key in body:
        if key not in spec:
            raise DesignFileError(f"{name}.{key}: unknown key", f"{name}.{key}")
    out = {}
    for key, (_unit, kind, required) in spec.items():
        path = f"{name}.{key}"
        if key not in body:
            if required:
                raise DesignFileError(f"{path}: missing required key", path)
            continue
        out[key] = _check_value(path, body[key], kind)
    return out


def _build(cls, section: str, values: dict):
    try:
        return cls(**values)
    except DesignError as exc:
        raise DesignFileError(f"{section}: {type(exc).__name__}: {exc}", section) from exc
    except ValueError as exc:
        raise DesignFileError(f"{section}: {exc}", section) from exc


def _search(body, point: DesignPoint) -> SearchConfig:
    if not isinstance(body, dict):
        raise DesignFileError("search: expected an object", "search")
    for key in body:
        if key not in SEARCH_KEYS:
            raise DesignFileError(f"search.{key}: unknown key", f"search.{key}")
    axes_doc = body.get("axes", {})
    if not isinstance(axes_doc, dict):
        raise DesignFileError("search.axes: expected an object", "search.axes")
    axes = []
    for name, triple in axes_doc.items():
        path = f"search.axes.{name}"
        if not (isinstance(triple, list) and len(triple) == 3):
            raise DesignFileError(f"{path}: expected [lo, hi, n]", path)
        lo = _check_value(path, triple[0], NUM)
        hi = _check_value(path, triple[1], NUM)
        n = _check_value(path, triple[2], INT)
        try:
            axes.append(Axis(name, lo, hi, n))
        except (KeyError, ValueError) as exc:
            raise DesignFileError(f"{path}: {exc}", path) from exc
    ints = {}
    for key, default in (("max_points", 10**6), ("refine_evals", 0), ("workers", 1)):
        value = _check_value(f"search.{key}", body.get(key, default), INT)
        if value < 0:
            raise DesignFileError(f"search.{key}: must be >= 0", f"search.{key}")
        ints[key] = value
    try:
        space = SearchSpace(point, tuple(axes), ints["max_points"])
    except ValueError as exc:
        raise DesignFileError(f"search.axes: {exc}", "search.axes") from exc
    return SearchConfig(space, ints["refine_evals"], max(1, ints["workers"]))


def parse_design(doc) -> DesignFile:
    if not isinstance(doc, dict):
        raise DesignFileError("design file must contain a JSON object")
    allowed = set(SCHEMA) | {"search"}
    for name in doc:
        if name not in allowed:
            raise DesignFileError(f"{name}: unknown section", name)
    for name in REQUIRED_SECTIONS:
        if name not in doc:
            raise DesignFileError(f"{name}: missing required section", name)
    point = DesignPoint(
        clip=_build(ClipDesign, "clip", _section(doc, "clip")),
        lower=_build(LowerLinkDesign, "lower_link", _section(doc, "lower_link")),
        geom=_build(LinkageGeometry, "linkage", _section(doc, "linkage")),
        act=_build(ActuatorSpec, "actuator", _section(doc, "actuator")),
    )
    workspace = claw = load = search = None
    if "workspace" in doc:
        workspace = _build(WorkspaceScenario, "workspace", _section(doc, "workspace"))
    if "claw" in doc:
        values = _section(doc, "claw")
        load = values.pop("load", None)
        claw = _build(ClawCapacity, "claw", values)
    if "search" in doc:
        search = _search(doc["search"], point)
    return DesignFile(point, doc, workspace, claw, load, search)


def load_design(path) -> DesignFile:
    if isinstance(path, (str, os.PathLike)):
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise DesignFileError(f"cannot read {path}: {exc}") from exc
    else:
        text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DesignFileError(f"invalid JSON: {exc}") from exc
    return parse_design(doc)
