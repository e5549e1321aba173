"""JSON (de)serialization with schema checks, and DOT export."""

from __future__ import annotations

import json
import re
from fractions import Fraction

import jsonschema
import sympy

from bbatlas.flow import (
    BoundaryConfig,
    Component,
    Contact,
    Group,
    Node,
    ParamMap,
    TransversalConfig,
    W,
    Z,
)
from bbatlas.graph import H, P, DecoratedGraph, Edge, Vertex
from bbatlas.poly import PoincarePoly
from bbatlas.poset import MoveStep

SCHEMA_VERSION = 1


class SchemaViolation(ValueError):
    def __init__(self, message: str, pointer: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


_INT = {"type": "integer"}
_NAT = {"type": "integer", "minimum": 0}
_VERSION = {"const": SCHEMA_VERSION}


def _obj(props: dict, required: list[str]) -> dict:
    return {"type": "object", "properties": props, "required": required, "additionalProperties": False}


GRAPH_SCHEMA = _obj({
    "schema_version": _VERSION,
    "n": _NAT,
    "d": _INT,
    "vertices": {"type": "array", "items": _obj(
        {"id": _INT, "label": {"enum": [P, H]}, "degree": _NAT}, ["id", "label"])},
    "edges": {"type": "array", "items": _obj({"p": _INT, "h": _INT, "degree": _INT}, ["p", "h", "degree"])},
    "legs": {"type": "array", "items": _obj({"marking": _INT, "vertex": _INT}, ["marking", "vertex"])},
}, ["n", "d", "vertices", "edges", "legs"])

POLY_SCHEMA = _obj({"schema_version": _VERSION, "poly": {"type": "array", "items": _NAT}}, ["poly"])

_FLAG = {"type": "array", "prefixItems": [{"enum": ["leg", "edge"]}, _INT], "minItems": 2, "maxItems": 2}
_PAIR = {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}

MOVE_SCHEMA = {"oneOf": [
    _obj({"kind": {"const": "split"}, "edge": _PAIR, "degrees": {"type": "array", "items": _INT},
          "d0": _NAT, "blocks": {"type": "array", "items": {"type": "array", "items": _FLAG}}},
         ["kind", "edge", "degrees", "d0", "blocks"]),
    _obj({"kind": {"const": "join"}, "edge": _PAIR, "other": _PAIR}, ["kind", "edge", "other"]),
    _obj({"kind": {"const": "transfer"}, "edge": _PAIR, "leg": _INT}, ["kind", "edge", "leg"]),
]}

MOVES_SCHEMA = _obj({"schema_version": _VERSION, "moves": {"type": "array", "items": MOVE_SCHEMA}}, ["moves"])

_END = {"type": "array", "prefixItems": [_NAT, {"type": ["integer", "null"]}], "minItems": 2, "maxItems": 2}

CONFIG_SCHEMA = _obj({
    "schema_version": _VERSION,
    "n": _NAT,
    "d": _INT,
    "components": {"type": "array", "minItems": 1, "items": _obj({
        "kind": {"enum": ["in_h", "transversal"]},
        "degree": _NAT,
        "markings": {"type": "array", "items": _INT},
        "contacts": {"type": "array", "items": _obj(
            {"mult": _INT, "marking": {"type": ["integer", "null"]}}, ["mult"])},
    }, ["kind", "degree"])},
    "nodes": {"type": "array", "items": _obj({"a": _END, "b": _END}, ["a", "b"])},
}, ["n", "d", "components"])

_FORM = {"type": "string", "pattern": r"^[0-9zw+\-*/^() ]+$"}
_RAT = {"type": ["integer", "string"]}

PARAM_MAP_SCHEMA = _obj({
    "schema_version": _VERSION,
    "forms": {"type": "array", "items": _FORM, "minItems": 2},
    "marked": {"type": "array", "items": {"type": "array", "items": _RAT, "minItems": 2, "maxItems": 2}},
}, ["forms"])

BOUNDARY_SCHEMA = _obj({
    "schema_version": _VERSION,
    "alpha": {"type": "array", "items": _NAT},
    "d0": _NAT,
    "internal": {"type": "array", "items": _INT},
    "groups": {"type": "array", "items": _obj(
        {"degree": _INT, "node_mult": _INT, "markings": {"type": "array", "items": _INT}},
        ["degree", "node_mult"])},
    "has_internal": {"type": "boolean"},
}, ["alpha", "d0", "internal", "groups"])


def check(data, schema) -> None:
    """Raise SchemaViolation at the JSON pointer of the first (deepest-path) error."""
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: (-len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = errors[0]
        pointer = "".join(f"/{p}" for p in err.absolute_path)
        raise SchemaViolation(err.message, pointer)


def _load(data):
    return json.loads(data) if isinstance(data, (str, bytes)) else data


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- graphs ---------------------------------------------------------------------------

def graph_to_dict(g: DecoratedGraph) -> dict:
    verts = []
    for v in g.vertices:
        item = {"id": v.id, "label": v.label}
        if v.label == H:
            item["degree"] = v.h_degree
        verts.append(item)
    return {
        "schema_version": SCHEMA_VERSION,
        "n": g.n,
        "d": g.d,
        "vertices": verts,
        "edges": [{"p": e.p, "h": e.h, "degree": e.degree} for e in g.edges],
        "legs": [{"marking": m, "vertex": v} for m, v in g.legs],
    }


def graph_from_dict(data) -> DecoratedGraph:
    data = _load(data)
    check(data, GRAPH_SCHEMA)
    verts = tuple(Vertex(v["id"], v["label"], v.get("degree", 0) if v["label"] == H else None)
                  for v in data["vertices"])
    edges = tuple(Edge(e["p"], e["h"], e["degree"]) for e in data["edges"])
    legs = tuple((x["marking"], x["vertex"]) for x in data["legs"])
    return DecoratedGraph(data["n"], data["d"], verts, edges, legs)


# -- polynomials and moves --------------------------------------------------------------

def poly_to_dict(p: PoincarePoly) -> dict:
    return {"poly": p.to_list()}


def poly_from_dict(data) -> PoincarePoly:
    data = _load(data)
    check(data, POLY_SCHEMA)
    return PoincarePoly(tuple(data["poly"]))


def moves_to_dict(steps) -> dict:
    return {"schema_version": SCHEMA_VERSION, "moves": [s.to_dict() for s in steps]}


def moves_from_dict(data) -> list[MoveStep]:
    data = _load(data)
    check(data, MOVES_SCHEMA)
    return [MoveStep.from_dict(m) for m in data["moves"]]


# -- configurations ---------------------------------------------------------------------

def config_to_dict(cfg: TransversalConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n": cfg.n,
        "d": cfg.d,
        "components": [{"kind": c.kind, "degree": c.degree, "markings": list(c.markings),
                        "contacts": [{"mult": x.mult, "marking": x.marking} for x in c.contacts]}
                       for c in cfg.components],
        "nodes": [{"a": list(nd.a), "b": list(nd.b)} for nd in cfg.nodes],
    }


def config_from_dict(data) -> TransversalConfig:
    data = _load(data)
    check(data, CONFIG_SCHEMA)
    comps = tuple(Component(c["kind"], c["degree"], tuple(c.get("markings", ())),
                            tuple(Contact(x["mult"], x.get("marking")) for x in c.get("contacts", ())))
                  for c in data["components"])
    nodes = tuple(Node(tuple(nd["a"]), tuple(nd["b"])) for nd in data.get("nodes", ()))
    return TransversalConfig(data["n"], data["d"], comps, nodes)


def param_map_to_dict(pm: ParamMap) -> dict:
    return {"schema_version": SCHEMA_VERSION,
            "forms": [str(sympy.expand(f)) for f in pm.forms],
            "marked": [[str(a), str(b)] for a, b in pm.marked]}


def param_map_from_dict(data) -> ParamMap:
    data = _load(data)
    check(data, PARAM_MAP_SCHEMA)
    forms = tuple(_parse_form(f) for f in data["forms"])
    marked = tuple((Fraction(str(a)), Fraction(str(b))) for a, b in data.get("marked", ()))
    return ParamMap(forms, marked)


def _parse_form(text: str):
    if not re.fullmatch(r"[0-9zw+\-*/^() ]+", text):
        raise SchemaViolation("form may only use z, w, digits and arithmetic", "/forms")
    return sympy.expand(sympy.sympify(text.replace("^", "**"), locals={"z": Z, "w": W}))


def boundary_to_dict(cfg: BoundaryConfig) -> dict:
    return {"schema_version": SCHEMA_VERSION, "alpha": list(cfg.alpha), "d0": cfg.d0,
            "internal": list(cfg.internal), "has_internal": cfg.has_internal,
            "groups": [{"degree": g.degree, "node_mult": g.node_mult, "markings": list(g.markings)}
                       for g in cfg.groups]}


def boundary_from_dict(data) -> BoundaryConfig:
    data = _load(data)
    check(data, BOUNDARY_SCHEMA)
    groups = tuple(Group(g["degree"], g["node_mult"], tuple(g.get("markings", ()))) for g in data["groups"])
    return BoundaryConfig(tuple(data["alpha"]), data["d0"], tuple(data["internal"]), groups,
                          data.get("has_internal", True))


# -- DOT ------------------------------------------------------------------------------

def to_dot(g: DecoratedGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        if v.label == P:
            lines.append(f'  v{v.id} [shape=circle, label="P"];')
        else:
            lines.append(f'  v{v.id} [shape=box, label="H,{v.h_degree}"];')
    for e in g.edges:
        lines.append(f'  v{e.p} -- v{e.h} [label="{e.degree}"];')
    for m, v in g.legs:
        lines.append(f'  leg{m} [shape=plaintext, label="{m}"];')
        lines.append(f"  v{v} -- leg{m} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_dot(graphs: dict, edges, levels: dict | None = None) -> str:
    """Hasse diagram; ``graphs`` maps canonical keys to graphs, ``edges`` are (high, low) keys."""
    names = {k: f"g{i}" for i, k in enumerate(sorted(graphs))}
    lines = ["digraph hasse {", "  rankdir=TB;"]
    for k, g in sorted(graphs.items()):
        label = repr(g).replace('"', "'")
        if levels is not None:
            label += f" L={levels[k]}"
        lines.append(f'  {names[k]} [shape=box, label="{label}"];')
    for hi, lo in edges:
        lines.append(f"  {names[hi]} -> {names[lo]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
