"""Parsing and serialization of berkline input documents.

A document is a JSON object with a ``field`` block and exactly one payload
block.  All rationals travel as "num/den" strings (plain integers are also
accepted) so no float ever enters the toolchain; see docs/formats.md for the
full schema.  Parsing is strict: unknown keys, wrong shapes and inexact
numbers raise :class:`SchemaError` with the offending path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .curves import CurveModel, TreeOfDisks, curve_model, tree_of_disks, ultra
from .errors import SchemaError
from .field import PADIC, PUISEUX, FieldSpec, Scalar, as_fraction
from .fsderiv import Domain, SeriesMap, series_map
from .points import Poly
from .tropic import Interval, TropicalPolygon
from .zalcman import SampledFunction, sampled_function

PAYLOAD_KINDS = (
    "series",
    "map",
    "tropical",
    "tree-of-disks",
    "curve-model",
    "sample-function",
    "map-family",
    "tuples",
)


@dataclass
class Document:
    spec: FieldSpec
    kind: str
    payload: Any
    raw: dict


def _fail(path: str, message: str) -> SchemaError:
    return SchemaError(f"{path}: {message}")


def _rational(node: Any, path: str) -> Fraction:
    if isinstance(node, bool) or not isinstance(node, (int, str)):
        raise _fail(path, f"expected a rational as int or 'num/den' string, got {node!r}")
    try:
        return as_fraction(node)
    except (ValueError, ZeroDivisionError) as exc:
        raise _fail(path, f"bad rational {node!r}: {exc}") from None


def _int(node: Any, path: str) -> int:
    if isinstance(node, bool) or not isinstance(node, int):
        raise _fail(path, f"expected an integer, got {node!r}")
    return node


def parse_field_spec(node: Any, path: str = "field") -> FieldSpec:
    if not isinstance(node, dict):
        raise _fail(path, "expected an object")
    unknown = set(node) - {"backend", "p", "value_group", "numeric_base"}
    if unknown:
        raise _fail(path, f"unknown keys {sorted(unknown)}")
    backend = node.get("backend")
    if backend not in (PADIC, PUISEUX):
        raise _fail(f"{path}.backend", f"expected 'padic' or 'puiseux-q', got {backend!r}")
    p = node.get("p")
    if backend == PADIC:
        p = _int(p, f"{path}.p")
    vg = node.get("value_group")
    if vg is not None and vg != "Q":
        vg = _int(vg, f"{path}.value_group")
    base = node.get("numeric_base")
    if base is not None:
        base = _rational(base, f"{path}.numeric_base")
    try:
        return FieldSpec(backend, p, vg, base)
    except ValueError as exc:
        raise _fail(path, str(exc)) from None


def parse_scalar(spec: FieldSpec, node: Any, path: str) -> Scalar:
    if spec.backend == PADIC:
        return spec.scalar(_rational(node, path))
    if isinstance(node, (int, str)):
        return spec.scalar(_rational(node, path))
    if isinstance(node, list):
        terms = []
        for i, pair in enumerate(node):
            if not isinstance(pair, list) or len(pair) != 2:
                raise _fail(f"{path}[{i}]", "expected an [exponent, coefficient] pair")
            terms.append((_rational(pair[0], f"{path}[{i}][0]"), _rational(pair[1], f"{path}[{i}][1]")))
        return spec.from_terms(terms)
    raise _fail(path, f"expected a rational or a term list, got {node!r}")


def encode_scalar(x: Scalar) -> Any:
    from .field import PadicScalar, PuiseuxScalar

    if isinstance(x, PadicScalar):
        return str(x.value)
    assert isinstance(x, PuiseuxScalar)
    num, den = x.canonical()
    if den != ((Fraction(0), Fraction(1)),):
        raise ValueError("only polynomial puiseux values serialize")
    return [[str(q), str(c)] for q, c in num]


def parse_poly(spec: FieldSpec, node: Any, path: str) -> Poly:
    if not isinstance(node, list):
        raise _fail(path, "expected a list of [exponent, coefficient] pairs")
    coeffs: dict[int, Scalar] = {}
    for i, pair in enumerate(node):
        if not isinstance(pair, list) or len(pair) != 2:
            raise _fail(f"{path}[{i}]", "expected an [exponent, coefficient] pair")
        n = _int(pair[0], f"{path}[{i}][0]")
        if n in coeffs:
            raise _fail(f"{path}[{i}]", f"duplicate exponent {n}")
        c = parse_scalar(spec, pair[1], f"{path}[{i}][1]")
        if not c.is_zero:
            coeffs[n] = c
    return Poly.from_dict(spec, coeffs)


def encode_poly(p: Poly) -> Any:
    return [[n, encode_scalar(c)] for n, c in p.terms]


def _parse_domain(node: Any, path: str) -> Domain | None:
    if node is None:
        return None
    if not isinstance(node, dict) or len(node) != 1:
        raise _fail(path, "expected {'disk': logval} or {'annulus': [lo, hi]}")
    from .field import AbsValue

    if "disk" in node:
        return Domain.disk(AbsValue.of(_rational(node["disk"], f"{path}.disk")))
    if "annulus" in node:
        pair = node["annulus"]
        if not isinstance(pair, list) or len(pair) != 2:
            raise _fail(f"{path}.annulus", "expected [lo, hi] log-radii")
        lo = AbsValue.of(_rational(pair[0], f"{path}.annulus[0]"))
        hi = AbsValue.of(_rational(pair[1], f"{path}.annulus[1]"))
        return Domain.annulus(lo, hi)
    raise _fail(path, "expected {'disk': ...} or {'annulus': ...}")


def parse_map(spec: FieldSpec, node: Any, path: str) -> SeriesMap:
    if not isinstance(node, dict):
        raise _fail(path, "expected an object")
    unknown = set(node) - {"coordinates", "domain"}
    if unknown:
        raise _fail(path, f"unknown keys {sorted(unknown)}")
    coords_node = node.get("coordinates")
    if not isinstance(coords_node, list) or len(coords_node) < 2:
        raise _fail(f"{path}.coordinates", "expected at least two coordinate polynomials")
    coords = [parse_poly(spec, c, f"{path}.coordinates[{i}]") for i, c in enumerate(coords_node)]
    return series_map(coords, _parse_domain(node.get("domain"), f"{path}.domain"))


def _parse_bound(node: Any, path: str) -> Fraction | None:
    if node is None:
        return None
    return _rational(node, path)


def parse_tropical(node: Any, path: str) -> TropicalPolygon:
    if not isinstance(node, dict):
        raise _fail(path, "expected an object")
    terms_node = node.get("terms")
    if not isinstance(terms_node, list) or not terms_node:
        raise _fail(f"{path}.terms", "expected a nonempty list of [exponent, logval] pairs")
    terms = []
    for i, pair in enumerate(terms_node):
        if not isinstance(pair, list) or len(pair) != 2:
            raise _fail(f"{path}.terms[{i}]", "expected an [exponent, logval] pair")
        terms.append((_int(pair[0], f"{path}.terms[{i}][0]"), _rational(pair[1], f"{path}.terms[{i}][1]")))
    dom = node.get("domain")
    if not isinstance(dom, list) or len(dom) != 2:
        raise _fail(f"{path}.domain", "expected [lo, hi] with null for an infinite endpoint")
    interval = Interval(_parse_bound(dom[0], f"{path}.domain[0]"), _parse_bound(dom[1], f"{path}.domain[1]"))
    try:
        return TropicalPolygon(tuple(terms), interval)
    except ValueError as exc:
        raise _fail(path, str(exc)) from None


def _parse_ultra(node: Any, path: str):
    if isinstance(node, (int, str)):
        return ultra(_rational(node, path))
    if isinstance(node, list):
        pairs = []
        for i, pair in enumerate(node):
            if not isinstance(pair, list) or len(pair) != 2:
                raise _fail(f"{path}[{i}]", "expected a [magnitude, coefficient] pair")
            pairs.append((_rational(pair[0], f"{path}[{i}][0]"), _rational(pair[1], f"{path}[{i}][1]")))
        return ultra(pairs)
    raise _fail(path, f"expected a rational or [magnitude, coefficient] pairs, got {node!r}")


def parse_tree(node: Any, path: str) -> TreeOfDisks:
    if not isinstance(node, dict):
        raise _fail(path, "expected an object")
    disks = node.get("disks")
    if not isinstance(disks, list) or not all(isinstance(d, str) for d in disks):
        raise _fail(f"{path}.disks", "expected a list of disk names")
    edges_node = node.get("edges", [])
    edges = []
    for i, e in enumerate(edges_node):
        if not isinstance(e, list) or len(e) != 4:
            raise _fail(f"{path}.edges[{i}]", "expected [diskA, coordA, diskB, coordB]")
        edges.append(
            (e[0], _parse_ultra(e[1], f"{path}.edges[{i}][1]"), e[2], _parse_ultra(e[3], f"{path}.edges[{i}][3]"))
        )
    marks_node = node.get("marks", {})
    if not isinstance(marks_node, dict):
        raise _fail(f"{path}.marks", "expected an object of name -> [disk, coord]")
    marks = {}
    for name in sorted(marks_node):
        entry = marks_node[name]
        if not isinstance(entry, list) or len(entry) != 2:
            raise _fail(f"{path}.marks.{name}", "expected [disk, coord]")
        marks[name] = (entry[0], _parse_ultra(entry[1], f"{path}.marks.{name}[1]"))
    try:
        return tree_of_disks(disks, edges, marks)
    except ValueError as exc:
        raise _fail(path, str(exc)) from None


def _parse_attachment(node: Any, path: str):
    if not isinstance(node, list) or not node:
        raise _fail(path, "expected ['vertex', name] or ['edge', index, offset]")
    if node[0] == "vertex" and len(node) == 2:
        return ("vertex", node[1])
    if node[0] == "edge" and len(node) == 3:
        return ("edge", _int(node[1], f"{path}[1]"), _rational(node[2], f"{path}[2]"))
    raise _fail(path, f"bad attachment {node!r}")


def parse_curve_model(node: Any, path: str) -> CurveModel:
    if not isinstance(node, dict):
        raise _fail(path, "expected an object")
    unknown = set(node) - {"vertices", "edges", "punctures", "boundary", "disks"}
    if unknown:
        raise _fail(path, f"unknown keys {sorted(unknown)}")
    vertices = []
    for i, v in enumerate(node.get("vertices", [])):
        if not isinstance(v, list) or not 1 <= len(v) <= 3:
            raise _fail(f"{path}.vertices[{i}]", "expected [name, genus?, extra?]")
        name = v[0]
        genus = _int(v[1], f"{path}.vertices[{i}][1]") if len(v) > 1 else 0
        extra = _int(v[2], f"{path}.vertices[{i}][2]") if len(v) > 2 else 0
        vertices.append((name, genus, extra))
    edges = []
    for i, e in enumerate(node.get("edges", [])):
        if not isinstance(e, list) or len(e) != 3:
            raise _fail(f"{path}.edges[{i}]", "expected [u, v, length]")
        edges.append((e[0], e[1], _rational(e[2], f"{path}.edges[{i}][2]")))
    punctures = [
        _parse_attachment(a, f"{path}.punctures[{i}]") for i, a in enumerate(node.get("punctures", []))
    ]
    disks = []
    for i, d in enumerate(node.get("disks", [])):
        if not isinstance(d, list) or len(d) != 2:
            raise _fail(f"{path}.disks[{i}]", "expected [tag, attachment]")
        disks.append((d[0], _parse_attachment(d[1], f"{path}.disks[{i}][1]")))
    boundary = node.get("boundary", [])
    try:
        return curve_model(vertices, edges, punctures, boundary, disks)
    except Exception as exc:
        raise _fail(path, str(exc)) from None


def parse_sample_function(spec: FieldSpec, node: Any, path: str) -> SampledFunction:
    if not isinstance(node, dict):
        raise _fail(path, "expected an object")
    pts = node.get("points")
    vals = node.get("values")
    if not isinstance(pts, list) or not isinstance(vals, list) or len(pts) != len(vals):
        raise _fail(path, "expected matching 'points' and 'values' lists")
    points = [parse_scalar(spec, p, f"{path}.points[{i}]") for i, p in enumerate(pts)]
    values = [_rational(v, f"{path}.values[{i}]") for i, v in enumerate(vals)]
    try:
        return sampled_function(points, values)
    except ValueError as exc:
        raise _fail(path, str(exc)) from None


def parse_document(text: str) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise SchemaError("top level: expected an object")
    if "field" not in raw:
        raise SchemaError("top level: missing 'field' block")
    spec = parse_field_spec(raw["field"])
    kinds = [k for k in raw if k in PAYLOAD_KINDS]
    extra = [k for k in raw if k not in PAYLOAD_KINDS and k != "field"]
    if extra:
        raise SchemaError(f"top level: unknown keys {sorted(extra)}")
    if len(kinds) > 1:
        raise SchemaError(f"top level: more than one payload block {sorted(kinds)}")
    if not kinds:
        return Document(spec, "field-only", None, raw)
    kind = kinds[0]
    node = raw[kind]
    if kind == "series":
        if not isinstance(node, dict) or set(node) - {"terms"}:
            raise SchemaError("series: expected {'terms': [[n, coeff], ...]}")
        payload: Any = parse_poly(spec, node.get("terms"), "series.terms")
    elif kind == "map":
        payload = parse_map(spec, node, "map")
    elif kind == "tropical":
        payload = parse_tropical(node, "tropical")
    elif kind == "tree-of-disks":
        payload = parse_tree(node, "tree-of-disks")
    elif kind == "curve-model":
        payload = parse_curve_model(node, "curve-model")
    elif kind == "sample-function":
        payload = parse_sample_function(spec, node, "sample-function")
    elif kind == "map-family":
        if not isinstance(node, dict) or set(node) - {"maps", "witnesses"}:
            raise SchemaError("map-family: expected {'maps': [...], 'witnesses': [...]}")
        maps_node = node.get("maps")
        if not isinstance(maps_node, list) or not maps_node:
            raise SchemaError("map-family.maps: expected a nonempty list")
        maps = [parse_map(spec, m, f"map-family.maps[{i}]") for i, m in enumerate(maps_node)]
        wit_node = node.get("witnesses")
        witnesses = None
        if wit_node is not None:
            if not isinstance(wit_node, list) or len(wit_node) != len(maps):
                raise SchemaError("map-family.witnesses: one witness per map")
            witnesses = [
                parse_scalar(spec, w, f"map-family.witnesses[{i}]") for i, w in enumerate(wit_node)
            ]
        payload = (maps, witnesses)
    else:  # tuples
        if not isinstance(node, dict) or set(node) - {"x", "y"}:
            raise SchemaError("tuples: expected {'x': [...], 'y': [...]}")
        xs = node.get("x")
        ys = node.get("y")
        if not isinstance(xs, list) or not isinstance(ys, list):
            raise SchemaError("tuples: 'x' and 'y' must be coordinate lists")
        x = [parse_scalar(spec, c, f"tuples.x[{i}]") for i, c in enumerate(xs)]
        y = [parse_scalar(spec, c, f"tuples.y[{i}]") for i, c in enumerate(ys)]
        payload = (x, y)
    return Document(spec, kind, payload, raw)


def load_document(path: str) -> Document:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_document(handle.read())


def canonical_json(raw: dict) -> str:
    """Byte-stable serialization used for round-trip checks."""
    return json.dumps(raw, sort_keys=True, separators=(",", ":")) + "\n"
