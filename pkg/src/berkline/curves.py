"""Combinatorial curve models and tree-of-disks spaces.

A curve model is a finite metric graph (the skeleton) with genus marks,
declared extra non-discal directions, punctures, boundary vertices and
optional disk components hanging off attachment points.  The genus of a
projective model is the first Betti number of the skeleton plus the vertex
genera; nodes are the vertices with positive genus, at least three non-discal
directions, or on the boundary.

Tree-of-disks spaces are unit-disk components glued at rigid points.  The
in-disk coordinates are finite rational combinations of abstract unit-disk
elements carrying *declared positive rational magnitudes*; differences are
measured by the largest surviving magnitude, which is an ultrametric.  The
two Kobayashi-type semi-distances are computed over chains through the
attachment graph:

    dck: minimize the sum of the in-disk step sizes,
    d:   minimize the largest in-disk step size.

Chains are enumerated as edge-simple trails, which is exhaustive: a chain
revisiting an attachment can be spliced at the repeated edge without
increasing either the sum or the max.  Because the steps are summed, the
distances are exact nonnegative rationals (math.inf when no chain exists)
rather than symbolic magnitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    EmptySkeleton,
    InconsistentModel,
    NoNodes,
    NotHyperbolic,
    NotProjective,
    UnknownMark,
)
from .field import as_fraction

# ---------------------------------------------------------------------------
# Euler characteristic


def euler_characteristic(genus: int, punctures: int) -> int:
    """chi = 2 - 2g - (number of punctures)."""
    if genus < 0 or punctures < 0:
        raise ValueError("genus and puncture count must be nonnegative")
    return 2 - 2 * genus - punctures


# ---------------------------------------------------------------------------
# In-disk coordinates with declared rational magnitudes


@dataclass(frozen=True)
class UltraScalar:
    """A finite rational combination of abstract unit-disk elements, each
    carrying a declared magnitude in (0, 1] cap Q.

    The magnitude of a combination is the largest magnitude with a nonzero
    coefficient; subtraction cancels termwise, so the induced distance
    |x - y| is an exact rational ultrametric.  Plain rationals embed with
    magnitude 1.
    """

    terms: tuple[tuple[Fraction, Fraction], ...]  # (magnitude, coefficient)

    def __post_init__(self) -> None:
        mags = [m for m, _ in self.terms]
        if any(m <= 0 for m in mags):
            raise ValueError("magnitudes must be positive rationals")
        if len(set(mags)) != len(mags):
            raise ValueError("duplicate magnitudes")
        if any(c == 0 for _, c in self.terms):
            raise ValueError("zero coefficients are not stored")

    def __sub__(self, other: "UltraScalar") -> "UltraScalar":
        acc = dict(self.terms)
        for m, c in other.terms:
            s = acc.get(m, Fraction(0)) - c
            if s == 0:
                acc.pop(m, None)
            else:
                acc[m] = s
        return UltraScalar(tuple(sorted(acc.items())))

    def magnitude(self) -> Fraction:
        return max((m for m, _ in self.terms), default=Fraction(0))


UltraLike = Union["UltraScalar", int, str, Fraction, Sequence]


def ultra(value: UltraLike) -> UltraScalar:
    """Coerce to an in-disk coordinate.

    Rationals embed as residue-field constants (magnitude 1 unless zero);
    a sequence of (magnitude, coefficient) pairs declares the terms.
    """
    if isinstance(value, UltraScalar):
        return value
    if isinstance(value, (int, str, Fraction)):
        c = as_fraction(value)
        if c == 0:
            return UltraScalar(())
        return UltraScalar(((Fraction(1), c),))
    acc: dict[Fraction, Fraction] = {}
    for m, c in value:
        mf, cf = as_fraction(m), as_fraction(c)
        acc[mf] = acc.get(mf, Fraction(0)) + cf
    return UltraScalar(tuple(sorted((m, c) for m, c in acc.items() if c != 0)))


def ultra_distance(x: UltraLike, y: UltraLike) -> Fraction:
    return (ultra(x) - ultra(y)).magnitude()


# ---------------------------------------------------------------------------
# Tree of disks


@dataclass(frozen=True)
class TreeOfDisks:
    """Unit disks glued at rigid attachment coordinates, with named marks."""

    disks: tuple[str, ...]
    edges: tuple[tuple[str, UltraScalar, str, UltraScalar], ...]
    marks: tuple[tuple[str, str, UltraScalar], ...]

    def __post_init__(self) -> None:
        names = set(self.disks)
        if len(names) != len(self.disks):
            raise ValueError("duplicate disk names")
        for a, ca, b, cb in self.edges:
            if a not in names or b not in names:
                raise ValueError(f"attachment between unknown disks {a!r}, {b!r}")
            if ca.magnitude() > 1 or cb.magnitude() > 1:
                raise ValueError("attachment coordinates must have magnitude <= 1")
        for mark, disk, coord in self.marks:
            if disk not in names:
                raise ValueError(f"mark {mark!r} on unknown disk {disk!r}")
            if coord.magnitude() > 1:
                raise ValueError("marked coordinates must have magnitude <= 1")

    def mark(self, name: str) -> tuple[str, UltraScalar]:
        for mark, disk, coord in self.marks:
            if mark == name:
                return disk, coord
        raise UnknownMark(f"no marked point named {name!r}")


def tree_of_disks(
    disks: Iterable[str],
    edges: Iterable[tuple[str, UltraLike, str, UltraLike]],
    marks: Mapping[str, tuple[str, UltraLike]],
) -> TreeOfDisks:
    return TreeOfDisks(
        tuple(disks),
        tuple((a, ultra(ca), b, ultra(cb)) for a, ca, b, cb in edges),
        tuple((name, disk, ultra(coord)) for name, (disk, coord) in marks.items()),
    )


Cost = Union[Fraction, float]  # exact rational, or math.inf for "no chain"

INFINITE: float = math.inf


def _chain_extremum(t: TreeOfDisks, x: str, y: str, budget: int | None, mode: str) -> Cost:
    disk_x, coord_x = t.mark(x)
    disk_y, coord_y = t.mark(y)
    adj: dict[str, list[tuple[int, UltraScalar, str, UltraScalar]]] = {d: [] for d in t.disks}
    for idx, (a, ca, b, cb) in enumerate(t.edges):
        adj[a].append((idx, ca, b, cb))
        adj[b].append((idx, cb, a, ca))
    best: list[Cost] = [INFINITE]

    def combine(acc: Fraction, step: Fraction) -> Fraction:
        return acc + step if mode == "sum" else max(acc, step)

    def dfs(disk: str, entry: UltraScalar, used: frozenset[int], acc: Fraction, visits: int) -> None:
        if acc >= best[0]:
            return
        if disk == disk_y:
            total = combine(acc, (entry - coord_y).magnitude())
            if total < best[0]:
                best[0] = total
        if budget is not None and visits >= budget:
            return
        options = []
        for idx, here, other, there in adj[disk]:
            if idx in used:
                continue
            options.append(((entry - here).magnitude(), idx, other, there))
        options.sort(key=lambda o: o[0])
        for step, idx, other, there in options:
            dfs(other, there, used | {idx}, combine(acc, step), visits + 1)

    dfs(disk_x, coord_x, frozenset(), Fraction(0), 1)
    return best[0]


def dck_tree(t: TreeOfDisks, x: str, y: str, budget: int | None = None) -> Cost:
    """The Kobayashi-type semi-distance: infimum over chains of the sum of
    in-disk step sizes.  Exact rational; math.inf when no chain joins the
    marked points.  ``budget`` optionally caps the chain length."""
    return _chain_extremum(t, x, y, budget, "sum")


def d_tree(t: TreeOfDisks, x: str, y: str, budget: int | None = None) -> Cost:
    """The ultrametric variant: infimum over chains of the largest step."""
    return _chain_extremum(t, x, y, budget, "max")


def chained_disk_family(n_max: int) -> tuple[TreeOfDisks, str, str]:
    """The two-marked-point space exhibiting non-equivalence of the two
    semi-distances: one direct gluing of step 1 plus, for every n = 3..n_max,
    a chain of n disks with steps of magnitude 1/n.

    dck(x, y) = 1 for every truncation, while d(x, y) = 1/n_max.
    """
    if n_max < 3:
        raise ValueError("the family starts at n = 3")
    disks = ["D", "X1", "Y"]
    edges: list[tuple[str, UltraLike, str, UltraLike]] = [
        ("D", 0, "X1", 0),  # the point x
        ("D", 1, "Y", 0),  # the point y
    ]
    for n in range(3, n_max + 1):
        step = [(Fraction(1, n), 1)]
        prev = "X1"
        prev_coord: UltraLike = step
        for l in range(2, n):
            name = f"X{n}_{l}"
            disks.append(name)
            edges.append((prev, prev_coord, name, 0))
            prev = name
            prev_coord = step
        edges.append((prev, prev_coord, "Y", step))
    marks = {"x": ("X1", 0), "y": ("Y", 0)}
    return tree_of_disks(disks, edges, marks), "x", "y"


# ---------------------------------------------------------------------------
# Curve models

Attachment = tuple  # ("vertex", name) | ("edge", index, offset)


@dataclass(frozen=True)
class VertexData:
    name: str
    genus: int = 0
    extra_directions: int = 0  # declared annular/puncture directions beyond the graph

    def __post_init__(self) -> None:
        if self.genus < 0 or self.extra_directions < 0:
            raise ValueError("genus and direction counts are nonnegative")


@dataclass(frozen=True)
class EdgeData:
    u: str
    v: str
    length: Fraction

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise ValueError("edge lengths must be positive")


@dataclass(frozen=True)
class CurveModel:
    """A metric-graph skeleton with genus marks, punctures, boundary and
    hanging disk components."""

    vertices: tuple[VertexData, ...]
    edges: tuple[EdgeData, ...] = ()
    punctures: tuple[Attachment, ...] = ()
    boundary: frozenset = frozenset()
    disks: tuple[tuple[str, Attachment], ...] = ()

    def __post_init__(self) -> None:
        names = [v.name for v in self.vertices]
        if len(set(names)) != len(names):
            raise InconsistentModel("duplicate vertex names")
        known = set(names)
        for e in self.edges:
            if e.u not in known or e.v not in known:
                raise InconsistentModel(f"edge {e.u!r}-{e.v!r} touches unknown vertices")
        for att in self.punctures:
            self._check_attachment(att)
        for tag, att in self.disks:
            self._check_attachment(att)
        if not self.boundary <= known:
            raise InconsistentModel("boundary vertices must be vertices")

    def _check_attachment(self, att: Attachment) -> None:
        if att[0] == "vertex":
            if att[1] not in {v.name for v in self.vertices}:
                raise InconsistentModel(f"attachment at unknown vertex {att[1]!r}")
        elif att[0] == "edge":
            idx, offset = att[1], as_fraction(att[2])
            if not 0 <= idx < len(self.edges):
                raise InconsistentModel(f"attachment on unknown edge {idx}")
            if not 0 < offset < self.edges[idx].length:
                raise InconsistentModel("edge attachment offset outside the edge")
        else:
            raise InconsistentModel(f"unknown attachment kind {att[0]!r}")

    @property
    def is_projective(self) -> bool:
        return not self.punctures and not self.boundary

    def vertex(self, name: str) -> VertexData:
        for v in self.vertices:
            if v.name == name:
                return v
        raise UnknownMark(f"no vertex named {name!r}")

    def disk_attachment(self, tag: str) -> Attachment:
        for t, att in self.disks:
            if t == tag:
                return att
        raise UnknownMark(f"no disk component tagged {tag!r}")


def curve_model(
    vertices: Iterable[VertexData | tuple],
    edges: Iterable[EdgeData | tuple] = (),
    punctures: Iterable[Attachment] = (),
    boundary: Iterable[str] = (),
    disks: Iterable[tuple[str, Attachment]] = (),
) -> CurveModel:
    vs = tuple(v if isinstance(v, VertexData) else VertexData(*v) for v in vertices)
    es = tuple(
        e if isinstance(e, EdgeData) else EdgeData(e[0], e[1], as_fraction(e[2])) for e in edges
    )
    return CurveModel(vs, es, tuple(punctures), frozenset(boundary), tuple(disks))


@dataclass(frozen=True)
class _NormalizedGraph:
    """The skeleton with punctures subdivided onto synthetic vertices."""

    genus: dict
    extra: dict
    punctures_at: dict
    edges: list  # (u, v, length)


def _normalize(m: CurveModel) -> _NormalizedGraph:
    genus = {v.name: v.genus for v in m.vertices}
    extra = {v.name: v.extra_directions for v in m.vertices}
    punct = {v.name: 0 for v in m.vertices}
    by_edge: dict[int, list[Fraction]] = {}
    for att in m.punctures:
        if att[0] == "vertex":
            punct[att[1]] += 1
        else:
            by_edge.setdefault(att[1], []).append(as_fraction(att[2]))
    edges = []
    for idx, e in enumerate(m.edges):
        cuts = sorted(set(by_edge.get(idx, [])))
        prev, prev_off = e.u, Fraction(0)
        for off in cuts:
            name = f"{e.u}~{e.v}@{off}"
            genus[name] = 0
            extra[name] = 0
            punct[name] = sum(1 for o in by_edge.get(idx, []) if o == off)
            edges.append((prev, name, off - prev_off))
            prev, prev_off = name, off
        edges.append((prev, e.v, e.length - prev_off))
    return _NormalizedGraph(genus, extra, punct, edges)


def _components(names: Iterable[str], edges: Iterable[tuple]) -> int:
    parent = {n: n for n in names}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v, _ in edges:
        ra, rb = find(u), find(v)
        if ra != rb:
            parent[ra] = rb
    return len({find(n) for n in parent})


def total_genus(m: CurveModel) -> int:
    """First Betti number of the skeleton plus the vertex genera."""
    if not m.is_projective:
        raise NotProjective("genus is computed for projective models")
    if not m.vertices:
        return 0
    g = _normalize(m)
    betti = len(g.edges) - len(g.genus) + _components(g.genus, g.edges)
    return betti + sum(g.genus.values())


def _non_discal_counts(m: CurveModel) -> dict:
    g = _normalize(m)
    count = {n: g.extra[n] + g.punctures_at[n] for n in g.genus}
    for u, v, _ in g.edges:
        count[u] += 1
        count[v] += 1
    return count


def nodes(m: CurveModel) -> set:
    """Vertices with positive genus, >= 3 non-discal directions, or on the
    boundary (synthetic puncture vertices included)."""
    g = _normalize(m)
    counts = _non_discal_counts(m)
    out = set()
    for name in g.genus:
        if g.genus[name] > 0 or counts[name] >= 3 or name in m.boundary:
            out.add(name)
    return out


@dataclass(frozen=True)
class Classification:
    kind: str  # projective-line | tate-curve | good-reduction | one-node-with-loops | multi-node
    genus: int

    def __str__(self) -> str:
        if self.kind in ("projective-line", "tate-curve"):
            return self.kind
        return f"{self.kind}({self.genus})"


def classify(m: CurveModel) -> Classification:
    """Place a projective model in the skeleton/node taxonomy, enforcing the
    structural consistency constraints."""
    if not m.is_projective:
        raise NotProjective("classification applies to projective models")
    if not m.vertices:
        return Classification("projective-line", 0)
    g = _normalize(m)
    if _components(g.genus, g.edges) != 1:
        raise InconsistentModel("the skeleton of an irreducible curve is connected")
    degree = {n: 0 for n in g.genus}
    for u, v, _ in g.edges:
        degree[u] += 1
        degree[v] += 1
    for name, deg in degree.items():
        if deg <= 1 and g.genus[name] == 0:
            raise InconsistentModel(
                f"skeleton endpoint {name!r} must carry positive genus"
            )
    node_set = nodes(m)
    genus = total_genus(m)
    if not node_set:
        if any(d != 2 for d in degree.values()) or genus != 1:
            raise InconsistentModel("a nodeless nonempty skeleton must be a circle")
        return Classification("tate-curve", 1)
    if genus < 1:
        raise InconsistentModel("a model with nodes must have positive genus")
    if len(g.genus) == 1 and not g.edges:
        return Classification("good-reduction", genus)
    if len(node_set) == 1:
        return Classification("one-node-with-loops", genus)
    return Classification("multi-node", genus)


@dataclass(frozen=True)
class SkeletonSegment:
    """A maximal open segment of skeleton minus nodes; its closure adds the
    listed node ends (a circle when both ends are the same node)."""

    length: Fraction
    ends: tuple
    is_circle: bool


@dataclass(frozen=True)
class Decomposition:
    node_set: frozenset
    segments: tuple[SkeletonSegment, ...]
    open_disk_family: bool = True  # marker: infinitely many open unit disks

    @property
    def annulus_log_moduli(self) -> tuple[Fraction, ...]:
        """Each segment of length L corresponds to an annulus A(1, R) with
        log R = L."""
        return tuple(s.length for s in self.segments)


def decompose(m: CurveModel) -> Decomposition:
    """Split the skeleton into nodes and open segments."""
    node_set = nodes(m)
    if not node_set:
        raise NoNodes("decomposition needs at least one node")
    g = _normalize(m)
    idx_parent = list(range(len(g.edges)))

    def find(i: int) -> int:
        while idx_parent[i] != i:
            idx_parent[i] = idx_parent[idx_parent[i]]
            i = idx_parent[i]
        return i

    incident: dict[str, list[int]] = {}
    for i, (u, v, _) in enumerate(g.edges):
        incident.setdefault(u, []).append(i)
        incident.setdefault(v, []).append(i)
    for name, edge_ids in incident.items():
        if name in node_set:
            continue
        for other in edge_ids[1:]:
            ra, rb = find(edge_ids[0]), find(other)
            if ra != rb:
                idx_parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for i in range(len(g.edges)):
        groups.setdefault(find(i), []).append(i)
    segments = []
    for ids in groups.values():
        length = sum((g.edges[i][2] for i in ids), Fraction(0))
        ends = []
        for i in ids:
            u, v, _ = g.edges[i]
            for w in (u, v):
                if w in node_set:
                    ends.append(w)
        ends_t = tuple(sorted(ends))
        is_circle = len(ends_t) == 2 and ends_t[0] == ends_t[1]
        segments.append(SkeletonSegment(length, ends_t, is_circle))
    segments.sort(key=lambda s: (s.length, s.ends))
    return Decomposition(frozenset(node_set), tuple(segments))


SkeletonPoint = tuple  # ("vertex", name) | ("edge", index, offset)


def retract(m: CurveModel, x: tuple) -> SkeletonPoint:
    """The retraction to the skeleton: identity on skeleton points, the
    attachment point for hanging disk components."""
    if not m.vertices:
        raise EmptySkeleton("the model has no skeleton")
    kind = x[0]
    if kind == "vertex":
        m.vertex(x[1])
        return x
    if kind == "edge":
        m._check_attachment(x)
        return x
    if kind == "disk":
        return retract(m, m.disk_attachment(x[1]))
    raise UnknownMark(f"unknown point kind {kind!r}")


def dck_curve(m: CurveModel, x: tuple[str, UltraLike], y: tuple[str, UltraLike]) -> Cost:
    """The Kobayashi-type semi-distance between rigid points of disk
    components of a positive-genus model: the in-disk distance for points of
    the same component, infinite otherwise."""
    if not m.vertices:
        raise NotHyperbolic("empty skeleton: the semi-distance degenerates")
    tag_x, coord_x = x
    tag_y, coord_y = y
    m.disk_attachment(tag_x)
    m.disk_attachment(tag_y)
    if tag_x != tag_y:
        return INFINITE
    return ultra_distance(coord_x, coord_y)


# ---------------------------------------------------------------------------
# Star-shaped data


@dataclass(frozen=True)
class StarShapedData:
    """The combinatorial data of a one-node simply-connected domain: the
    genus of its residue curve and one annulus log-modulus per non-discal
    direction (all negative)."""

    genus: int
    log_moduli: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if any(r >= 0 for r in self.log_moduli):
            raise ValueError("annulus log-moduli must be negative")
        if self.genus == 0 and len(self.log_moduli) < 3:
            raise InconsistentModel(
                "the center must be a node: positive genus or >= 3 directions"
            )

    @property
    def direction_count(self) -> int:
        return len(self.log_moduli)
