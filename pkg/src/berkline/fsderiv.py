"""The non-Archimedean Fubini-Study derivative and its exact calculus.

A map into projective space is given by homogeneous polynomial coordinates
with no common factor.  Its derivative magnitude at a point z is

    max(1, |z|^2) * max_{i<j} |(f_i' f_j - f_j' f_i)(z)| / max_i |f_i(z)|^2,

evaluated exactly through the seminorm of the point.  Wronskian minors are
computed symbolically; derivative coefficients keep the backend magnitude of
the integer factors, so residue characteristic p is fully visible.

Disk images of affine polynomial maps are exact: the image of eta_{a,r} has
center f(a) and radius max_{i>=1} |q_i| r^i over the recentered coefficients,
which is the computational content of the diameter-transport identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    BackendMismatch,
    DomainViolation,
    InvalidGenerator,
    PoleHit,
    ZeroTuple,
)
from .field import ABS_ONE, ABS_ZERO, AbsValue, FieldSpec, Scalar, abs_max, unit_max
from .points import (
    DiskPoint,
    Poly,
    ProjPoint,
    coprime_certificate,
    eval_seminorm,
    poly_gcd,
    rigid,
    taylor_shift,
)

# ---------------------------------------------------------------------------
# Domains and maps


@dataclass(frozen=True)
class Domain:
    """A closed disk |T| <= outer or a closed annulus inner <= |T| <= outer."""

    outer: AbsValue
    inner: AbsValue | None = None  # None: a disk

    @staticmethod
    def disk(radius: AbsValue) -> "Domain":
        return Domain(radius)

    @staticmethod
    def annulus(inner: AbsValue, outer: AbsValue) -> "Domain":
        if not inner < outer:
            raise ValueError("annulus needs inner < outer")
        return Domain(outer, inner)

    def contains(self, x: DiskPoint) -> bool:
        n = x.norm()
        if n > self.outer:
            return False
        if self.inner is not None and n < self.inner:
            return False
        return True


UNIT_DISK = Domain.disk(ABS_ONE)


@dataclass(frozen=True)
class SeriesMap:
    """Homogeneous coordinates of a map into projective space.

    Construct through :func:`series_map`, which normalizes Laurent content
    and removes the common polynomial factor, so that vanishing of minors is
    detected canonically.
    """

    coords: tuple[Poly, ...]
    domain: Domain | None = None

    @property
    def spec(self) -> FieldSpec:
        return self.coords[0].spec

    @property
    def target_dim(self) -> int:
        return len(self.coords) - 1

    def proportional_to(self, other: "SeriesMap") -> bool:
        """Whether the two maps agree as maps into projective space."""
        if len(self.coords) != len(other.coords):
            return False
        for i in range(len(self.coords)):
            for j in range(i + 1, len(self.coords)):
                m = self.coords[i] * other.coords[j] - self.coords[j] * other.coords[i]
                if not m.is_zero:
                    return False
        return True


def _poly_divexact(a: Poly, b: Poly) -> Poly:
    lead_inv = b.terms[-1][1].inv()
    db = b.degree()
    out: dict[int, Scalar] = {}
    while not a.is_zero and a.degree() >= db:
        n, c = a.terms[-1]
        factor = c * lead_inv
        out[n - db] = factor
        a = a - b.shift_exp(n - db).scale(factor)
    if not a.is_zero:
        raise ValueError("inexact polynomial division")
    return Poly(b.spec, tuple(sorted(out.items())))


def series_map(coords: Sequence[Poly], domain: Domain | None = None) -> SeriesMap:
    """Build a reduced map from homogeneous (Laurent) polynomial coordinates."""
    coords = tuple(coords)
    if len(coords) < 2:
        raise ZeroTuple("a projective map needs at least two coordinates")
    spec = coords[0].spec
    for c in coords:
        if c.spec != spec:
            raise BackendMismatch("mixed backends in map coordinates")
    nonzero = [c for c in coords if not c.is_zero]
    if not nonzero:
        raise ZeroTuple("all coordinates vanish identically")
    shift = min(c.min_exp() for c in nonzero)
    if shift != 0:
        # common monomial content; removing it is a projective rescaling
        coords = tuple(c.shift_exp(-shift) for c in coords)
        nonzero = [c for c in coords if not c.is_zero]
    if not any(c.is_constant for c in nonzero) and not coprime_certificate(nonzero):
        g = nonzero[0]
        for c in nonzero[1:]:
            g = poly_gcd(g, c)
            if g.is_constant:
                break
        if not g.is_constant:
            coords = tuple(c if c.is_zero else _poly_divexact(c, g) for c in coords)
    return SeriesMap(coords, domain)


def identity_map(spec: FieldSpec, domain: Domain | None = None) -> SeriesMap:
    return series_map([Poly.constant(spec, spec.one()), Poly.coordinate(spec)], domain)


# ---------------------------------------------------------------------------
# The derivative


def _require_in_domain(f: SeriesMap, z: DiskPoint) -> None:
    if f.domain is not None and not f.domain.contains(z):
        raise DomainViolation(f"{z!r} outside the declared domain")


def wronskian_minors(f: SeriesMap) -> list[Poly]:
    derivs = [c.derivative() for c in f.coords]
    out = []
    for i in range(len(f.coords)):
        for j in range(i + 1, len(f.coords)):
            out.append(derivs[i] * f.coords[j] - derivs[j] * f.coords[i])
    return out


def fs_derivative(f: SeriesMap, z: DiskPoint) -> AbsValue:
    """Exact Fubini-Study derivative magnitude at a point of the line."""
    _require_in_domain(f, z)
    den = abs_max(eval_seminorm(c, z) for c in f.coords)
    if den.is_zero:
        raise DomainViolation("all homogeneous coordinates vanish at the point")
    num = abs_max(eval_seminorm(w, z) for w in wronskian_minors(f))
    zn = z.norm()
    return unit_max(zn * zn) * num / (den * den)


def fs_derivative_proj(f: SeriesMap, z: ProjPoint) -> AbsValue:
    """The derivative at a projective point; at infinity it is computed in
    the reciprocal chart, where the formula is the same by chart invariance."""
    aff = z.to_affine()
    if aff is not None:
        return fs_derivative(f, aff)
    flipped = pgl_apply([("invert",)], SeriesMap(f.coords, None))
    return fs_derivative(flipped, rigid(f.spec.zero()))


# ---------------------------------------------------------------------------
# Composition


def _zero_free_log_bound(g0: Poly, outer: AbsValue) -> bool:
    """Whether g0 has no zeros on the closed disk of the given radius (so its
    magnitude is constant there)."""
    if g0.is_zero:
        return False
    if g0.min_exp() > 0:
        return False
    if g0.is_constant:
        return True
    from .tropic import Interval, TropicalPolygon

    terms = []
    for n, c in g0.terms:
        v = c.abs()
        assert v.logval is not None
        terms.append((n, v.logval))
    polygon = TropicalPolygon(tuple(terms), Interval(None, None))
    segs = polygon.segments()
    if outer.logval is None:
        return True
    return all(s.left is None or s.left > outer.logval for s in segs[1:])


def compose(f: SeriesMap, g: SeriesMap) -> SeriesMap:
    """Exact composition f(g) for g a map into the line.

    Requires the image of g's declared domain to land in f's declared domain
    (checked exactly when both annotations are present); the composition is
    rejected with PoleHit when the chart denominator of g vanishes on g's
    domain, since the image would then not stay in one affine chart.
    """
    if g.target_dim != 1:
        raise DomainViolation("inner map must take values in the line")
    if f.spec != g.spec:
        raise BackendMismatch("composition over different backends")
    g0, g1 = g.coords
    if f.domain is not None and g.domain is not None:
        if not _zero_free_log_bound(g0, g.domain.outer):
            raise PoleHit("denominator coordinate vanishes on the inner domain")
        g0_mag = g0.coeff(0).abs()
        shilov = DiskPoint(f.spec.zero(), g.domain.outer)
        image_sup = eval_seminorm(g1, shilov) / g0_mag
        if image_sup > f.domain.outer:
            raise DomainViolation("image leaves the outer domain")
        if f.domain.inner is not None:
            if not _zero_free_log_bound(g1, g.domain.outer):
                raise PoleHit("image meets the puncture of the outer domain")
            if g1.coeff(0).abs() / g0_mag < f.domain.inner:
                raise DomainViolation("image dips below the inner radius")
    plain = _common_plain(f.coords)
    d = max(c.degree() for c in plain if not c.is_zero)
    powers0 = [Poly.constant(f.spec, f.spec.one())]
    powers1 = [Poly.constant(f.spec, f.spec.one())]
    for _ in range(d):
        powers0.append(powers0[-1] * g0)
        powers1.append(powers1[-1] * g1)
    new_coords = []
    for c in plain:
        acc = Poly(f.spec, ())
        for j, a in c.terms:
            acc = acc + (powers1[j] * powers0[d - j]).scale(a)
        new_coords.append(acc)
    return series_map(new_coords, g.domain)


def _common_plain(coords: Sequence[Poly]) -> list[Poly]:
    """Shift all coordinates by one common power of T so every entry is a
    plain polynomial (a projective rescaling away from 0)."""
    shift = min(min(0, c.min_exp()) for c in coords if not c.is_zero)
    if shift == 0:
        return list(coords)
    return [c.shift_exp(-shift) for c in coords]


def sub_linear(p: Poly, scale: Scalar, offset: Scalar) -> Poly:
    """P(scale*T + offset), exactly (plain polynomials)."""
    shifted = taylor_shift(p, offset)
    out: dict[int, Scalar] = {}
    for n, c in shifted.terms:
        factor = p.spec.one()
        for _ in range(n):
            factor = factor * scale
        scaled = c * factor
        if not scaled.is_zero:
            out[n] = scaled
    return Poly(p.spec, tuple(sorted(out.items())))


def rescale_map(f: SeriesMap, scale: Scalar, offset: Scalar, domain: Domain | None) -> SeriesMap:
    """The reparametrized map z -> f(offset + scale*z)."""
    coords = [sub_linear(c, scale, offset) for c in _common_plain(f.coords)]
    return series_map(coords, domain)


# ---------------------------------------------------------------------------
# PGL(2, k°) words

Generator = tuple


def _validate_generator(gen: Generator, spec: FieldSpec) -> None:
    kind = gen[0]
    if kind == "scale":
        a: Scalar = gen[1]
        if a.abs() != ABS_ONE:
            raise InvalidGenerator("scaling parameter must have magnitude 1")
    elif kind == "translate":
        b: Scalar = gen[1]
        if b.abs() > ABS_ONE:
            raise InvalidGenerator("translation parameter must have magnitude <= 1")
    elif kind != "invert":
        raise InvalidGenerator(f"unknown generator {kind!r}")


def _word_matrix(word: Iterable[Generator], spec: FieldSpec) -> tuple[Scalar, Scalar, Scalar, Scalar]:
    one, zero = spec.one(), spec.zero()
    a, b, c, d = one, zero, zero, one
    for gen in word:
        _validate_generator(gen, spec)
        if gen[0] == "scale":
            m = (gen[1], zero, zero, one)
        elif gen[0] == "translate":
            m = (one, gen[1], zero, one)
        else:
            m = (zero, one, one, zero)
        a, b, c, d = (
            a * m[0] + b * m[2],
            a * m[1] + b * m[3],
            c * m[0] + d * m[2],
            c * m[1] + d * m[3],
        )
    return a, b, c, d


def pgl_apply(word: Sequence[Generator], f: SeriesMap) -> SeriesMap:
    """f composed with the unit Moebius map of the word (first generator is
    the outermost factor, so the last one acts on the variable first)."""
    a, b, c, d = _word_matrix(word, f.spec)
    plain = _common_plain(f.coords)
    deg = max(p.degree() for p in plain if not p.is_zero)
    num = Poly.from_dict(f.spec, {0: b, 1: a})  # a*T + b
    den = Poly.from_dict(f.spec, {0: d, 1: c})  # c*T + d
    pow_num = [Poly.constant(f.spec, f.spec.one())]
    pow_den = [Poly.constant(f.spec, f.spec.one())]
    for _ in range(deg):
        pow_num.append(pow_num[-1] * num)
        pow_den.append(pow_den[-1] * den)
    out = []
    for p in plain:
        acc = Poly(f.spec, ())
        for j, coeff in p.terms:
            acc = acc + (pow_num[j] * pow_den[deg - j]).scale(coeff)
        out.append(acc)
    return series_map(out, f.domain)


def pgl_point(word: Sequence[Generator], x: DiskPoint | ProjPoint) -> ProjPoint:
    """The image of a point of the line under the Moebius map of the word."""
    current: ProjPoint = x if isinstance(x, ProjPoint) else ProjPoint.affine(x)
    spec = current.point.spec
    for gen in reversed(list(word)):
        _validate_generator(gen, spec)
        kind = gen[0]
        if current.is_infinity:
            if kind == "invert":
                current = ProjPoint.affine(rigid(spec.zero()))
            continue
        aff = current.to_affine()
        assert aff is not None
        if kind == "scale":
            a: Scalar = gen[1]
            current = ProjPoint.affine(DiskPoint(a * aff.center, a.abs() * aff.radius))
        elif kind == "translate":
            current = ProjPoint.affine(DiskPoint(aff.center + gen[1], aff.radius))
        else:
            ca = aff.center.abs()
            if ca > aff.radius:
                inv_center = aff.center.inv()
                current = ProjPoint.affine(DiskPoint(inv_center, aff.radius / (ca * ca)))
            elif not aff.radius.is_zero:
                current = ProjPoint.affine(DiskPoint(spec.zero(), ABS_ONE / aff.radius))
            else:
                current = ProjPoint.infinity(spec)
    return current


# ---------------------------------------------------------------------------
# Disk images


def image_disk_radius(f: Poly, r: AbsValue) -> AbsValue:
    """diam_A of the image of eta_{0,r} under a plain polynomial:
    max over i >= 1 of |a_i| r^i."""
    if not f.is_plain:
        raise DomainViolation("image radii are computed for plain polynomials")
    return abs_max(c.abs() * r ** n for n, c in f.terms if n >= 1)


def apply_map(f: SeriesMap, z: DiskPoint) -> list[DiskPoint]:
    """The image of a disk point under an affine polynomial map, one disk
    point per affine coordinate.

    The chart denominator (coordinate 0) must be a nonzero constant, so the
    map is polynomial on the whole chart and images of balls are balls with
    exactly computable center and radius.
    """
    _require_in_domain(f, z)
    den = f.coords[0]
    if den.is_zero or not den.is_constant:
        raise PoleHit("chart denominator must be a nonzero constant")
    c_inv = den.coeff(0).inv()
    c_abs = den.coeff(0).abs()
    out = []
    for p in f.coords[1:]:
        if not p.is_plain:
            raise DomainViolation("affine coordinates must be plain polynomials")
        q = p if z.center.is_zero else taylor_shift(p, z.center)
        center = q.coeff(0) * c_inv
        radius = image_disk_radius(q, z.radius) / c_abs
        out.append(DiskPoint(center, radius))
    return out
