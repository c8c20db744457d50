"""Points of the Berkovich affine and projective line, and seminorm evaluation.

A type I-III point of the analytic affine line is a closed ball eta_{a,r}:
center a in the field, radius an exact magnitude (zero magnitude for rigid
points).  The seminorm of a polynomial P at eta_{a,r} is max_i |c_i| r^i over
the Taylor recentering P(T) = sum c_i (T-a)^i; at rigid points this is plain
evaluation.  Laurent polynomials are evaluated multiplicatively through
|T^{-1}(x)| = 1/max(|a|, r), which is finite at every point except the rigid
point 0.

Diameter functions follow the usual conventions: diam_A is the radius (the
max of coordinate radii in higher dimension) and the projective diameter
divides by max(1, |x|)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BackendMismatch, DivisionByZero, PoleAtPoint
from .field import (
    ABS_ONE,
    ABS_ZERO,
    AbsValue,
    FieldSpec,
    Scalar,
    abs_max,
    unit_max,
)

# ---------------------------------------------------------------------------
# Laurent polynomials over a backend field


@dataclass(frozen=True)
class Poly:
    """A (Laurent) polynomial with exact backend coefficients.

    ``terms`` maps integer exponents to nonzero scalars, stored sorted.  A
    plain polynomial has no negative exponents.
    """

    spec: FieldSpec
    terms: tuple[tuple[int, Scalar], ...]

    @staticmethod
    def from_dict(spec: FieldSpec, coeffs: dict[int, Scalar]) -> "Poly":
        return Poly(spec, tuple(sorted((n, c) for n, c in coeffs.items() if not c.is_zero)))

    @staticmethod
    def from_coeffs(spec: FieldSpec, coeffs: Sequence[Scalar]) -> "Poly":
        """Dense construction: coeffs[i] is the coefficient of T^i."""
        return Poly.from_dict(spec, dict(enumerate(coeffs)))

    @staticmethod
    def constant(spec: FieldSpec, c: Scalar) -> "Poly":
        return Poly.from_dict(spec, {0: c})

    @staticmethod
    def coordinate(spec: FieldSpec) -> "Poly":
        return Poly.from_dict(spec, {0: spec.zero(), 1: spec.one()})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_plain(self) -> bool:
        return not self.terms or self.terms[0][0] >= 0

    @property
    def is_constant(self) -> bool:
        return all(n == 0 for n, _ in self.terms)

    def min_exp(self) -> int:
        return self.terms[0][0]

    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def coeff(self, n: int) -> Scalar:
        for m, c in self.terms:
            if m == n:
                return c
        return self.spec.zero()

    def as_dict(self) -> dict[int, Scalar]:
        return dict(self.terms)

    def _check(self, other: "Poly") -> None:
        if self.spec != other.spec:
            raise BackendMismatch("polynomials over different backends")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        acc = self.as_dict()
        for n, c in other.terms:
            s = acc.get(n, self.spec.zero()) + c
            if s.is_zero:
                acc.pop(n, None)
            else:
                acc[n] = s
        return Poly(self.spec, tuple(sorted(acc.items())))

    def __neg__(self) -> "Poly":
        return Poly(self.spec, tuple((n, -c) for n, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        acc: dict[int, Scalar] = {}
        for n, a in self.terms:
            for m, b in other.terms:
                k = n + m
                prod = a * b
                if k in acc:
                    s = acc[k] + prod
                    if s.is_zero:
                        del acc[k]
                    else:
                        acc[k] = s
                elif not prod.is_zero:
                    acc[k] = prod
        return Poly(self.spec, tuple(sorted(acc.items())))

    def scale(self, c: Scalar) -> "Poly":
        if c.is_zero:
            return Poly(self.spec, ())
        return Poly(self.spec, tuple((n, a * c) for n, a in self.terms))

    def shift_exp(self, m: int) -> "Poly":
        """Multiply by T^m."""
        return Poly(self.spec, tuple((n + m, c) for n, c in self.terms))

    def pow(self, k: int) -> "Poly":
        out = Poly.constant(self.spec, self.spec.one())
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self) -> "Poly":
        """Exact formal derivative; the factor n keeps its backend magnitude."""
        acc = {}
        for n, c in self.terms:
            if n == 0:
                continue
            d = c * self.spec.from_int(n)
            if not d.is_zero:
                acc[n - 1] = d
        return Poly(self.spec, tuple(sorted(acc.items())))

    def evaluate(self, a: Scalar) -> Scalar:
        """Exact evaluation at a field element (inverts a for Laurent input)."""
        if not self.terms:
            return self.spec.zero()
        neg = -min(0, self.min_exp())
        if neg and a.is_zero:
            raise PoleAtPoint("Laurent polynomial evaluated at 0")
        plain = self.shift_exp(neg) if neg else self
        acc = self.spec.zero()
        for n, c in plain.terms:
            acc = acc + c * _scalar_pow(a, n)
        if neg:
            acc = acc * _scalar_pow(a.inv(), neg)
        return acc

    def gauss_norm(self) -> AbsValue:
        """max over coefficients of their magnitude (the Gauss point value)."""
        return abs_max(c.abs() for _, c in self.terms)


def _scalar_pow(a: Scalar, k: int) -> Scalar:
    out = a.spec.one()
    base = a
    while k:
        if k & 1:
            out = out * base
        base = base * base
        k >>= 1
    return out


def taylor_shift(p: Poly, a: Scalar) -> Poly:
    """The recentering P(T + a), computed exactly (plain polynomials only)."""
    if not p.is_plain:
        raise PoleAtPoint("taylor_shift is defined for plain polynomials")
    if a.is_zero or p.is_zero:
        return p
    deg = p.degree()
    coeffs = [p.spec.zero()] * (deg + 1)
    for n, c in p.terms:
        coeffs[n] = c
    # synthetic Horner shift, O(deg^2) exact scalar operations
    for i in range(deg):
        for j in range(deg - 1, i - 1, -1):
            coeffs[j] = coeffs[j] + a * coeffs[j + 1]
    return Poly.from_coeffs(p.spec, coeffs)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor of two plain polynomials, up to a unit.

    Over padic coefficients this is the monic Euclidean gcd on Fractions.
    Over puiseux-q coefficients, naive Euclid would accumulate rational-
    function coefficients with exponential blowup, so the gcd is computed by
    a primitive pseudo-remainder sequence in Q[u][T], u = t^(1/D).
    """
    if p.spec != q.spec:
        raise BackendMismatch("gcd over different backends")
    if p.spec.backend == "puiseux-q":
        return _puiseux_poly_gcd(p, q)
    a, b = p, q
    while not b.is_zero:
        a, b = b, _poly_mod(a, b)
    if a.is_zero:
        return a
    return a.scale(a.terms[-1][1].inv())


def _poly_mod(a: Poly, b: Poly) -> Poly:
    lead_inv = b.terms[-1][1].inv()
    db = b.degree()
    while not a.is_zero and a.degree() >= db:
        n, c = a.terms[-1]
        factor = c * lead_inv
        a = a - b.shift_exp(n - db).scale(factor)
    return a


def coprime_certificate(polys: Sequence[Poly]) -> bool:
    """A sound fast test that plain polynomials share no common factor.

    Specializing the puiseux parameter at a rational point can only enlarge
    the gcd, so a constant specialized gcd certifies coprimality.  Returns
    False when inconclusive (callers then run the exact gcd).
    """
    from .field import PuiseuxScalar, _upoly_gcd

    if len(polys) < 2:
        return False
    if polys[0].spec.backend != "puiseux-q":
        dense = [_dense_fractions(p) for p in polys]
        return _dense_gcd_is_constant(dense, _upoly_gcd)
    denom = 1
    for p in polys:
        for _, c in p.terms:
            assert isinstance(c, PuiseuxScalar)
            for e, _ in c.num + c.den:
                denom = denom * e.denominator // math.gcd(denom, e.denominator)
    for sigma in (Fraction(2), Fraction(3), Fraction(5, 2)):
        dense = []
        ok = True
        for p in polys:
            d = _specialize_dense(p, denom, sigma)
            if d is None:
                ok = False
                break
            dense.append(d)
        if ok and _dense_gcd_is_constant(dense, _upoly_gcd):
            return True
    return False


def _specialize_dense(p: Poly, denom: int, sigma: Fraction) -> list[Fraction] | None:
    out = [Fraction(0)] * (p.degree() + 1)
    for n, c in p.terms:
        num = sum((coeff * sigma ** int(e * denom) for e, coeff in c.num), Fraction(0))
        den = sum((coeff * sigma ** int(e * denom) for e, coeff in c.den), Fraction(0))
        if den == 0:
            return None
        out[n] = num / den
    while out and out[-1] == 0:
        out.pop()
    return out


def _dense_fractions(p: Poly) -> list[Fraction]:
    out = [Fraction(0)] * (p.degree() + 1)
    for n, c in p.terms:
        out[n] = c.value  # type: ignore[attr-defined]
    return out


def _dense_gcd_is_constant(dense: list[list[Fraction]], upoly_gcd) -> bool:
    g = dense[0]
    for d in dense[1:]:
        g = upoly_gcd(g, d)
        if len(g) == 1:
            return True
    return len(g) == 1


# -- gcd over puiseux coefficients (primitive PRS in Q[u][T]) ----------------


def _poly_to_biv(p: Poly, denom: int, shift: Fraction) -> dict[int, list[Fraction]]:
    from .field import PuiseuxScalar, _terms_to_upoly

    out = {}
    for n, c in p.terms:
        assert isinstance(c, PuiseuxScalar)
        out[n] = _terms_to_upoly(c.num, denom, shift)
    return out


def _biv_deg(a: dict[int, list[Fraction]]) -> int:
    return max(a) if a else -1


def _biv_pp(a: dict[int, list[Fraction]]) -> dict[int, list[Fraction]]:
    """Divide out the content (the common Q[u] factor of the coefficients)."""
    from .field import _upoly_divmod, _upoly_gcd

    if not a:
        return a
    content: list[Fraction] = []
    for coeff in a.values():
        content = _upoly_gcd(content, coeff) if content else list(coeff)
        if len(content) == 1:
            break
    if len(content) <= 1:
        return a
    out = {}
    for n, coeff in a.items():
        q, r = _upoly_divmod(coeff, content)
        assert not r
        out[n] = q
    return out


def _biv_prem(a: dict[int, list[Fraction]], b: dict[int, list[Fraction]]) -> dict:
    """Pseudo-remainder of a by b in Q[u][T]: fraction-free elimination."""
    from .field import _upoly_mul, _upoly_sub, _upoly_trim

    db = _biv_deg(b)
    lb = b[db]
    r = {n: list(c) for n, c in a.items()}
    while r and _biv_deg(r) >= db:
        dr = _biv_deg(r)
        lr = r.pop(dr)
        shifted = {n + dr - db: c for n, c in b.items() if n != db}
        new = {}
        for n in set(r) | set(shifted):
            left = _upoly_mul(r.get(n, []), lb)
            right = _upoly_mul(shifted.get(n, []), lr)
            val = _upoly_sub(left, right)
            if val:
                new[n] = val
        r = new
    return r


def _clear_denominators(p: Poly) -> Poly:
    """Scale a puiseux-coefficient polynomial so every coefficient is a plain
    term map (gcds are unchanged up to content, which is removed later)."""
    from .field import PuiseuxScalar, _ONE_TERMS, _terms_mul

    cans = [(n, c.canonical()) for n, c in p.terms]
    if all(d == _ONE_TERMS for _, (_, d) in cans):
        return Poly(p.spec, tuple((n, PuiseuxScalar(p.spec, num)) for n, (num, _) in cans))
    out = []
    for i, (n, (num, _)) in enumerate(cans):
        for j, (_, (_, d)) in enumerate(cans):
            if j != i and d != _ONE_TERMS:
                num = _terms_mul(num, d)
        out.append((n, PuiseuxScalar(p.spec, num)))
    return Poly(p.spec, tuple(out))


def _puiseux_poly_gcd(p: Poly, q: Poly) -> Poly:
    import math as _math

    from .field import PuiseuxScalar, _upoly_from

    spec = p.spec
    p, q = _clear_denominators(p), _clear_denominators(q)
    exps = []
    for poly in (p, q):
        for _, c in poly.terms:
            exps.extend(e for e, _ in c.num)
    denom = _math.lcm(*(e.denominator for e in exps)) if exps else 1
    shifts = []
    for poly in (p, q):
        mins = [min(e for e, _ in c.num) for _, c in poly.terms]
        shifts.append(min(mins) if mins else Fraction(0))
    a = _biv_pp(_poly_to_biv(p, denom, shifts[0]))
    b = _biv_pp(_poly_to_biv(q, denom, shifts[1]))
    if _biv_deg(a) < _biv_deg(b):
        a, b = b, a
    while b:
        r = _biv_prem(a, b)
        a, b = b, _biv_pp(r)
    coeffs = {
        n: PuiseuxScalar(spec, _upoly_from(c, denom, Fraction(0)))
        for n, c in a.items()
    }
    return Poly(spec, tuple(sorted(coeffs.items())))


# ---------------------------------------------------------------------------
# Points


@dataclass(frozen=True, eq=False)
class DiskPoint:
    """eta_{a,r}: the point of the affine line given by a closed ball.

    Type I when r is the zero magnitude, type II when the log-radius lies in
    the declared value group, type III otherwise.  Equality is ball equality:
    same radius and |a - b| <= r.
    """

    center: Scalar
    radius: AbsValue

    @property
    def spec(self) -> FieldSpec:
        return self.center.spec

    @property
    def is_rigid(self) -> bool:
        return self.radius.is_zero

    def point_type(self) -> str:
        if self.radius.is_zero:
            return "I"
        assert self.radius.logval is not None
        return "II" if self.spec.group_contains(self.radius.logval) else "III"

    def norm(self) -> AbsValue:
        """|T(x)| = max(|a|, r)."""
        v = self.center.abs()
        return v if v > self.radius else self.radius

    def contains(self, other: "DiskPoint") -> bool:
        return other.radius <= self.radius and (self.center - other.center).abs() <= self.radius

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiskPoint):
            return NotImplemented
        if self.radius != other.radius:
            return False
        return (self.center - other.center).abs() <= self.radius

    def __hash__(self) -> int:
        return hash(self.radius)

    def __repr__(self) -> str:
        return f"eta({self.center!r}, {self.radius!r})"


def rigid(center: Scalar) -> DiskPoint:
    return DiskPoint(center, ABS_ZERO)


def gauss_point(spec: FieldSpec) -> DiskPoint:
    return DiskPoint(spec.zero(), ABS_ONE)


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point of the projective line: an affine DiskPoint or a ball around
    infinity stored in the reciprocal coordinate."""

    chart: str  # "affine" | "infinity"
    point: DiskPoint

    @staticmethod
    def affine(point: DiskPoint) -> "ProjPoint":
        return ProjPoint("affine", point)

    @staticmethod
    def infinity(spec: FieldSpec) -> "ProjPoint":
        return ProjPoint("infinity", rigid(spec.zero()))

    @property
    def is_infinity(self) -> bool:
        return self.chart == "infinity" and self.point.is_rigid and self.point.center.is_zero

    def to_affine(self) -> DiskPoint | None:
        """The affine-chart representative, or None for the rigid point at
        infinity (the only point without one)."""
        if self.chart == "affine":
            return self.point
        c, r = self.point.center, self.point.radius
        ca = c.abs()
        if ca > r:
            # the reciprocal ball avoids 0, so it inverts to a ball
            return DiskPoint(c.inv(), r / (ca * ca))
        if not r.is_zero:
            # contains the origin of the reciprocal chart: eta_{0, 1/r}
            return DiskPoint(c.spec.zero(), ABS_ONE / r)
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProjPoint):
            return NotImplemented
        a, b = self.to_affine(), other.to_affine()
        if a is None or b is None:
            return a is None and b is None
        return a == b

    def __hash__(self) -> int:
        return 0


# ---------------------------------------------------------------------------
# Seminorm evaluation and diameters


def eval_seminorm(p: Poly, x: DiskPoint) -> AbsValue:
    """|P(x)| for the multiplicative seminorm of the point x.

    For a plain polynomial this is max_i |c_i| r^i over the recentered
    coefficients.  A Laurent polynomial is written T^{-m} Q with Q plain and
    evaluated multiplicatively; this is exact at every point other than the
    rigid point 0, where T has seminorm zero.
    """
    if p.is_zero:
        return ABS_ZERO
    neg = -min(0, p.min_exp())
    if neg:
        t_norm = x.norm()
        if t_norm.is_zero:
            raise PoleAtPoint("Laurent polynomial at the rigid point 0")
        plain_val = eval_seminorm(p.shift_exp(neg), x)
        return plain_val / t_norm ** neg
    q = p if x.center.is_zero else taylor_shift(p, x.center)
    if x.radius.is_zero:
        return q.coeff(0).abs()
    return abs_max(c.abs() * x.radius ** n for n, c in q.terms)


def diam_affine(coords: Sequence[DiskPoint] | DiskPoint) -> AbsValue:
    """diam_A of a coordinatewise product point: the max coordinate radius."""
    if isinstance(coords, DiskPoint):
        coords = [coords]
    return abs_max(x.radius for x in coords)


def diam_proj(coords: Sequence[DiskPoint] | DiskPoint) -> AbsValue:
    """Projective diameter diam_A(x) / max(1, max_i |x_i|)^2."""
    if isinstance(coords, DiskPoint):
        coords = [coords]
    denom = unit_max(abs_max(x.norm() for x in coords))
    return diam_affine(coords) / (denom * denom)


def diam_proj_point(x: ProjPoint) -> AbsValue:
    aff = x.to_affine()
    if aff is None:
        return ABS_ZERO
    return diam_proj(aff)


def join(x: DiskPoint, y: DiskPoint) -> DiskPoint:
    """The smallest ball containing both: center(x), radius the max of both
    radii and the center gap."""
    if x.spec != y.spec:
        raise BackendMismatch("join over different backends")
    gap = (x.center - y.center).abs()
    r = abs_max([x.radius, y.radius, gap])
    return DiskPoint(x.center, r)
