"""Shared fixtures and deterministic random generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from berkline import (
    AbsValue,
    DiskPoint,
    FieldSpec,
    Poly,
    SeriesMap,
    series_map,
    tree_of_disks,
)


@pytest.fixture
def p3() -> FieldSpec:
    return FieldSpec("padic", 3)


@pytest.fixture
def p2() -> FieldSpec:
    return FieldSpec("padic", 2)


@pytest.fixture
def pq() -> FieldSpec:
    return FieldSpec("puiseux-q")


def rng_for(name: str) -> random.Random:
    return random.Random(f"berkline:{name}")


def random_padic_scalar(rng: random.Random, spec: FieldSpec, unit_ball: bool = False):
    p = spec.p
    num = rng.choice([1, 2, 4, 5, 7, 8, -1, -2, -5])
    den = rng.choice([1, 1, 2, 5, 7])
    while den % p == 0:
        den = rng.choice([1, 2, 5, 7, 11])
    k = rng.randint(0, 3) if unit_ball else rng.randint(-2, 3)
    return spec.scalar(Fraction(num, den) * Fraction(p) ** k)


def random_puiseux_scalar(rng: random.Random, spec: FieldSpec, unit_ball: bool = False):
    n_terms = rng.randint(0, 2)
    terms = []
    for _ in range(n_terms + 1):
        d = rng.choice([1, 1, 2, 3])
        lo = 0 if unit_ball else -2
        q = Fraction(rng.randint(lo * d, 3 * d), d)
        c = rng.choice([1, 2, 3, -1, -2, 5])
        terms.append((q, c))
    return spec.from_terms(terms)


def random_scalar(rng: random.Random, spec: FieldSpec, unit_ball: bool = False):
    if spec.backend == "padic":
        return random_padic_scalar(rng, spec, unit_ball)
    return random_puiseux_scalar(rng, spec, unit_ball)


def random_nonzero_scalar(rng: random.Random, spec: FieldSpec, unit_ball: bool = False):
    while True:
        x = random_scalar(rng, spec, unit_ball)
        if not x.is_zero:
            return x


def random_radius(rng: random.Random, allow_zero: bool = True) -> AbsValue:
    if allow_zero and rng.random() < 0.3:
        return AbsValue.zero()
    d = rng.choice([1, 1, 2, 3])
    return AbsValue.of(Fraction(rng.randint(-6 * d, 0), d))


def random_unit_disk_point(rng: random.Random, spec: FieldSpec) -> DiskPoint:
    return DiskPoint(random_scalar(rng, spec, unit_ball=True), random_radius(rng))


def random_poly(rng: random.Random, spec: FieldSpec, max_deg: int, unit_ball: bool = False) -> Poly:
    coeffs = {}
    for n in range(max_deg + 1):
        if rng.random() < 0.6:
            coeffs[n] = random_scalar(rng, spec, unit_ball)
    poly = Poly.from_dict(spec, coeffs)
    if poly.is_zero:
        return Poly.from_dict(spec, {rng.randint(0, max_deg): spec.one()})
    return poly


def random_laurent(rng: random.Random, spec: FieldSpec, span: int = 4) -> Poly:
    coeffs = {}
    for n in range(-span, span + 1):
        if rng.random() < 0.4:
            coeffs[n] = random_scalar(rng, spec)
    poly = Poly.from_dict(spec, coeffs)
    if poly.is_zero:
        return Poly.from_dict(spec, {rng.randint(-span, span): spec.one()})
    return poly


def random_poly_map(rng: random.Random, spec: FieldSpec, max_deg: int) -> SeriesMap:
    """A map [1 : P] with P nonconstant, coefficients in the unit ball."""
    while True:
        p = random_poly(rng, spec, max_deg, unit_ball=True)
        if not p.is_constant:
            return series_map([Poly.constant(spec, spec.one()), p])


def random_pgl_word(rng: random.Random, spec: FieldSpec, max_len: int = 4) -> list:
    word = []
    for _ in range(rng.randint(1, max_len)):
        kind = rng.choice(["scale", "translate", "invert"])
        if kind == "scale":
            if spec.backend == "padic":
                a = spec.scalar(rng.choice([1, 2, -1, Fraction(4, 5), 7]))
            else:
                a = spec.from_terms([(0, rng.choice([1, 2, -1, 3])), (rng.randint(1, 3), 1)])
            word.append(("scale", a))
        elif kind == "translate":
            word.append(("translate", random_scalar(rng, spec, unit_ball=True)))
        else:
            word.append(("invert",))
    return word


def random_tree_of_disks(rng: random.Random, n_disks: int = 5):
    """A connected tree-of-disks model with a few extra cycle edges and
    three marked points."""
    names = [f"d{i}" for i in range(n_disks)]
    mags = [Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(2, 3)]

    def coord():
        k = rng.randint(0, 2)
        pairs = [(rng.choice(mags), rng.randint(-2, 2)) for _ in range(k)]
        return [(m, c) for m, c in pairs if c != 0]

    edges = []
    for i in range(1, n_disks):
        other = names[rng.randint(0, i - 1)]
        edges.append((names[i], coord(), other, coord()))
    for _ in range(rng.randint(0, 2)):
        a, b = rng.sample(names, 2)
        edges.append((a, coord(), b, coord()))
    marks = {m: (rng.choice(names), coord()) for m in ("x", "y", "z")}
    return tree_of_disks(names, edges, marks)
