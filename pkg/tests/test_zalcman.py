"""Selection lemma on finite samples and the rescaling construction."""

from __future__ import annotations

from fractions import Fraction

import pytest

from berkline import (
    ABS_ONE,
    AbsValue,
    FieldSpec,
    Poly,
    UNIT_DISK,
    fs_derivative,
    gromov_conditions,
    gromov_select,
    identity_map,
    rescaled_bound_holds,
    rigid,
    sampled_function,
    series_map,
    zalcman_rescale,
)
from berkline.errors import NoExplosion, RadiusNotInValueGroup
from berkline.field import magnitude_le_rational

from conftest import rng_for


def scaled_identity_family(spec: FieldSpec):
    """f_n = [c_n : T] with |c_n| = beta^(-n): derivative beta^n at 0."""

    def family(n: int):
        return series_map(
            [Poly.constant(spec, spec.scalar(spec.p**n)), Poly.coordinate(spec)],
            UNIT_DISK,
        )

    return family


# ---------------------------------------------------------------------------
# selection


def test_constant_function_selects_start(p3):
    pts = [p3.scalar(k) for k in range(5)]
    s = sampled_function(pts, [Fraction(2)] * 5)
    assert gromov_select(s, 3, Fraction(1, 2), Fraction(3, 2)) == 3


def test_two_point_jump(p3):
    # phi(a) = 1, phi(a1) = 10, |a - a1| <= 1/eps: the witness is selected
    s = sampled_function([p3.zero(), p3.one()], [1, 10])
    b = gromov_select(s, 0, Fraction(1), Fraction(3, 2))
    assert b == 1
    assert all(gromov_conditions(s, 0, b, Fraction(1), Fraction(3, 2)))


def test_isolated_ball_selects_start(p3):
    # 1/(eps phi(a)) is far below every pairwise distance
    pts = [p3.zero(), p3.one(), p3.scalar(2)]
    s = sampled_function(pts, [Fraction(1), Fraction(100), Fraction(100)])
    eps = Fraction(100)  # selection ball has radius 1/100 < 1
    assert gromov_select(s, 0, eps, Fraction(2)) == 0


def test_selection_conditions_on_random_samples(p3):
    rng = rng_for("gromov-random")
    for _ in range(60):
        size = rng.randint(1, 30)
        pts = []
        seen = set()
        while len(pts) < size:
            v = Fraction(rng.randint(-20, 20), rng.choice([1, 2, 3])) * Fraction(3) ** rng.randint(0, 3)
            if v not in seen:
                seen.add(v)
                pts.append(p3.scalar(v))
        values = [Fraction(rng.randint(1, 500), rng.choice([1, 2, 5])) for _ in pts]
        s = sampled_function(pts, values)
        a = rng.randrange(size)
        eps = Fraction(rng.randint(1, 8), rng.choice([1, 2]))
        tau = 1 + Fraction(1, rng.randint(1, 6))
        b = gromov_select(s, a, eps, tau)
        ci, cii, ciii = gromov_conditions(s, a, b, eps, tau)
        assert ci and cii and ciii


def test_selection_is_deterministic(p3):
    pts = [p3.scalar(k) for k in range(8)]
    values = [Fraction(1), Fraction(9), Fraction(9), Fraction(2), Fraction(5), Fraction(1), Fraction(7), Fraction(3)]
    s = sampled_function(pts, values)
    picks = {gromov_select(s, 0, Fraction(1, 2), Fraction(3, 2)) for _ in range(5)}
    assert len(picks) == 1


def test_sampled_function_validation(p3):
    with pytest.raises(ValueError):
        sampled_function([], [])
    with pytest.raises(ValueError):
        sampled_function([p3.zero()], [Fraction(0)])
    with pytest.raises(ValueError):
        sampled_function([p3.zero()], [1, 2])


# ---------------------------------------------------------------------------
# rescaling


def test_rescaled_family_is_exactly_normalized(p3):
    family = scaled_identity_family(p3)
    steps = zalcman_rescale(family, lambda n: p3.zero(), 8)
    for s in steps:
        n = s.index
        assert fs_derivative(s.map, rigid(p3.zero())) == ABS_ONE
        # the selected point stays within 2/n of the witness
        gap = (s.witness - s.center).abs()
        assert magnitude_le_rational(gap, Fraction(2, n), p3.base())
        # |rho_n| = 1/|f_n'(z_n)| <= 1/n^3
        assert s.scale.abs() == AbsValue.of(-n)
        assert magnitude_le_rational(s.scale.abs(), Fraction(1, n**3), p3.base())
        # the rescaled map of this family is the identity
        assert s.map.proportional_to(identity_map(p3))


def test_rescaled_bound_on_closed_disks(p3):
    family = scaled_identity_family(p3)
    steps = zalcman_rescale(family, lambda n: p3.zero(), 6)
    for s in steps:
        # the certified region is the disk of radius 1/|rho_n| = beta^n
        for log_r in range(0, s.index + 1):
            assert rescaled_bound_holds(s, AbsValue.of(log_r), s.index)


def test_rescale_with_explicit_samples(p3):
    family = scaled_identity_family(p3)

    def samples(n):
        return [p3.zero(), p3.scalar(3), p3.scalar(1 + n)]

    steps = zalcman_rescale(family, lambda n: p3.zero(), 5, samples)
    for s in steps:
        assert fs_derivative(s.map, rigid(p3.zero())) == ABS_ONE


def test_constant_family_has_no_explosion(p3):
    const = series_map([Poly.constant(p3, p3.one()), Poly.constant(p3, p3.scalar(5))], UNIT_DISK)
    with pytest.raises(NoExplosion):
        zalcman_rescale(lambda n: const, lambda n: p3.zero(), 3)


def test_slow_family_has_no_explosion(p2):
    # 2^n >= n^3 holds at n = 1 but fails from n = 2 on
    family = scaled_identity_family(p2)
    assert len(zalcman_rescale(family, lambda n: p2.zero(), 1)) == 1
    with pytest.raises(NoExplosion):
        zalcman_rescale(family, lambda n: p2.zero(), 2)


def test_uniformizer_magnitude_gap(p3):
    with pytest.raises(RadiusNotInValueGroup):
        p3.uniformizer(Fraction(1, 2))


def test_rescaling_over_puiseux_backend():
    spec = FieldSpec("puiseux-q", numeric_base=Fraction(3))

    def family(n: int):
        return series_map(
            [Poly.constant(spec, spec.t_power(n)), Poly.coordinate(spec)], UNIT_DISK
        )

    steps = zalcman_rescale(family, lambda n: spec.zero(), 6)
    for s in steps:
        assert fs_derivative(s.map, rigid(spec.zero())) == ABS_ONE
        assert s.scale.abs() == AbsValue.of(-s.index)
