"""Scalar layer: specs, payload arithmetic, units, involution, JSON."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from wittkit.errors import IllFormed, NonUnit, SpecMismatch
from wittkit.rings import RingElem, RingSpec, nil_generator

Q = RingSpec.rationals()
DY = RingSpec.dyadic()
L2 = RingSpec.laurent2()
F7 = RingSpec.prime_field(7)


def test_spec_tags_roundtrip():
    for spec in (Q, DY, L2, F7, RingSpec.trunc_nil(Q, 3), RingSpec.trunc_nil(F7, 2)):
        assert RingSpec.from_json(spec.to_json()) == spec
    for spec in (Q, DY, L2, F7):
        assert RingSpec.from_tag(str(spec)) == spec
    assert RingSpec.from_tag("fp:7") == F7
    assert RingSpec.from_tag("q") == Q
    assert RingSpec.from_tag("truncnil:q:3") == RingSpec.trunc_nil(Q, 3)
    assert RingSpec.from_tag("truncnil:fp:5:2") == RingSpec.trunc_nil(RingSpec.prime_field(5), 2)
    assert str(F7) == "fp:7"


def test_spec_validation():
    with pytest.raises(IllFormed):
        RingSpec.prime_field(2)
    with pytest.raises(IllFormed):
        RingSpec.prime_field(9)
    with pytest.raises(IllFormed):
        RingSpec.trunc_nil(Q, 0)
    with pytest.raises(IllFormed):
        RingSpec.trunc_nil(RingSpec.trunc_nil(Q, 2), 2)
    with pytest.raises(IllFormed):
        RingSpec.from_tag("zz")


def test_field_arithmetic_f7():
    a = RingElem.from_fraction(F7, 3)
    b = RingElem.from_fraction(F7, 5)
    assert (a + b).payload == 1
    assert (a * b).payload == 1
    assert (a - b).payload == 5
    assert (a / b).payload == (3 * pow(5, 5, 7)) % 7
    assert (-a).payload == 4
    assert a**6 == RingElem.one(F7)
    # fractions reduce mod p
    assert RingElem.from_fraction(F7, Fraction(1, 2)).payload == 4


def test_dyadic_units():
    two = RingElem.from_fraction(DY, 2)
    half = RingElem.from_fraction(DY, Fraction(1, 2))
    three = RingElem.from_fraction(DY, 3)
    assert two.is_unit() and half.is_unit() and (-two).is_unit()
    assert not three.is_unit()
    assert two.inv() == half
    with pytest.raises(NonUnit):
        three.inv()
    with pytest.raises(IllFormed):
        RingElem.from_fraction(DY, Fraction(1, 3))


def test_laurent_arithmetic_and_involution():
    t = RingElem.monomial(1, t_exp=1)
    z = RingElem.monomial(1, z_exp=1)
    e = (t + z) * (t - z)
    assert e == t * t - z * z
    # involution inverts both variables
    assert t.involute() == RingElem.monomial(1, t_exp=-1)
    assert (t * z).involute() == RingElem.monomial(1, t_exp=-1, z_exp=-1)
    x = RingElem.monomial(Fraction(3, 4), 2, -1) + RingElem.monomial(1, 0, 1)
    assert x.involute().involute() == x
    # units are +-2^k t^i z^j
    assert RingElem.monomial(Fraction(-1, 2), 3, -2).is_unit()
    assert not (t + z).is_unit()
    assert (t * t.inv()) == RingElem.one(L2)


def test_laurent_substitution():
    t = RingElem.monomial(1, t_exp=1)
    z = RingElem.monomial(1, z_exp=1)
    e = t * z + z
    one = RingElem.one(L2)
    assert e.substitute(t=one) == z + z
    assert e.substitute(t=one, z=one) == RingElem.from_fraction(L2, 2)
    # partial substitution keeps the other variable symbolic
    assert e.substitute(z=one) == t + one


def test_truncated_ring():
    spec = RingSpec.trunc_nil(Q, 3)
    x = nil_generator(spec)
    assert x.is_nilpotent() and not x.is_unit()
    assert (x**3).is_zero()
    e = RingElem.series(spec, [1, 2, 3])
    f = RingElem.series(spec, [1, -2])
    assert e * f == RingElem.series(spec, [1, 0, -1])
    assert (RingElem.one(spec) + x).is_unit()
    assert (RingElem.one(spec) + x).inv() == RingElem.series(spec, [1, -1, 1])
    with pytest.raises(SpecMismatch):
        RingElem.series(Q, [1])
    # k = 1 collapses x to zero
    assert nil_generator(RingSpec.trunc_nil(Q, 1)).is_zero()


def test_mixed_ring_rejected():
    with pytest.raises(SpecMismatch):
        RingElem.one(Q) + RingElem.one(DY)


def test_elem_json_roundtrip():
    rng = random.Random(0)
    specs = [Q, DY, F7, L2, RingSpec.trunc_nil(DY, 2)]
    for spec in specs:
        for _ in range(25):
            e = _random_elem(spec, rng)
            assert RingElem.from_json(spec, e.to_json()) == e


def _random_elem(spec: RingSpec, rng: random.Random) -> RingElem:
    kind = spec.kind
    if kind == "fp":
        return RingElem.from_fraction(spec, rng.randrange(spec.p))
    if kind == "q":
        return RingElem.from_fraction(spec, Fraction(rng.randrange(-9, 10), rng.randrange(1, 9)))
    if kind == "dyadic":
        return RingElem.from_fraction(spec, Fraction(rng.randrange(-9, 10), 2 ** rng.randrange(0, 4)))
    if kind == "laurent2":
        out = RingElem.zero(spec)
        for _ in range(rng.randrange(0, 4)):
            out = out + RingElem.monomial(
                Fraction(rng.randrange(-3, 4), 2 ** rng.randrange(0, 3)),
                rng.randrange(-2, 3),
                rng.randrange(-2, 3),
            )
        return out
    coeffs = [_random_elem(spec.base, rng) for _ in range(spec.k)]
    return RingElem.series(spec, coeffs)


def test_ring_axioms_random():
    rng = random.Random(1)
    for spec in (Q, DY, F7, L2, RingSpec.trunc_nil(F7, 3)):
        for _ in range(40):
            a, b, c = (_random_elem(spec, rng) for _ in range(3))
            assert a + b == b + a
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert (a * b) * c == a * (b * c)
            assert (a * b).involute() == a.involute() * b.involute()
            assert a - a == RingElem.zero(spec)
