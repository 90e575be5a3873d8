"""Witt classes, Hilbert symbols, ring tables."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from wittkit.errors import NotClosed, SpecMismatch
from wittkit.forms import GramForm, hyperbolic, orth_sum
from wittkit.invariants import (
    WittClass,
    hilbert_symbol,
    witt_class,
    witt_equiv,
    witt_ring_table,
)
from wittkit.matrices import InvMatrix
from wittkit.rings import RingSpec

Q = RingSpec.rationals()
DY = RingSpec.dyadic()
F5 = RingSpec.prime_field(5)
F7 = RingSpec.prime_field(7)
F11 = RingSpec.prime_field(11)


# -- Hilbert symbols --------------------------------------------------------


def test_hilbert_frozen_values():
    assert hilbert_symbol(2, 2, 2) == 1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, "inf") == -1
    assert hilbert_symbol(2, 3, 2) == -1
    assert hilbert_symbol(3, 3, 3) == -1
    assert hilbert_symbol(2, 7, 7) == 1
    assert hilbert_symbol(Fraction(1, 2), 2, 2) == 1


def test_hilbert_identities():
    rng = random.Random(31)
    places = [2, 3, 5, 7, "inf"]
    nonzero = [n for n in range(-12, 13) if n]
    for _ in range(60):
        a, b, c = (rng.choice(nonzero) for _ in range(3))
        v = rng.choice(places)
        assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
        assert hilbert_symbol(a * b, c, v) == hilbert_symbol(a, c, v) * hilbert_symbol(b, c, v)
        assert hilbert_symbol(a, -a, v) == 1
        assert hilbert_symbol(a, a * a, v) == 1


def test_hilbert_product_formula():
    # over all places, the symbols of a fixed pair multiply to +1;
    # only finitely many places can be -1 (primes dividing 2ab)
    rng = random.Random(37)
    for _ in range(50):
        a = rng.choice([n for n in range(-30, 31) if n])
        b = rng.choice([n for n in range(-30, 31) if n])
        primes = {2}
        for n in (abs(a), abs(b)):
            d = 2
            while d * d <= n:
                while n % d == 0:
                    primes.add(d)
                    n //= d
                d += 1
            if n > 1:
                primes.add(n)
        prod = hilbert_symbol(a, b, "inf")
        for p in primes:
            prod *= hilbert_symbol(a, b, p)
        assert prod == 1


# -- Witt classes -----------------------------------------------------------


def test_dyadic_class_frozen():
    assert witt_class(GramForm.diagonal(DY, [1])).to_json() == {
        "signature": 1,
        "parity": 0,
    }
    assert witt_class(GramForm.diagonal(DY, [2])).to_json() == {
        "signature": 1,
        "parity": 1,
    }
    assert witt_class(GramForm.diagonal(DY, [1, 2])).to_json() == {
        "signature": 2,
        "parity": 1,
    }
    diff = witt_class(GramForm.diagonal(DY, [1])) - witt_class(
        GramForm.diagonal(DY, [2])
    )
    assert not diff.is_zero
    assert (diff + diff).is_zero


def test_rational_class_frozen():
    c = witt_class(GramForm.diagonal(Q, [3, 5]))
    assert c.to_json() == {
        "dim_mod2": 0,
        "signature": 2,
        "disc": -15,
        "hasse": {"5": -1},
    }
    assert witt_class(GramForm.diagonal(Q, [1, -1])).is_zero


def test_prime_field_classes():
    assert witt_equiv(GramForm.diagonal(F7, [1]), GramForm.diagonal(F7, [2]))
    assert not witt_equiv(GramForm.diagonal(F7, [1]), GramForm.diagonal(F7, [3]))
    assert witt_class(GramForm.diagonal(F7, [3])).to_json() == {
        "dim_mod2": 1,
        "disc": 3,
    }


def test_scaled_equivalence_with_explicit_isometry():
    # <1,1> and <2,2> agree over Q; P^T (2I) P = I for this P
    f = GramForm.diagonal(Q, [1, 1])
    g = GramForm.diagonal(Q, [2, 2])
    assert witt_equiv(f, g)
    p = InvMatrix.from_rows(
        Q, [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(-1, 2)]]
    )
    assert p.conj_transpose() * g.gram * p == f.gram
    # ... but <1,1> and <1,2> do not agree (Hasse at 2 differs)
    assert not witt_equiv(f, GramForm.diagonal(Q, [1, 2]))


def test_class_is_additive():
    rng = random.Random(41)
    for spec in (Q, DY, F5, F7):
        for _ in range(15):
            f = _rand_diag(spec, rng)
            g = _rand_diag(spec, rng)
            assert witt_class(orth_sum(f, g)) == witt_class(f) + witt_class(g)
            assert (witt_class(f) - witt_class(f)).is_zero
            assert witt_class(f) + WittClass.zero(spec) == witt_class(f)


def _rand_diag(spec: RingSpec, rng: random.Random) -> GramForm:
    n = rng.randrange(1, 5)
    if spec.kind == "fp":
        entries = [rng.randrange(1, spec.p) for _ in range(n)]
    elif spec.kind == "dyadic":
        entries = [rng.choice([1, -1, 2, -2]) for _ in range(n)]
    else:
        entries = [Fraction(rng.choice([1, -1, 2, 3, -5, 7])) for _ in range(n)]
    return GramForm.diagonal(spec, entries)


def test_hyperbolic_forms_are_zero():
    for spec in (Q, DY, F5, F7):
        assert witt_class(hyperbolic(2, 1, spec)).is_zero
        assert witt_class(GramForm.diagonal(spec, [1, -1])).is_zero


def test_skew_classes():
    skew = GramForm.from_rows(F7, [[0, 1], [-1, 0]], epsilon=-1)
    assert witt_class(skew).is_zero
    skew_q = GramForm.from_rows(Q, [[0, 2], [-2, 0]], epsilon=-1)
    assert witt_class(skew_q).is_zero
    with pytest.raises(SpecMismatch):
        witt_class(GramForm.from_rows(DY, [[0, 1], [-1, 0]], epsilon=-1))
    with pytest.raises(SpecMismatch):
        witt_class(GramForm.diagonal(RingSpec.laurent2(), [1]))
    with pytest.raises(SpecMismatch):
        witt_equiv(GramForm.diagonal(Q, [1]), GramForm.diagonal(DY, [1]))


def test_equiv_matches_invariant_equality_randomized():
    rng = random.Random(43)
    for spec in (F5, F11, Q):
        for _ in range(20):
            f, g = _rand_diag(spec, rng), _rand_diag(spec, rng)
            assert witt_equiv(f, g) == (witt_class(f) == witt_class(g))


# -- ring tables --------------------------------------------------------------


def test_dyadic_ring_table_frozen():
    t = witt_ring_table(DY)
    assert t.group == "Z+Z/2"
    assert t.generators == ("<1>", "<2>", "<-1>", "<-2>")
    assert t.classes == ("<-1>", "<-2>", "<1>", "<2>")
    assert t.free_generator == "<1>"
    assert t.torsion_generator == "<1> - <2>"
    j = t.to_json()
    assert j["ring"] == "dyadic"
    assert j["add"][0] == ["<1,1>", "<1,2>", "0", "<1,-2>"]
    assert j["mul"][1] == ["<2>", "<1>", "<-2>", "<-1>"]


def test_prime_field_tables_frozen():
    t5 = witt_ring_table(F5)
    assert t5.group == "Z/2+Z/2"
    assert t5.classes == ("0", "<1,3>", "<1>", "<2>")
    assert t5.to_json()["mul"][1] == ["0", "0", "<1,3>", "<1,3>"]
    t7 = witt_ring_table(F7)
    assert t7.group == "Z/4"
    assert t7.classes == ("0", "<1,4>", "<1>", "<3>")


def test_table_generated_subgroup():
    sub = witt_ring_table(DY, [GramForm.diagonal(DY, [1])])
    assert sub.group == "Z"
    assert sub.classes == ("<1>",)
    with pytest.raises(NotClosed):
        witt_ring_table(DY, [GramForm.diagonal(DY, [2])])
    with pytest.raises(NotClosed):
        witt_ring_table(F5, [GramForm.diagonal(F5, [2])])


def test_table_addition_is_group_law():
    # every add-table entry names the class of the actual orthogonal sum
    t = witt_ring_table(F7)
    forms = {
        "0": GramForm.diagonal(F7, [1, -1]),
        "<1,4>": GramForm.diagonal(F7, [1, 4]),
        "<1>": GramForm.diagonal(F7, [1]),
        "<3>": GramForm.diagonal(F7, [3]),
    }
    labels = list(t.classes)
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            want = witt_class(orth_sum(forms[a], forms[b]))
            got = witt_class(forms[t.add[i][j]])
            assert want == got
