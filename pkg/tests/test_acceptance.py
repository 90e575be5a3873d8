"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every check here is exact (no tolerances anywhere; all arithmetic is
integer or Fraction based), so a budget is the only numeric threshold:
each criterion must finish inside its stated wall-clock limit.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from time import perf_counter

from wittkit.bott import build_bott, specialize, verify_bott_suite
from wittkit.forms import (
    GramForm,
    hyperbolic,
    isotropy_oracle,
    orth_sum,
    symplectic_basis,
    witt_decompose,
)
from wittkit.invariants import hilbert_symbol, witt_class, witt_equiv, witt_ring_table
from wittkit.lifting import roundtrip_isomorphism_demo
from wittkit.matrices import InvMatrix
from wittkit.rings import RingElem, RingSpec
from wittkit.stabilization import (
    ColimResult,
    FgAbGroup,
    GroupHom,
    GroupSeq,
    colimit,
    exactness_check,
    shift_invariance_check,
)

Q = RingSpec.rationals()
DY = RingSpec.dyadic()


def _run(capsys, num: int, name: str, budget: float, fn) -> None:
    t0 = perf_counter()
    try:
        fn()
    except BaseException:
        with capsys.disabled():
            print(f"ACCEPTANCE {num} {name}: FAIL ({perf_counter() - t0:.2f}s)")
        raise
    dt = perf_counter() - t0
    verdict = "PASS" if dt < budget else "FAIL"
    with capsys.disabled():
        print(f"ACCEPTANCE {num} {name}: {verdict} ({dt:.2f}s, budget {budget:.0f}s)")
    assert dt < budget, f"criterion {num} exceeded its {budget}s budget: {dt:.2f}s"


# -- 1: the dyadic Witt ring ----------------------------------------------------


def test_acceptance_1_dyadic_witt_ring(capsys):
    def check():
        t = witt_ring_table(DY)
        assert t.group == "Z+Z/2"
        assert t.free_generator == "<1>"
        assert t.torsion_generator == "<1> - <2>"
        # the torsion class really has order exactly 2
        d = witt_class(GramForm.diagonal(DY, [1])) - witt_class(
            GramForm.diagonal(DY, [2])
        )
        assert not d.is_zero and (d + d).is_zero
        # explicit isotropic vector certifying 2 * that class = 0
        f = GramForm.diagonal(DY, [1, 1, -2, -2])
        w = isotropy_oracle(f)
        assert w is not None
        assert tuple(int(e.payload) for e in w) == (1, 1, 0, 1)
        assert f.evaluate(w).is_zero()

    _run(capsys, 1, "dyadic Witt ring Z+Z/2", 1.0, check)


# -- 2: the periodicity matrix ---------------------------------------------------


def test_acceptance_2_bott_suite(capsys):
    def check():
        bd = build_bott()
        z = RingElem.monomial(1, z_exp=1)
        one = RingElem.one(bd.m.spec)
        assert bd.u.det() == z
        assert bd.p * bd.p == bd.p
        assert bd.a + bd.d == one
        assert bd.m.det().is_unit()
        assert specialize(bd, {"z": 1}) == InvMatrix.from_rows(
            bd.m.spec, [[0, 1], [-1, 0]]
        )
        assert specialize(bd, {"t": 1}).det() == one
        assert verify_bott_suite(bd)["all_pass"]

    _run(capsys, 2, "periodicity matrix identities", 1.0, check)


# -- 3: localization of the periodic system --------------------------------------


def test_acceptance_3_colimit_times_eight(capsys):
    def check():
        z = FgAbGroup(1)
        seq = GroupSeq((), GroupHom(z, z, ((8,),)))
        assert colimit(seq) == ColimResult(1, (2,), ())

    _run(capsys, 3, "colimit of (Z, x8) is Z[1/2]", 1.0, check)


# -- 4: shift invariance -----------------------------------------------------------


def _rand_hom(src: FgAbGroup, tgt: FgAbGroup, rng: random.Random) -> GroupHom:
    so, to = src.orders, tgt.orders
    rows = []
    for i in range(tgt.ngens):
        row = []
        for j in range(src.ngens):
            if so[j] and to[i] == 0:
                row.append(0)
            elif so[j]:
                step = to[i] // math.gcd(to[i], so[j])
                row.append(step * rng.randrange(0, max(1, to[i] // max(step, 1))))
            else:
                row.append(rng.randrange(-4, 5))
        rows.append(tuple(row))
    return GroupHom(src, tgt, tuple(rows))


def _random_seq(rng: random.Random) -> GroupSeq:
    g = FgAbGroup.of(
        rng.randrange(0, 3),
        sorted(rng.choice([2, 2, 3, 4]) for _ in range(rng.randrange(0, 3))),
    )
    prefix_groups = [
        FgAbGroup.of(
            rng.randrange(0, 3),
            sorted(rng.choice([2, 3, 4]) for _ in range(rng.randrange(0, 2))),
        )
        for _ in range(rng.randrange(0, 3))
    ]
    homs = []
    for i, pg in enumerate(prefix_groups):
        nxt = prefix_groups[i + 1] if i + 1 < len(prefix_groups) else g
        homs.append(_rand_hom(pg, nxt, rng))
    return GroupSeq(tuple(homs), _rand_hom(g, g, rng))


def test_acceptance_4_shift_invariance(capsys):
    def check():
        rng = random.Random(2026)
        for _ in range(50):
            seq = _random_seq(rng)
            for k in (1, 2, 3, 4):
                assert shift_invariance_check(seq, k)

    _run(capsys, 4, "colimit shift invariance, 50 sequences", 10.0, check)


# -- 5: exactness classification ----------------------------------------------------


def _chains() -> tuple[list, list]:
    z = FgAbGroup(1)
    z2 = FgAbGroup(0, (2,))
    z3 = FgAbGroup(0, (3,))
    z4 = FgAbGroup(0, (4,))
    z9 = FgAbGroup(0, (9,))
    zz = FgAbGroup(2)
    z22 = FgAbGroup(0, (2, 2))
    z24 = FgAbGroup(0, (2, 4))
    zt2 = FgAbGroup(1, (2,))
    t = FgAbGroup(0)

    def c(*homs):
        return list(homs)

    exact = [
        c(GroupHom.zero(t, z), GroupHom.identity(z), GroupHom.zero(z, t)),
        c(GroupHom.zero(t, z), GroupHom(z, z, ((2,),)),
          GroupHom(z, z2, ((1,),)), GroupHom.zero(z2, t)),
        c(GroupHom.zero(t, z), GroupHom(z, z, ((3,),)),
          GroupHom(z, z3, ((1,),)), GroupHom.zero(z3, t)),
        c(GroupHom.zero(t, z2), GroupHom(z2, z4, ((2,),)),
          GroupHom(z4, z2, ((1,),)), GroupHom.zero(z2, t)),
        c(GroupHom.zero(t, z3), GroupHom(z3, z9, ((3,),)),
          GroupHom(z9, z3, ((1,),)), GroupHom.zero(z3, t)),
        c(GroupHom.zero(t, z), GroupHom(z, zz, ((1,), (0,))),
          GroupHom(zz, z, ((0, 1),)), GroupHom.zero(z, t)),
        c(GroupHom.zero(t, z2), GroupHom(z2, z24, ((1,), (0,))),
          GroupHom(z24, z4, ((0, 1),)), GroupHom.zero(z4, t)),
        c(GroupHom.zero(t, z), GroupHom(z, zz, ((1,), (2,))),
          GroupHom(zz, z, ((2, -1),)), GroupHom.zero(z, t)),
        c(GroupHom.zero(t, z2), GroupHom(z2, zt2, ((0,), (1,))),
          GroupHom(zt2, z, ((1, 0),)), GroupHom.zero(z, t)),
        c(GroupHom.zero(t, z), GroupHom(z, z, ((2,),)), GroupHom(z, z2, ((1,),)),
          GroupHom.zero(z2, z3), GroupHom(z3, z9, ((3,),)),
          GroupHom(z9, z3, ((1,),)), GroupHom.zero(z3, t)),
    ]
    planted = [
        c(GroupHom.zero(t, z), GroupHom(z, z, ((2,),)), GroupHom.zero(z, t)),
        c(GroupHom.zero(t, z), GroupHom(z, z, ((4,),)),
          GroupHom(z, z2, ((1,),)), GroupHom.zero(z2, t)),
        c(GroupHom.zero(t, z), GroupHom(z, z, ((2,),)),
          GroupHom(z, z4, ((2,),)), GroupHom.zero(z4, t)),
        c(GroupHom.zero(t, z2), GroupHom.zero(z2, z4),
          GroupHom(z4, z2, ((1,),)), GroupHom.zero(z2, t)),
        c(GroupHom.zero(t, z), GroupHom(z, zz, ((1,), (0,))),
          GroupHom.zero(zz, z), GroupHom.zero(z, t)),
        c(GroupHom.zero(t, z2), GroupHom(z2, z22, ((1,), (1,))),
          GroupHom(z22, z2, ((1, 0),)), GroupHom.zero(z2, t)),
        c(GroupHom.zero(t, z3), GroupHom(z3, z9, ((3,),)),
          GroupHom(z9, z3, ((3,),)), GroupHom.zero(z3, t)),
        c(GroupHom.zero(t, z), GroupHom(z, zz, ((1,), (2,))),
          GroupHom(zz, z, ((2, 1),)), GroupHom.zero(z, t)),
        c(GroupHom.zero(t, z2), GroupHom(z2, zt2, ((0,), (1,))),
          GroupHom(zt2, z, ((2, 0),)), GroupHom.zero(z, t)),
        c(GroupHom.zero(t, z), GroupHom(z, z, ((2,),)), GroupHom(z, z2, ((1,),)),
          GroupHom.zero(z2, z3), GroupHom(z3, z9, ((3,),)),
          GroupHom.zero(z9, z3), GroupHom.zero(z3, t)),
    ]
    return exact, planted


def test_acceptance_5_exactness_classification(capsys):
    def check():
        exact, planted = _chains()
        assert len(exact) == 10 and len(planted) == 10
        misclassified = 0
        for chain in exact:
            if exactness_check(chain) != []:
                misclassified += 1
        for chain in planted:
            if exactness_check(chain) == []:
                misclassified += 1
        assert misclassified == 0

    _run(capsys, 5, "exactness checker, 20 hand-built chains", 5.0, check)


# -- 6: the nilpotent-extension round trip --------------------------------------------


def test_acceptance_6_lifting_roundtrip(capsys):
    def check():
        configs = [(Q, k, n) for k in (2, 3, 4) for n in (2, 3, 4)]
        configs.append((RingSpec.prime_field(5), 3, 4))
        for base, k, n in configs:
            rep = roundtrip_isomorphism_demo(base, k, n, 100)
            assert rep["all_passed"], rep
            assert rep["surjectivity_successes"] == 100
            assert rep["injectivity_successes"] == 100

    _run(capsys, 6, "lifting round trip, 10 configs x 100 trials", 60.0, check)


# -- 7: completeness of the invariants --------------------------------------------------


def _least_nonresidue(p: int) -> int:
    for s in range(2, p):
        if pow(s, (p - 1) // 2, p) == p - 1:
            return s
    raise AssertionError("no nonresidue found")


def _splits_completely(h: GramForm, cache: dict) -> bool:
    """Brute-force oracle: h is Witt trivial iff it splits into planes.

    The certificate is re-multiplied here rather than trusted, and over a
    prime field the leftover block is re-checked by exhaustive search.
    """
    key = (str(h.ring), tuple(sorted(str(e.payload) for e in h.diagonal_entries())))
    if key in cache:
        return cache[key]
    dec = witt_decompose(h)
    plane = hyperbolic(1, 1, h.ring).gram
    blocks = [plane] * dec.hyperbolic_rank
    if dec.anisotropic.dim:
        blocks.append(dec.anisotropic.gram)
    expected = InvMatrix.block_diag(blocks) if blocks else InvMatrix.zeros(h.ring, 0, 0)
    p = dec.change_of_basis
    assert p.conj_transpose() * h.gram * p == expected
    if h.ring.kind == "fp" and dec.anisotropic.dim:
        assert isotropy_oracle(dec.anisotropic) is None
    out = dec.anisotropic.dim == 0
    cache[key] = out
    return out


def test_acceptance_7_invariant_completeness(capsys):
    def check():
        cache: dict = {}
        for p in (5, 7, 11):
            spec = RingSpec.prime_field(p)
            reps = (1, _least_nonresidue(p))
            forms = [
                GramForm.diagonal(spec, list(diag))
                for d in range(1, 5)
                for diag in itertools.combinations_with_replacement(reps, d)
            ]
            assert len(forms) == 14
            _compare_all(spec, forms, cache)
        units = (1, -1, 2, -2)
        dyadic_forms = [
            GramForm.diagonal(DY, list(diag))
            for d in range(1, 5)
            for diag in itertools.combinations_with_replacement(units, d)
        ]
        assert len(dyadic_forms) == 69
        _compare_all(DY, dyadic_forms, cache)

    def _compare_all(spec, forms, cache):
        neg = {
            id(g): GramForm.diagonal(
                spec, [-e.payload for e in g.diagonal_entries()]
            )
            for g in forms
        }
        for f in forms:
            for g in forms:
                diff = orth_sum(f, neg[id(g)])
                assert witt_equiv(f, g) == _splits_completely(diff, cache), (
                    f.diagonal_entries(),
                    g.diagonal_entries(),
                )

    _run(capsys, 7, "invariant completeness vs splitting oracle", 120.0, check)


# -- 8: the product formula ------------------------------------------------------------


def _support(*values: Fraction) -> set:
    primes = {2}
    for v in values:
        for n in (v.numerator, v.denominator):
            n = abs(n)
            d = 2
            while d * d <= n:
                while n % d == 0:
                    primes.add(d)
                    n //= d
                d += 1
            if n > 1:
                primes.add(n)
    return primes


def test_acceptance_8_hilbert_product_formula(capsys):
    def check():
        rng = random.Random(97)
        for _ in range(200):
            a = Fraction(rng.choice([n for n in range(-40, 41) if n]), rng.randrange(1, 12))
            b = Fraction(rng.choice([n for n in range(-40, 41) if n]), rng.randrange(1, 12))
            prod = hilbert_symbol(a, b, "inf")
            for p in _support(a, b):
                prod *= hilbert_symbol(a, b, p)
            assert prod == 1, (a, b)

    _run(capsys, 8, "Hilbert product formula, 200 pairs", 5.0, check)


# -- 9: symplectic triviality -------------------------------------------------------------


def test_acceptance_9_symplectic_triviality(capsys):
    def check():
        rng = random.Random(99)
        plane = [[0, 1], [-1, 0]]
        specs = (RingSpec.prime_field(7), Q)
        for trial in range(50):
            spec = specs[trial % 2]
            n = rng.choice((2, 4, 6))
            base = InvMatrix.block_diag(
                [InvMatrix.from_rows(spec, plane)] * (n // 2)
            )
            for _ in range(5):
                s = _unimodular_shear(spec, n, rng)
                base = s.conj_transpose() * base * s
            f = GramForm(base, epsilon=-1)
            pmat = symplectic_basis(f)
            got = pmat.conj_transpose() * f.gram * pmat
            want = InvMatrix.block_diag(
                [InvMatrix.from_rows(spec, plane)] * (n // 2)
            )
            assert got == want

    _run(capsys, 9, "symplectic forms split into standard planes", 10.0, check)


def _unimodular_shear(spec: RingSpec, n: int, rng: random.Random) -> InvMatrix:
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    i, j = rng.sample(range(n), 2)
    rows[i][j] = rng.choice([-2, -1, 1, 2])
    return InvMatrix.from_rows(spec, rows)
