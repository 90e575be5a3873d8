"""Complete Witt invariants and Witt ring tables for the supported rings.

Each coefficient ring gets an invariant tuple that classifies symmetric
forms up to Witt equivalence:

* odd prime field: dimension mod 2 and the signed discriminant's square
  class;
* rationals: dimension mod 2, signature, signed discriminant, and
  Hasse symbols at the finitely many relevant primes;
* dyadic integers Z[1/2]: signature and the 2-adic valuation of the
  discriminant mod 2, which together map the Witt group onto Z + Z/2.

"Signed discriminant" means (-1)^(n(n-1)/2) * det.  Unlike the raw
determinant it is insensitive to adding hyperbolic planes, so it is a
class invariant.  The same twist is applied to the Hasse symbols: the
stored value is the symbol of the form with all hyperbolic planes
formally stripped (rank n mod 2), which makes it a class invariant too.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import IllFormed, NotClosed, SpecMismatch
from .forms import GramForm, diagonalize, tensor
from .intlinalg import bezout_vector, kernel_basis_int, prime_factors, square_part
from .rings import DYADIC, PRIME_FIELD, RATIONALS, RingSpec

__all__ = [
    "WittClass",
    "WittRingTable",
    "hilbert_symbol",
    "witt_class",
    "witt_equiv",
    "witt_ring_table",
]


# ---------------------------------------------------------------------------
# scalar number theory
# ---------------------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def _legendre(u: int, p: int) -> int:
    """Legendre symbol (u|p) for odd prime p and u not divisible by p."""
    return 1 if pow(u % p, (p - 1) // 2, p) == 1 else -1


def _nonresidue(p: int) -> int:
    for q in range(2, p):
        if _legendre(q, p) == -1:
            return q
    raise AssertionError("odd prime fields always have a non-residue")


def _fp_rep(u: int, p: int) -> int:
    """Canonical square-class representative mod p: 1 or the least non-residue."""
    return 1 if _legendre(u, p) == 1 else _nonresidue(p)


def _split_valuation(n: int, p: int) -> tuple[int, int]:
    a = 0
    while n % p == 0:
        n //= p
        a += 1
    return a, n


def _square_class_int(x: Any, what: str) -> int:
    """A nonzero rational, collapsed to an integer in the same square class."""
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise IllFormed(f"{what} must be a nonzero rational, got {x!r}")
    n = x if isinstance(x, int) else x.numerator * x.denominator
    if n == 0:
        raise IllFormed(f"{what} must be nonzero")
    return n


def _squarefree_int(x: int | Fraction) -> int:
    n = x if isinstance(x, int) else x.numerator * x.denominator
    return n // square_part(n) ** 2


def _infinite_place(place: Any) -> bool:
    if place is None:
        return True
    if isinstance(place, str):
        return place in ("inf", "oo")
    return isinstance(place, float) and math.isinf(place)


def hilbert_symbol(a: int | Fraction, b: int | Fraction, place: Any) -> int:
    """Hilbert symbol (a, b) at a place of the rationals.

    ``place`` is 2, an odd prime, or the real place (pass ``None``,
    ``"inf"``, or ``math.inf``).  Computed by the closed local formulas:
    writing a = p^alpha * u and b = p^beta * v with u, v prime to p,

    * odd p:   (-1)^(alpha beta (p-1)/2) * (u|p)^beta * (v|p)^alpha
    * p = 2:   (-1)^(eps(u) eps(v) + alpha omega(v) + beta omega(u))

    with eps(u) = (u-1)/2 and omega(u) = (u^2-1)/8 taken mod 2.
    """
    x = _square_class_int(a, "a")
    y = _square_class_int(b, "b")
    if _infinite_place(place):
        return -1 if x < 0 and y < 0 else 1
    if isinstance(place, bool) or not isinstance(place, int) or not _is_prime(place):
        raise IllFormed(f"place must be a prime or the infinite place, got {place!r}")
    p = place
    alpha, u = _split_valuation(x, p)
    beta, v = _split_valuation(y, p)
    if p == 2:
        e = ((u - 1) // 2) * ((v - 1) // 2)
        e += alpha * ((v * v - 1) // 8) + beta * ((u * u - 1) // 8)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= _legendre(u, p)
    if alpha % 2:
        sign *= _legendre(v, p)
    return sign


# ---------------------------------------------------------------------------
# the invariant tuple
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WittClass:
    """Witt class of a symmetric form, stored as its complete invariants.

    Fields not meaningful for a ring stay at their defaults so that
    dataclass equality decides Witt equivalence directly:

    * prime field: dim_mod2, disc (1 or the least non-residue);
    * rationals: dim_mod2, signature, disc (signed squarefree integer),
      hasse (sorted (prime, -1) pairs; omitted primes carry +1);
    * dyadic: signature and dyadic_disc_parity, with disc the matching
      representative in {1, -1, 2, -2} and dim_mod2 = signature mod 2.

    The hasse and disc fields store the hyperbolic-stable normalization
    described in the module docstring, so adding hyperbolic planes does
    not move them.
    """

    ring: RingSpec
    dim_mod2: int = 0
    signature: int = 0
    disc: int = 1
    hasse: tuple[tuple[int, int], ...] = ()
    dyadic_disc_parity: int = 0

    @classmethod
    def zero(cls, ring: RingSpec) -> "WittClass":
        return cls(ring)

    @property
    def is_zero(self) -> bool:
        return self == WittClass.zero(self.ring)

    # -- group structure ---------------------------------------------------
    #
    # Orthogonal sum on classes.  The signed disc of f + g is
    # d(f) d(g) (-1)^(nm), and when both ranks are odd the stripped Hasse
    # symbol picks up one more destabilization step; everything is
    # computable from the stored tuples alone.

    def __add__(self, other: "WittClass") -> "WittClass":
        if not isinstance(other, WittClass):
            return NotImplemented
        if self.ring != other.ring:
            raise SpecMismatch("cannot add Witt classes over different rings")
        kind = self.ring.kind
        r = (self.dim_mod2 + other.dim_mod2) % 2
        cross = self.dim_mod2 * other.dim_mod2
        if kind == PRIME_FIELD:
            p = self.ring.p
            assert p is not None
            d = self.disc * other.disc * (-1 if cross else 1)
            return WittClass(self.ring, dim_mod2=r, disc=_fp_rep(d % p, p))
        if kind == DYADIC:
            parity = (self.dyadic_disc_parity + other.dyadic_disc_parity) % 2
            neg = (self.disc < 0) != (other.disc < 0)
            if cross:
                neg = not neg
            return WittClass(
                self.ring,
                dim_mod2=r,
                signature=self.signature + other.signature,
                disc=(-1 if neg else 1) * (2 if parity else 1),
                dyadic_disc_parity=parity,
            )
        disc = _squarefree_int(self.disc * other.disc * (-1 if cross else 1))
        mine = dict(self.hasse)
        theirs = dict(other.hasse)
        places = {2, *mine, *theirs}
        places.update(prime_factors(self.disc))
        places.update(prime_factors(other.disc))
        minus = []
        for p in sorted(places):
            v = mine.get(p, 1) * theirs.get(p, 1)
            v *= hilbert_symbol(self.disc, other.disc, p)
            if cross:
                v *= hilbert_symbol(-self.disc * other.disc, -1, p)
            if v < 0:
                minus.append((p, -1))
        return WittClass(
            self.ring,
            dim_mod2=r,
            signature=self.signature + other.signature,
            disc=disc,
            hasse=tuple(minus),
        )

    def __neg__(self) -> "WittClass":
        kind = self.ring.kind
        r = self.dim_mod2
        if kind == PRIME_FIELD:
            p = self.ring.p
            assert p is not None
            return WittClass(self.ring, dim_mod2=r, disc=_fp_rep(self.disc * (-1 if r else 1) % p, p))
        if kind == DYADIC:
            return WittClass(
                self.ring,
                dim_mod2=r,
                signature=-self.signature,
                disc=-self.disc if r else self.disc,
                dyadic_disc_parity=self.dyadic_disc_parity,
            )
        if r:
            return WittClass(self.ring, r, -self.signature, -self.disc, self.hasse)
        mine = dict(self.hasse)
        places = {2, *mine}
        places.update(prime_factors(self.disc))
        minus = []
        for p in sorted(places):
            if mine.get(p, 1) * hilbert_symbol(self.disc, -1, p) < 0:
                minus.append((p, -1))
        return WittClass(self.ring, r, -self.signature, self.disc, tuple(minus))

    def __sub__(self, other: "WittClass") -> "WittClass":
        if not isinstance(other, WittClass):
            return NotImplemented
        return self + (-other)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        kind = self.ring.kind
        if kind == DYADIC:
            return {"signature": self.signature, "parity": self.dyadic_disc_parity}
        if kind == PRIME_FIELD:
            return {"dim_mod2": self.dim_mod2, "disc": self.disc}
        return {
            "dim_mod2": self.dim_mod2,
            "signature": self.signature,
            "disc": self.disc,
            "hasse": {str(p): v for p, v in self.hasse},
        }


# ---------------------------------------------------------------------------
# computing classes
# ---------------------------------------------------------------------------


def _stripped_hasse(entries: Sequence[Fraction], det: Fraction, n: int) -> tuple[tuple[int, int], ...]:
    """Hasse symbols of the form with its hyperbolic part formally removed.

    Removing one hyperbolic plane from a form g multiplies the symbol by
    (-det(g), -1)_p and flips the sign of the determinant, so stripping
    floor(n/2) planes multiplies the raw symbol prod_{i<j} (a_i, a_j)_p by
    the alternating product below.  Symbols at primes dividing none of
    2, the entries are +1, so only those places are visited.
    """
    places = {2}
    for e in entries:
        places.update(prime_factors(e.numerator))
        places.update(prime_factors(e.denominator))
    minus = []
    for p in sorted(places):
        c = 1
        for a, b in itertools.combinations(entries, 2):
            c *= hilbert_symbol(a, b, p)
        for j in range(n // 2):
            c *= hilbert_symbol(det if j % 2 else -det, -1, p)
        if c < 0:
            minus.append((p, -1))
    return tuple(minus)


def witt_class(f: GramForm) -> WittClass:
    """Complete Witt invariants of a symmetric form.

    Skew forms over a field are hyperbolic, hence the zero class.  Skew
    forms over Z[1/2] are out of scope and rejected.
    """
    spec = f.ring
    if spec.kind not in (PRIME_FIELD, RATIONALS, DYADIC):
        raise SpecMismatch(f"no Witt invariants over {spec}")
    if f.epsilon == -1:
        if spec.kind == DYADIC:
            raise SpecMismatch("skew classes are only classified over fields")
        return WittClass.zero(spec)
    _, d = diagonalize(f)
    entries = [e.payload for e in d.diagonal_entries()]
    n = f.dim
    twist = (n * (n - 1) // 2) % 2
    if spec.kind == PRIME_FIELD:
        p = spec.p
        assert p is not None
        det = 1
        for e in entries:
            det = det * e % p
        signed = (-det) % p if twist else det
        return WittClass(spec, dim_mod2=n % 2, disc=_fp_rep(signed, p))
    signature = sum(1 if e > 0 else -1 for e in entries)
    det = Fraction(1)
    for e in entries:
        det *= e
    if spec.kind == RATIONALS:
        return WittClass(
            spec,
            dim_mod2=n % 2,
            signature=signature,
            disc=_squarefree_int(-det if twist else det),
            hasse=_stripped_hasse(entries, det, n),
        )
    # dyadic: diagonalize has normalized every entry into {+-1, +-2}
    parity = 0
    for e in entries:
        assert abs(e) in (1, 2)
        if abs(e) == 2:
            parity ^= 1
    negative = (det < 0) != bool(twist)
    return WittClass(
        spec,
        dim_mod2=n % 2,
        signature=signature,
        disc=(-1 if negative else 1) * (2 if parity else 1),
        dyadic_disc_parity=parity,
    )


def witt_equiv(f: GramForm, g: GramForm) -> bool:
    """Whether two forms over the same ring represent the same Witt class."""
    if f.ring != g.ring or f.epsilon != g.epsilon:
        raise SpecMismatch("comparing forms needs a shared ring and symmetry sign")
    return witt_class(f) == witt_class(g)


# ---------------------------------------------------------------------------
# Witt ring tables
# ---------------------------------------------------------------------------


def _fp_label(c: WittClass) -> str:
    p = c.ring.p
    assert p is not None
    if c.dim_mod2 == 0:
        return "0" if c.disc == 1 else f"<1,{(-c.disc) % p}>"
    return f"<{c.disc}>"


def _fp_rep_form(c: WittClass) -> GramForm:
    p = c.ring.p
    assert p is not None
    if c.dim_mod2 == 0:
        entries = [] if c.disc == 1 else [1, (-c.disc) % p]
    else:
        entries = [c.disc]
    return GramForm.diagonal(c.ring, entries)


def _dyadic_label(signature: int, parity: int) -> str:
    if signature == 0:
        return "0" if parity == 0 else "<1,-2>"
    unit = 1 if signature > 0 else -1
    entries = [unit] * (abs(signature) - parity) + [2 * unit] * parity
    return "<" + ",".join(str(e) for e in entries) + ">"


@dataclass(frozen=True)
class WittRingTable:
    """Addition and multiplication tables plus the abstract group name.

    Over a prime field the group is finite, so ``classes`` lists every
    class generated by the input forms (lexicographic on invariant
    tuples) and the tables are indexed by that list.  Over the dyadic
    integers the group is infinite, so ``classes`` lists the distinct
    generator classes and the tables are indexed by ``generators``.
    """

    ring: RingSpec
    group: str
    generators: tuple[str, ...]
    classes: tuple[str, ...]
    add: tuple[tuple[str, ...], ...]
    mul: tuple[tuple[str, ...], ...]
    free_generator: str | None = None
    torsion_generator: str | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "ring": str(self.ring),
            "group": self.group,
            "generators": list(self.generators),
            "classes": list(self.classes),
            "add": [list(row) for row in self.add],
            "mul": [list(row) for row in self.mul],
        }
        if self.free_generator is not None:
            out["free_generator"] = self.free_generator
        if self.torsion_generator is not None:
            out["torsion_generator"] = self.torsion_generator
        return out


_DEFAULT_DYADIC_DIAGS = ((1,), (2,), (-1,), (-2,))


def _class_order(c: WittClass) -> int:
    acc = c
    order = 1
    while not acc.is_zero:
        acc = acc + c
        order += 1
        assert order <= 8, "prime-field Witt groups have order at most 4"
    return order


def _fp_table(ring: RingSpec, gens: Sequence[GramForm], labels: tuple[str, ...]) -> WittRingTable:
    gen_classes = [witt_class(g) for g in gens]
    closure = {WittClass.zero(ring), *gen_classes}
    grew = True
    while grew:
        grew = False
        for x in list(closure):
            for y in (-x, *(x + z for z in list(closure))):
                if y not in closure:
                    closure.add(y)
                    grew = True
    ordered = sorted(closure, key=lambda c: (c.dim_mod2, c.disc))
    index = {c: i for i, c in enumerate(ordered)}
    add_rows = []
    mul_rows = []
    for x in ordered:
        add_rows.append(tuple(_fp_label(x + y) for y in ordered))
        row = []
        for y in ordered:
            prod = witt_class(tensor(_fp_rep_form(x), _fp_rep_form(y)))
            if prod not in index:
                raise NotClosed(
                    f"product {_fp_label(x)} * {_fp_label(y)} = {_fp_label(prod)} "
                    "lies outside the group the generators span"
                )
            row.append(_fp_label(prod))
        mul_rows.append(tuple(row))
    order = len(ordered)
    if order == 1:
        group = "0"
    elif order == 2:
        group = "Z/2"
    else:
        exponent = max(_class_order(c) for c in ordered)
        group = "Z/4" if exponent == 4 else "Z/2+Z/2"
    return WittRingTable(
        ring=ring,
        group=group,
        generators=labels,
        classes=tuple(_fp_label(c) for c in ordered),
        add=tuple(add_rows),
        mul=tuple(mul_rows),
    )


def _dyadic_table(ring: RingSpec, gens: Sequence[GramForm], labels: tuple[str, ...]) -> WittRingTable:
    gen_classes = [witt_class(g) for g in gens]
    sigs = [c.signature for c in gen_classes]
    bits = [c.dyadic_disc_parity for c in gen_classes]
    step = math.gcd(*sigs)
    # Parities reachable at signature zero: the parity functional on the
    # kernel of the signature row.  Nonzero anywhere means the lattice
    # contains the full torsion summand.
    torsion = False
    for vec in kernel_basis_int([sigs]):
        if sum(l * b for l, b in zip(vec, bits)) % 2:
            torsion = True
            break
    if step == 0 and any(bits):
        torsion = True

    def member(c: WittClass) -> bool:
        s, b = c.signature, c.dyadic_disc_parity
        if step == 0:
            return s == 0 and (b == 0 or torsion)
        if s % step:
            return False
        _, coeffs = bezout_vector(tuple(sigs))
        reached = sum((s // step) * l * b_ for l, b_ in zip(coeffs, bits)) % 2
        return reached == b % 2 or torsion

    add_rows = []
    mul_rows = []
    for i, gi in enumerate(gens):
        add_rows.append(
            tuple(
                _dyadic_label((c := gen_classes[i] + gen_classes[j]).signature, c.dyadic_disc_parity)
                for j in range(len(gens))
            )
        )
        row = []
        for j, gj in enumerate(gens):
            prod = witt_class(tensor(gi, gj))
            if not member(prod):
                raise NotClosed(
                    f"product {labels[i]} * {labels[j]} = "
                    f"{_dyadic_label(prod.signature, prod.dyadic_disc_parity)} "
                    "lies outside the group the generators span"
                )
            row.append(_dyadic_label(prod.signature, prod.dyadic_disc_parity))
        mul_rows.append(tuple(row))
    if step and torsion:
        group = "Z+Z/2"
    elif step:
        group = "Z"
    else:
        group = "Z/2" if torsion else "0"
    free_gen: str | None = None
    torsion_gen: str | None = None
    if step == 1 and torsion:
        # full lattice: the stated generators of Z + Z/2
        free_gen = "<1>"
        torsion_gen = "<1> - <2>"
    elif step:
        _, coeffs = bezout_vector(tuple(sigs))
        parity = sum(l * b for l, b in zip(coeffs, bits)) % 2
        free_gen = _dyadic_label(step, parity)
        if torsion:
            torsion_gen = "<1,-2>"
    elif torsion:
        torsion_gen = "<1,-2>"
    distinct = sorted(
        {(c.signature, c.dyadic_disc_parity) for c in gen_classes}
    )
    return WittRingTable(
        ring=ring,
        group=group,
        generators=labels,
        classes=tuple(_dyadic_label(s, b) for s, b in distinct),
        add=tuple(add_rows),
        mul=tuple(mul_rows),
        free_generator=free_gen,
        torsion_generator=torsion_gen,
    )


def witt_ring_table(ring: RingSpec, generators: Sequence[GramForm] | None = None) -> WittRingTable:
    """Tabulate the Witt classes spanned by the generators.

    With ``generators=None`` a canonical spanning set is used: diagonal
    forms over {1, 2, -1, -2} for the dyadic integers, and <1> plus the
    least non-residue for a prime field.  Raises NotClosed when some
    tensor product of generators lands outside the spanned group, since
    the table would then not describe a ring.
    """
    if ring.kind not in (PRIME_FIELD, DYADIC):
        raise SpecMismatch(f"Witt ring tables cover prime fields and Z[1/2], not {ring}")
    if generators is None:
        if ring.kind == DYADIC:
            gens = [GramForm.diagonal(ring, list(d)) for d in _DEFAULT_DYADIC_DIAGS]
        else:
            assert ring.p is not None
            gens = [GramForm.diagonal(ring, [1]), GramForm.diagonal(ring, [_nonresidue(ring.p)])]
    else:
        gens = list(generators)
        if not gens:
            raise IllFormed("at least one generator form is required")
        for g in gens:
            if not isinstance(g, GramForm):
                raise IllFormed(f"generators must be forms, got {type(g).__name__}")
            if g.ring != ring:
                raise SpecMismatch("generator ring does not match the table ring")
            if g.epsilon != 1:
                raise SpecMismatch("Witt ring tables take symmetric generators")
    if ring.kind == PRIME_FIELD:
        labels = tuple(_fp_label(witt_class(g)) for g in gens)
        return _fp_table(ring, gens, labels)
    labels = tuple(
        _dyadic_label((c := witt_class(g)).signature, c.dyadic_disc_parity) for g in gens
    )
    return _dyadic_table(ring, gens, labels)
