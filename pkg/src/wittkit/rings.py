"""Exact arithmetic in the supported involutive coefficient rings.

Five ring kinds are supported, all with 2 invertible and all represented
exactly (no floating point anywhere):

* ``fp`` -- the prime field F_p for an odd prime p; payload is an int in
  ``[0, p)``.  The involution is the identity.
* ``q`` -- the rationals; payload is a ``fractions.Fraction``.  Identity
  involution.
* ``dyadic`` -- Z[1/2], rationals whose denominator is a power of two;
  payload is a ``Fraction`` restricted accordingly.  Identity involution.
* ``laurent2`` -- the two-variable Laurent ring Z[1/2][t, 1/t, z, 1/z] with
  the involution t -> 1/t, z -> 1/z; payload is a sorted tuple of
  ``((t_exp, z_exp), coeff)`` pairs with nonzero dyadic coefficients.
* ``truncnil`` -- the truncated polynomial ring B[x]/(x^k) over one of the
  rings above (nesting depth one); payload is a tuple of exactly k base
  payloads, constant term first.  The involution fixes x and acts on
  coefficients.

Elements are immutable, hashable, and kept in canonical form, so ``==`` is
exact equality in the ring.

>>> R = RingSpec.trunc_nil(RingSpec.rationals(), 3)
>>> x = nil_generator(R)
>>> ((1 + x) * (1 - x + x**2)).payload      # 1/(1+x) truncated at x^3
(Fraction(1, 1), Fraction(0, 1), Fraction(0, 1))
>>> (1 + x).inv() == 1 - x + x**2
True
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

from .errors import IllFormed, NonUnit, SpecMismatch

PRIME_FIELD = "fp"
RATIONALS = "q"
DYADIC = "dyadic"
LAURENT2 = "laurent2"
TRUNC_NIL = "truncnil"

_SCALAR_KINDS = (PRIME_FIELD, RATIONALS, DYADIC)


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class RingSpec:
    """Identifier of one supported ring; shared by all elements over it."""

    kind: str
    p: int | None = None
    base: "RingSpec | None" = None
    k: int | None = None

    def __post_init__(self) -> None:
        if self.kind == PRIME_FIELD:
            if self.p is None or not _is_odd_prime(self.p):
                raise IllFormed(f"prime field needs an odd prime, got {self.p!r}")
        elif self.kind in (RATIONALS, DYADIC, LAURENT2):
            if self.p is not None or self.base is not None or self.k is not None:
                raise IllFormed(f"{self.kind} takes no parameters")
        elif self.kind == TRUNC_NIL:
            if self.base is None or self.base.kind == TRUNC_NIL:
                raise IllFormed("truncated ring needs a non-truncated base ring")
            if self.k is None or self.k < 1:
                raise IllFormed("truncation order must be a positive integer")
        else:
            raise IllFormed(f"unknown ring kind {self.kind!r}")

    # -- constructors ----------------------------------------------------

    @classmethod
    def prime_field(cls, p: int) -> "RingSpec":
        return cls(PRIME_FIELD, p=p)

    @classmethod
    def rationals(cls) -> "RingSpec":
        return cls(RATIONALS)

    @classmethod
    def dyadic(cls) -> "RingSpec":
        return cls(DYADIC)

    @classmethod
    def laurent2(cls) -> "RingSpec":
        return cls(LAURENT2)

    @classmethod
    def trunc_nil(cls, base: "RingSpec", k: int) -> "RingSpec":
        return cls(TRUNC_NIL, base=base, k=k)

    # -- properties -------------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind in (PRIME_FIELD, RATIONALS)

    @property
    def has_trivial_involution(self) -> bool:
        return self.kind != LAURENT2 and not (
            self.kind == TRUNC_NIL and self.base is not None and self.base.kind == LAURENT2
        )

    def __str__(self) -> str:
        if self.kind == PRIME_FIELD:
            return f"fp:{self.p}"
        if self.kind == TRUNC_NIL:
            return f"truncnil({self.base},k={self.k})"
        return self.kind

    # -- JSON -------------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == PRIME_FIELD:
            return {"ring": PRIME_FIELD, "p": self.p}
        if self.kind == TRUNC_NIL:
            assert self.base is not None
            return {"ring": TRUNC_NIL, "base": self.base.to_json(), "k": self.k}
        return {"ring": self.kind}

    @classmethod
    def from_tag(cls, tag: str) -> "RingSpec":
        """Parse a compact ring tag: ``q``, ``dyadic``, ``laurent2``,
        ``fp:7``, ``truncnil:<base tag>:<k>``."""
        parts = tag.strip().split(":")
        try:
            if parts[0] == PRIME_FIELD and len(parts) == 2:
                return cls.prime_field(int(parts[1]))
            if parts[0] == TRUNC_NIL and len(parts) >= 3:
                return cls.trunc_nil(cls.from_tag(":".join(parts[1:-1])), int(parts[-1]))
        except ValueError:
            raise IllFormed(f"cannot parse ring tag {tag!r}") from None
        if len(parts) == 1 and parts[0] in (RATIONALS, DYADIC, LAURENT2):
            return cls(parts[0])
        raise IllFormed(f"cannot parse ring tag {tag!r}")

    @classmethod
    def from_json(cls, obj: Any) -> "RingSpec":
        if isinstance(obj, str):
            return cls.from_tag(obj)
        if not isinstance(obj, dict) or "ring" not in obj:
            raise IllFormed(f"ring spec must be an object with a 'ring' tag, got {obj!r}")
        kind = obj["ring"]
        if kind == PRIME_FIELD:
            return cls.prime_field(int(obj["p"]))
        if kind == TRUNC_NIL:
            return cls.trunc_nil(cls.from_json(obj["base"]), int(obj["k"]))
        if kind in (RATIONALS, DYADIC, LAURENT2):
            return cls(kind)
        raise IllFormed(f"unknown ring tag {kind!r}")


# ---------------------------------------------------------------------------
# payload-level arithmetic
#
# Hot paths (matrix products over truncated rings) run on raw payloads to
# avoid wrapper churn; RingElem is a thin immutable facade over these.
# ---------------------------------------------------------------------------


def _frac(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise IllFormed(f"expected an integer or Fraction, got {value!r}")


def canon_payload(spec: RingSpec, raw: Any) -> Any:
    """Normalize ``raw`` into the canonical payload for ``spec``."""
    if spec.kind == PRIME_FIELD:
        if isinstance(raw, Fraction):
            return _from_fraction(spec, raw)
        if not isinstance(raw, int):
            raise IllFormed(f"prime field payload must be an int, got {raw!r}")
        return raw % spec.p  # type: ignore[operator]
    if spec.kind == RATIONALS:
        return _frac(raw)
    if spec.kind == DYADIC:
        q = _frac(raw)
        if not _is_dyadic(q):
            raise IllFormed(f"{q} is not a dyadic rational")
        return q
    if spec.kind == LAURENT2:
        if isinstance(raw, (int, Fraction)):
            return _laurent_from_terms([((0, 0), _frac(raw))])
        if isinstance(raw, dict):
            return _laurent_from_terms(list(raw.items()))
        if isinstance(raw, (list, tuple)):
            return _laurent_from_terms(list(raw))
        raise IllFormed(f"cannot read Laurent payload from {raw!r}")
    if spec.kind == TRUNC_NIL:
        base = spec.base
        assert base is not None and spec.k is not None
        if isinstance(raw, (int, Fraction)):
            coeffs: list[Any] = [raw]
        elif isinstance(raw, (list, tuple)):
            coeffs = list(raw)
        else:
            raise IllFormed(f"cannot read truncated payload from {raw!r}")
        out = [canon_payload(base, c) for c in coeffs[: spec.k]]
        zero = _zero(base)
        out.extend(zero for _ in range(spec.k - len(out)))
        return tuple(out)
    raise IllFormed(f"unknown ring kind {spec.kind!r}")


def _laurent_from_terms(terms: Iterable[tuple[Any, Any]]) -> tuple:
    acc: dict[tuple[int, int], Fraction] = {}
    for key, coeff in terms:
        et, ez = key
        c = _frac(coeff)
        if not _is_dyadic(c):
            raise IllFormed(f"Laurent coefficient {c} is not dyadic")
        k = (int(et), int(ez))
        acc[k] = acc.get(k, Fraction(0)) + c
    return tuple(sorted((k, v) for k, v in acc.items() if v != 0))


def _zero(spec: RingSpec) -> Any:
    if spec.kind == PRIME_FIELD:
        return 0
    if spec.kind in (RATIONALS, DYADIC):
        return Fraction(0)
    if spec.kind == LAURENT2:
        return ()
    assert spec.base is not None and spec.k is not None
    return (_zero(spec.base),) * spec.k


def _one(spec: RingSpec) -> Any:
    if spec.kind == PRIME_FIELD:
        return 1
    if spec.kind in (RATIONALS, DYADIC):
        return Fraction(1)
    if spec.kind == LAURENT2:
        return (((0, 0), Fraction(1)),)
    assert spec.base is not None and spec.k is not None
    return (_one(spec.base),) + (_zero(spec.base),) * (spec.k - 1)


def _add(spec: RingSpec, a: Any, b: Any) -> Any:
    if spec.kind == PRIME_FIELD:
        return (a + b) % spec.p  # type: ignore[operator]
    if spec.kind in (RATIONALS, DYADIC):
        return a + b
    if spec.kind == LAURENT2:
        acc = dict(a)
        for key, coeff in b:
            s = acc.get(key, Fraction(0)) + coeff
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        return tuple(sorted(acc.items()))
    base = spec.base
    return tuple(_add(base, x, y) for x, y in zip(a, b))  # type: ignore[arg-type]


def _neg(spec: RingSpec, a: Any) -> Any:
    if spec.kind == PRIME_FIELD:
        return (-a) % spec.p  # type: ignore[operator]
    if spec.kind in (RATIONALS, DYADIC):
        return -a
    if spec.kind == LAURENT2:
        return tuple((key, -coeff) for key, coeff in a)
    base = spec.base
    return tuple(_neg(base, x) for x in a)  # type: ignore[arg-type]


def _mul(spec: RingSpec, a: Any, b: Any) -> Any:
    if spec.kind == PRIME_FIELD:
        return (a * b) % spec.p  # type: ignore[operator]
    if spec.kind in (RATIONALS, DYADIC):
        return a * b
    if spec.kind == LAURENT2:
        acc: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in a:
            for (i2, j2), c2 in b:
                key = (i1 + i2, j1 + j2)
                s = acc.get(key, Fraction(0)) + c1 * c2
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return tuple(sorted(acc.items()))
    base = spec.base
    k = spec.k
    assert base is not None and k is not None
    zero = _zero(base)
    out = [zero] * k
    for i, x in enumerate(a):
        if _is_zero(base, x):
            continue
        for j in range(k - i):
            y = b[j]
            if _is_zero(base, y):
                continue
            out[i + j] = _add(base, out[i + j], _mul(base, x, y))
    return tuple(out)


def _is_zero(spec: RingSpec, a: Any) -> bool:
    if spec.kind == PRIME_FIELD:
        return a == 0
    if spec.kind in (RATIONALS, DYADIC):
        return not a
    if spec.kind == LAURENT2:
        return not a
    base = spec.base
    return all(_is_zero(base, x) for x in a)  # type: ignore[arg-type]


def _involute(spec: RingSpec, a: Any) -> Any:
    if spec.kind == LAURENT2:
        return tuple(sorted(((-i, -j), c) for (i, j), c in a))
    if spec.kind == TRUNC_NIL:
        base = spec.base
        assert base is not None
        if base.kind == LAURENT2:
            return tuple(_involute(base, x) for x in a)
        return a
    return a


def _is_unit(spec: RingSpec, a: Any) -> bool:
    if spec.kind == PRIME_FIELD:
        return a != 0
    if spec.kind == RATIONALS:
        return bool(a)
    if spec.kind == DYADIC:
        if not a:
            return False
        n = abs(a.numerator)
        return n & (n - 1) == 0
    if spec.kind == LAURENT2:
        if len(a) != 1:
            return False
        (_, coeff), = a
        n = abs(coeff.numerator)
        return n & (n - 1) == 0
    base = spec.base
    return _is_unit(base, a[0])  # type: ignore[index]


def _inv(spec: RingSpec, a: Any) -> Any:
    if not _is_unit(spec, a):
        raise NonUnit(f"{payload_repr(spec, a)} is not a unit of {spec}")
    if spec.kind == PRIME_FIELD:
        return pow(a, spec.p - 2, spec.p)  # type: ignore[operator]
    if spec.kind in (RATIONALS, DYADIC):
        return 1 / a
    if spec.kind == LAURENT2:
        ((i, j), coeff), = a
        return (((-i, -j), 1 / coeff),)
    base = spec.base
    k = spec.k
    assert base is not None and k is not None
    # a = a0 (1 + m) with m nilpotent: invert a0, then a geometric series in -m.
    a0inv = _inv(base, a[0])
    m = tuple(_mul(base, a0inv, x) for x in a[1:])  # coefficients of m, degree 1..k-1
    m_full = (_zero(base),) + m
    out = _one(spec)
    term = _one(spec)
    for _ in range(1, k):
        term = _mul(spec, term, _neg(spec, m_full))
        if _is_zero(spec, term):
            break
        out = _add(spec, out, term)
    scalar = (a0inv,) + (_zero(base),) * (k - 1)
    return _mul(spec, out, scalar)


def _is_nilpotent(spec: RingSpec, a: Any) -> bool:
    if spec.kind == TRUNC_NIL:
        base = spec.base
        return _is_zero(base, a[0])  # type: ignore[arg-type]
    return _is_zero(spec, a)


def _from_fraction(spec: RingSpec, q: Fraction) -> Any:
    if spec.kind == PRIME_FIELD:
        p = spec.p
        assert p is not None
        if q.denominator % p == 0:
            raise NonUnit(f"denominator of {q} vanishes mod {p}")
        return q.numerator * pow(q.denominator, p - 2, p) % p
    if spec.kind == RATIONALS:
        return q
    if spec.kind == DYADIC:
        if not _is_dyadic(q):
            raise IllFormed(f"{q} is not a dyadic rational")
        return q
    if spec.kind == LAURENT2:
        if not _is_dyadic(q):
            raise IllFormed(f"{q} is not a dyadic rational")
        return (((0, 0), q),) if q else ()
    base = spec.base
    k = spec.k
    assert base is not None and k is not None
    return (_from_fraction(base, q),) + (_zero(base),) * (k - 1)


def payload_repr(spec: RingSpec, a: Any) -> str:
    if spec.kind == PRIME_FIELD:
        return str(a)
    if spec.kind in (RATIONALS, DYADIC):
        return str(a)
    if spec.kind == LAURENT2:
        if not a:
            return "0"
        parts = []
        for (i, j), c in a:
            factors = [] if c == 1 and (i or j) else [str(c)]
            if i:
                factors.append("t" if i == 1 else f"t^{i}")
            if j:
                factors.append("z" if j == 1 else f"z^{j}")
            parts.append("*".join(factors) or "1")
        return " + ".join(parts)
    base = spec.base
    assert base is not None
    parts = []
    for d, c in enumerate(a):
        if _is_zero(base, c):
            continue
        s = payload_repr(base, c)
        if d == 0:
            parts.append(s)
        else:
            xs = "x" if d == 1 else f"x^{d}"
            parts.append(xs if s == "1" else f"({s})*{xs}")
    return " + ".join(parts) or "0"


def payload_to_json(spec: RingSpec, a: Any) -> Any:
    if spec.kind == PRIME_FIELD:
        return a
    if spec.kind in (RATIONALS, DYADIC):
        return [a.numerator, a.denominator]
    if spec.kind == LAURENT2:
        return [[[i, j], [c.numerator, c.denominator]] for (i, j), c in a]
    base = spec.base
    return [payload_to_json(base, c) for c in a]  # type: ignore[arg-type]


def payload_from_json(spec: RingSpec, obj: Any) -> Any:
    try:
        if spec.kind == PRIME_FIELD:
            return canon_payload(spec, int(obj))
        if spec.kind in (RATIONALS, DYADIC):
            num, den = obj
            return canon_payload(spec, Fraction(int(num), int(den)))
        if spec.kind == LAURENT2:
            terms = [((int(i), int(j)), Fraction(int(num), int(den)))
                     for (i, j), (num, den) in obj]
            return canon_payload(spec, terms)
        base = spec.base
        k = spec.k
        assert base is not None and k is not None
        if not isinstance(obj, list) or len(obj) > k:
            raise IllFormed(f"truncated payload needs at most {k} coefficients")
        coeffs = [payload_from_json(base, c) for c in obj]
        coeffs.extend(_zero(base) for _ in range(k - len(coeffs)))
        return tuple(coeffs)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise IllFormed(f"bad payload {obj!r} for {spec}: {exc}") from exc


# ---------------------------------------------------------------------------
# public element wrapper
# ---------------------------------------------------------------------------


class RingElem:
    """Immutable element of one of the supported rings.

    Arithmetic operators require both operands over the same ``RingSpec``
    (ints and Fractions coerce through the canonical embedding).  Equality
    is exact ring equality because payloads are canonical.
    """

    __slots__ = ("spec", "payload")

    def __init__(self, spec: RingSpec, payload: Any, *, _raw: bool = False):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "payload", payload if _raw else canon_payload(spec, payload))

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("RingElem is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, spec: RingSpec) -> "RingElem":
        return cls(spec, _zero(spec), _raw=True)

    @classmethod
    def one(cls, spec: RingSpec) -> "RingElem":
        return cls(spec, _one(spec), _raw=True)

    @classmethod
    def from_fraction(cls, spec: RingSpec, q: Fraction | int) -> "RingElem":
        return cls(spec, _from_fraction(spec, _frac(q)), _raw=True)

    @classmethod
    def monomial(cls, coeff: Fraction | int, t_exp: int = 0, z_exp: int = 0) -> "RingElem":
        """Laurent monomial coeff * t^t_exp * z^z_exp."""
        return cls(RingSpec.laurent2(), [((t_exp, z_exp), coeff)])

    @classmethod
    def series(cls, spec: RingSpec, coeffs: Iterable[Any]) -> "RingElem":
        """Truncated-ring element from its coefficient list, constant first."""
        if spec.kind != TRUNC_NIL:
            raise SpecMismatch(f"series constructor needs a truncated ring, got {spec}")
        cooked = [c.payload if isinstance(c, RingElem) else c for c in coeffs]
        return cls(spec, cooked)

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other: Any) -> "RingElem | None":
        if isinstance(other, RingElem):
            if other.spec != self.spec:
                raise SpecMismatch(f"mixed rings {self.spec} and {other.spec}")
            return other
        if isinstance(other, (int, Fraction)):
            return RingElem.from_fraction(self.spec, other)
        return None

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: Any) -> "RingElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RingElem(self.spec, _add(self.spec, self.payload, o.payload), _raw=True)

    __radd__ = __add__

    def __neg__(self) -> "RingElem":
        return RingElem(self.spec, _neg(self.spec, self.payload), _raw=True)

    def __sub__(self, other: Any) -> "RingElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> "RingElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> "RingElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RingElem(self.spec, _mul(self.spec, self.payload, o.payload), _raw=True)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "RingElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other: Any) -> "RingElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int) -> "RingElem":
        if n < 0:
            return self.inv() ** (-n)
        out = RingElem.one(self.spec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inv(self) -> "RingElem":
        """Multiplicative inverse; raises NonUnit when there is none."""
        return RingElem(self.spec, _inv(self.spec, self.payload), _raw=True)

    def involute(self) -> "RingElem":
        """Apply the ring involution (identity except on Laurent variables)."""
        return RingElem(self.spec, _involute(self.spec, self.payload), _raw=True)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return _is_zero(self.spec, self.payload)

    def is_unit(self) -> bool:
        return _is_unit(self.spec, self.payload)

    def is_nilpotent(self) -> bool:
        return _is_nilpotent(self.spec, self.payload)

    # -- misc ---------------------------------------------------------------

    def substitute(self, t: "RingElem | None" = None, z: "RingElem | None" = None) -> "RingElem":
        """Substitute Laurent variables; unassigned variables stay symbolic.

        Values must be elements of the same Laurent ring; the caller is
        responsible for unit checks when inverting exponents requires them
        (negative exponents of a non-unit value raise NonUnit).
        """
        if self.spec.kind != LAURENT2:
            raise SpecMismatch("substitution is a Laurent-ring operation")
        t_val = t if t is not None else RingElem.monomial(1, t_exp=1)
        z_val = z if z is not None else RingElem.monomial(1, z_exp=1)
        out = RingElem.zero(self.spec)
        for (i, j), c in self.payload:
            out = out + RingElem.from_fraction(self.spec, c) * t_val**i * z_val**j
        return out

    def to_json(self) -> Any:
        return payload_to_json(self.spec, self.payload)

    @classmethod
    def from_json(cls, spec: RingSpec, obj: Any) -> "RingElem":
        return cls(spec, payload_from_json(spec, obj), _raw=True)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (int, Fraction)):
            try:
                other = RingElem.from_fraction(self.spec, other)
            except (NonUnit, IllFormed):
                return False
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.spec == other.spec and self.payload == other.payload

    def __hash__(self) -> int:
        return hash((self.spec, self.payload))

    def __repr__(self) -> str:
        return f"<{payload_repr(self.spec, self.payload)} over {self.spec}>"


def nil_generator(spec: RingSpec) -> RingElem:
    """The class of x in B[x]/(x^k); zero when k = 1."""
    if spec.kind != TRUNC_NIL:
        raise SpecMismatch(f"nil generator lives in a truncated ring, not {spec}")
    assert spec.base is not None and spec.k is not None
    if spec.k == 1:
        return RingElem.zero(spec)
    coeffs = [_zero(spec.base)] * spec.k
    coeffs[1] = _one(spec.base)
    return RingElem(spec, tuple(coeffs), _raw=True)
