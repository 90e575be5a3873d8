"""Matrices over the supported involutive rings.

``InvMatrix`` is immutable and exact.  The star of a matrix is the conjugate
transpose: transpose combined with the ring involution entrywise.  Inverses
exist exactly when the determinant is a unit of the coefficient ring, and
both determinant and adjugate are computed division-free so the same code
serves fields, Z[1/2], Laurent rings, and truncated rings with zero
divisors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import IllFormed, NonUnit, NotNilpotent, SpecMismatch
from .rings import (
    RingElem,
    RingSpec,
    _add,
    _inv,
    _involute,
    _is_nilpotent,
    _is_unit,
    _is_zero,
    _mul,
    _neg,
    _one,
    _zero,
    canon_payload,
    payload_from_json,
    payload_repr,
    payload_to_json,
)


def _cook(spec: RingSpec, entry: Any) -> Any:
    if isinstance(entry, RingElem):
        if entry.spec != spec:
            raise SpecMismatch(f"entry over {entry.spec} in a matrix over {spec}")
        return entry.payload
    return canon_payload(spec, entry)


class InvMatrix:
    """Rectangular matrix over one ring, stored in canonical payload form."""

    __slots__ = ("spec", "nrows", "ncols", "cells")

    def __init__(self, spec: RingSpec, cells: tuple, nrows: int, ncols: int):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("InvMatrix is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rows(cls, spec: RingSpec, rows: Sequence[Sequence[Any]]) -> "InvMatrix":
        grid = tuple(tuple(_cook(spec, e) for e in row) for row in rows)
        if not grid:
            return cls(spec, (), 0, 0)
        widths = {len(row) for row in grid}
        if len(widths) != 1:
            raise IllFormed("ragged rows in matrix input")
        return cls(spec, grid, len(grid), widths.pop())

    @classmethod
    def identity(cls, spec: RingSpec, n: int) -> "InvMatrix":
        one, zero = _one(spec), _zero(spec)
        grid = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
        return cls(spec, grid, n, n)

    @classmethod
    def zeros(cls, spec: RingSpec, nrows: int, ncols: int) -> "InvMatrix":
        zero = _zero(spec)
        return cls(spec, tuple((zero,) * ncols for _ in range(nrows)), nrows, ncols)

    @classmethod
    def diagonal(cls, spec: RingSpec, entries: Sequence[Any]) -> "InvMatrix":
        cooked = [_cook(spec, e) for e in entries]
        zero = _zero(spec)
        n = len(cooked)
        grid = tuple(
            tuple(cooked[i] if i == j else zero for j in range(n)) for i in range(n)
        )
        return cls(spec, grid, n, n)

    @classmethod
    def block_diag(cls, blocks: Sequence["InvMatrix"]) -> "InvMatrix":
        if not blocks:
            raise IllFormed("block_diag needs at least one block")
        spec = blocks[0].spec
        if any(b.spec != spec for b in blocks):
            raise SpecMismatch("block_diag blocks over different rings")
        nrows = sum(b.nrows for b in blocks)
        ncols = sum(b.ncols for b in blocks)
        zero = _zero(spec)
        grid = [[zero] * ncols for _ in range(nrows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.nrows):
                grid[r0 + i][c0 : c0 + b.ncols] = list(b.cells[i])
            r0 += b.nrows
            c0 += b.ncols
        return cls(spec, tuple(tuple(row) for row in grid), nrows, ncols)

    @classmethod
    def kron(cls, a: "InvMatrix", b: "InvMatrix") -> "InvMatrix":
        if a.spec != b.spec:
            raise SpecMismatch("Kronecker product over different rings")
        spec = a.spec
        grid = []
        for i in range(a.nrows):
            for k in range(b.nrows):
                row = []
                for j in range(a.ncols):
                    aij = a.cells[i][j]
                    row.extend(_mul(spec, aij, b.cells[k][l]) for l in range(b.ncols))
                grid.append(tuple(row))
        return cls(spec, tuple(grid), a.nrows * b.nrows, a.ncols * b.ncols)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int) -> RingElem:
        return RingElem(self.spec, self.cells[i][j], _raw=True)

    def __getitem__(self, idx: tuple[int, int]) -> RingElem:
        i, j = idx
        return self.entry(i, j)

    def rows_as_elems(self) -> tuple[tuple[RingElem, ...], ...]:
        return tuple(
            tuple(RingElem(self.spec, c, _raw=True) for c in row) for row in self.cells
        )

    # -- arithmetic ---------------------------------------------------------

    def _check_same(self, other: "InvMatrix") -> None:
        if self.spec != other.spec:
            raise SpecMismatch(f"mixed rings {self.spec} and {other.spec}")

    def __add__(self, other: "InvMatrix") -> "InvMatrix":
        self._check_same(other)
        if self.shape != other.shape:
            raise IllFormed(f"shape mismatch {self.shape} + {other.shape}")
        spec = self.spec
        grid = tuple(
            tuple(_add(spec, a, b) for a, b in zip(ra, rb))
            for ra, rb in zip(self.cells, other.cells)
        )
        return InvMatrix(spec, grid, self.nrows, self.ncols)

    def __neg__(self) -> "InvMatrix":
        spec = self.spec
        grid = tuple(tuple(_neg(spec, a) for a in row) for row in self.cells)
        return InvMatrix(spec, grid, self.nrows, self.ncols)

    def __sub__(self, other: "InvMatrix") -> "InvMatrix":
        return self + (-other)

    def __mul__(self, other: Any) -> Any:
        if isinstance(other, InvMatrix):
            self._check_same(other)
            if self.ncols != other.nrows:
                raise IllFormed(f"shape mismatch {self.shape} * {other.shape}")
            spec = self.spec
            bt = tuple(zip(*other.cells)) if other.cells else ()
            zero = _zero(spec)
            grid = []
            for row in self.cells:
                out_row = []
                for col in bt:
                    acc = zero
                    for a, b in zip(row, col):
                        acc = _add(spec, acc, _mul(spec, a, b))
                    out_row.append(acc)
                grid.append(tuple(out_row))
            return InvMatrix(spec, tuple(grid), self.nrows, other.ncols)
        return self.scale(other)

    def __rmul__(self, other: Any) -> "InvMatrix":
        return self.scale(other)

    def scale(self, scalar: Any) -> "InvMatrix":
        spec = self.spec
        s = _cook(spec, scalar)
        grid = tuple(tuple(_mul(spec, s, a) for a in row) for row in self.cells)
        return InvMatrix(spec, grid, self.nrows, self.ncols)

    def transpose(self) -> "InvMatrix":
        grid = tuple(zip(*self.cells)) if self.cells else ()
        return InvMatrix(self.spec, tuple(tuple(r) for r in grid), self.ncols, self.nrows)

    def conj_transpose(self) -> "InvMatrix":
        """Transpose combined with the ring involution entrywise."""
        spec = self.spec
        grid = tuple(
            tuple(_involute(spec, self.cells[i][j]) for i in range(self.nrows))
            for j in range(self.ncols)
        )
        return InvMatrix(spec, grid, self.ncols, self.nrows)

    def trace(self) -> RingElem:
        if self.nrows != self.ncols:
            raise IllFormed("trace of a non-square matrix")
        spec = self.spec
        acc = _zero(spec)
        for i in range(self.nrows):
            acc = _add(spec, acc, self.cells[i][i])
        return RingElem(spec, acc, _raw=True)

    # -- determinant and inverse ---------------------------------------------
    #
    # Division-free minor expansion with memoization on column masks: valid
    # over any commutative coefficient ring, adequate at the matrix sizes the
    # toolkit handles (<= 8 or so).

    def _det_payload(self) -> Any:
        if self.nrows != self.ncols:
            raise IllFormed("determinant of a non-square matrix")
        spec, cells, n = self.spec, self.cells, self.nrows
        if n == 0:
            return _one(spec)
        memo: dict[int, Any] = {}

        def minor(r: int, mask: int) -> Any:
            if mask == 0:
                return _one(spec)
            key = mask  # row index is determined by popcount of mask
            got = memo.get(key)
            if got is not None:
                return got
            acc = _zero(spec)
            sign = 1
            row = cells[r]
            m = mask
            while m:
                low = m & -m
                c = low.bit_length() - 1
                a = row[c]
                if not _is_zero(spec, a):
                    term = _mul(spec, a, minor(r + 1, mask & ~low))
                    acc = _add(spec, acc, term if sign > 0 else _neg(spec, term))
                sign = -sign
                m &= m - 1
            memo[key] = acc
            return acc

        return minor(0, (1 << n) - 1)

    def det(self) -> RingElem:
        return RingElem(self.spec, self._det_payload(), _raw=True)

    def _minor_matrix(self, i: int, j: int) -> "InvMatrix":
        grid = tuple(
            tuple(c for cj, c in enumerate(row) if cj != j)
            for ri, row in enumerate(self.cells)
            if ri != i
        )
        return InvMatrix(self.spec, grid, self.nrows - 1, self.ncols - 1)

    def adjugate(self) -> "InvMatrix":
        if self.nrows != self.ncols:
            raise IllFormed("adjugate of a non-square matrix")
        spec, n = self.spec, self.nrows
        if n == 0:
            return self
        grid = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                m = self._minor_matrix(i, j)._det_payload()
                grid[j][i] = m if (i + j) % 2 == 0 else _neg(spec, m)
        return InvMatrix(spec, tuple(tuple(r) for r in grid), n, n)

    def det_and_inverse(self) -> tuple[RingElem, "InvMatrix | None"]:
        """Determinant, and the inverse iff the determinant is a unit."""
        d = self._det_payload()
        if not _is_unit(self.spec, d):
            return RingElem(self.spec, d, _raw=True), None
        inv_d = _inv(self.spec, d)
        return RingElem(self.spec, d, _raw=True), self.adjugate().scale(
            RingElem(self.spec, inv_d, _raw=True)
        )

    def inverse(self) -> "InvMatrix":
        d, inv = self.det_and_inverse()
        if inv is None:
            raise NonUnit(f"determinant {d!r} is not a unit")
        return inv

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        spec = self.spec
        return all(_is_zero(spec, a) for row in self.cells for a in row)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return self == InvMatrix.identity(self.spec, self.nrows)

    def is_self_adjoint(self) -> bool:
        return self.nrows == self.ncols and self.conj_transpose() == self

    def is_unitary(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return (self * self.conj_transpose()).is_identity()

    def map_entries(self, fn) -> "InvMatrix":
        """Apply ``fn`` to each entry as a RingElem; result ring may differ."""
        rows = [[fn(self.entry(i, j)) for j in range(self.ncols)] for i in range(self.nrows)]
        if not rows or not rows[0]:
            raise IllFormed("map_entries needs a nonempty matrix")
        spec = rows[0][0].spec
        return InvMatrix.from_rows(spec, rows)

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "ring": self.spec.to_json(),
            "entries": [
                [payload_to_json(self.spec, a) for a in row] for row in self.cells
            ],
        }

    @classmethod
    def from_json(cls, obj: Any) -> "InvMatrix":
        if not isinstance(obj, dict) or "ring" not in obj or "entries" not in obj:
            raise IllFormed("matrix object needs 'ring' and 'entries'")
        spec = RingSpec.from_json(obj["ring"])
        entries = obj["entries"]
        if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
            raise IllFormed("matrix entries must be a list of rows")
        grid = tuple(
            tuple(payload_from_json(spec, a) for a in row) for row in entries
        )
        if grid and len({len(r) for r in grid}) != 1:
            raise IllFormed("ragged rows in matrix input")
        return cls(spec, grid, len(grid), len(grid[0]) if grid else 0)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, InvMatrix):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.shape == other.shape
            and self.cells == other.cells
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.cells))

    def __repr__(self) -> str:
        rows = "; ".join(
            ", ".join(payload_repr(self.spec, a) for a in row) for row in self.cells
        )
        return f"<{self.nrows}x{self.ncols} [{rows}] over {self.spec}>"


def inv_sqrt_one_plus(g: InvMatrix) -> InvMatrix:
    """Exact (I + g)^(-1/2) for a nilpotent self-commuting argument.

    The binomial series sum_j C(-1/2, j) g^j terminates because every entry
    of ``g`` is required to be nilpotent (zero outside truncated rings); the
    dyadic binomial coefficients embed into every supported ring.  The
    defining identity U*U*(I+g) = I is asserted before returning.
    """
    if g.nrows != g.ncols:
        raise IllFormed("inv_sqrt_one_plus needs a square matrix")
    spec = g.spec
    if not all(_is_nilpotent(spec, a) for row in g.cells for a in row):
        raise NotNilpotent("entries must lie in the nilpotent ideal")
    n = g.nrows
    ident = InvMatrix.identity(spec, n)
    out = ident
    power = ident
    coeff = Fraction(1)
    bound = (spec.k or 1) * n + 1
    for j in range(1, bound + 1):
        power = power * g
        if power.is_zero():
            break
        coeff = coeff * Fraction(-1 - 2 * (j - 1), 2 * j)  # C(-1/2, j) recurrence
        out = out + power.scale(RingElem.from_fraction(spec, coeff))
    else:
        raise NotNilpotent("argument failed to nilpotate within the degree bound")
    assert (out * out * (ident + g)).is_identity(), "square-root identity violated"
    return out
