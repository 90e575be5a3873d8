"""Integer matrix utilities: Smith normal form, solving, kernels, lattices.

Matrices are plain ``list[list[int]]``; Python ints keep everything exact.
"""

from __future__ import annotations

from fractions import Fraction

IntMatrix = list[list[int]]


def identity_int(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros_int(nrows: int, ncols: int) -> IntMatrix:
    return [[0] * ncols for _ in range(nrows)]


def matmul_int(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a or not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec_int(a: IntMatrix, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose_int(a: IntMatrix) -> IntMatrix:
    return [list(r) for r in zip(*a)] if a and a[0] else [[] for _ in range(len(a[0]) if a else 0)]


def int_det(a: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank_int(a: IntMatrix) -> int:
    """Rank over Q by fraction elimination."""
    if not a or not a[0]:
        return 0
    m = [[Fraction(x) for x in row] for row in a]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    col = 0
    while rank < nrows and col < ncols:
        piv = next((i for i in range(rank, nrows) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(nrows):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def bezout_vector(v: list[int]) -> tuple[int, list[int]]:
    """(g, c) with sum(c_i * v_i) = g = gcd(v) >= 0; g = 0 only for v = 0."""
    g = 0
    coeffs = [0] * len(v)
    for i, x in enumerate(v):
        if x == 0:
            continue
        if g == 0:
            g = abs(x)
            coeffs[i] = 1 if x > 0 else -1
            continue
        g2, s, t = ext_gcd(g, x)
        coeffs = [s * c for c in coeffs]
        coeffs[i] += t
        g = g2
    return g, coeffs


def square_part(n: int) -> int:
    """Largest s with s*s dividing n (full trial division; inputs are small)."""
    m = abs(n)
    s = 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            s *= d ** (e // 2)
        d += 1 if d == 2 else 2
    return s


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n|, ascending."""
    m = abs(n)
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


def int_inverse_unimodular(a: IntMatrix) -> IntMatrix:
    """Inverse of an integer matrix whose determinant is +-1."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        d = aug[col][col]
        aug[col] = [x / d for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = [row[n:] for row in aug]
    if any(q.denominator != 1 for row in out for q in row):
        raise ValueError("matrix is not unimodular")
    return [[int(q) for q in row] for row in out]


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with D = U*a*V, U and V unimodular, and D diagonal
    with nonnegative entries satisfying d1 | d2 | ... (zeros at the end)."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    A = [row[:] for row in a]
    U = identity_int(nrows)
    V = identity_int(ncols)

    def add_row(dst: int, src: int, q: int) -> None:
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(nrows, ncols):
        # pivot: entry of least magnitude in the trailing block
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = abs(A[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            A[t], A[pi] = A[pi], A[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for row in A:
                row[t], row[pj] = row[pj], row[t]
            for row in V:
                row[t], row[pj] = row[pj], row[t]

        while True:
            # clear the pivot column
            moved = False
            for i in range(t + 1, nrows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        U[t], U[i] = U[i], U[t]
                        moved = True
            if moved:
                continue
            # clear the pivot row
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        for row in V:
                            row[t], row[j] = row[j], row[t]
                        moved = True
            if moved:
                continue
            # enforce divisibility of the trailing block
            offender = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if A[i][j] % A[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        t += 1

    for i in range(min(nrows, ncols)):
        if A[i][i] < 0:
            A[i] = [-x for x in A[i]]
            U[i] = [-x for x in U[i]]
    return U, A, V


def solve_int(a: IntMatrix, b: list[int]) -> list[int] | None:
    """One integer solution x of a*x = b, or None when there is none."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    if len(b) != nrows:
        raise ValueError("dimension mismatch in solve_int")
    if ncols == 0:
        return [] if all(x == 0 for x in b) else None
    U, D, V = smith_normal_form(a)
    c = matvec_int(U, b)
    y = [0] * ncols
    for i in range(nrows):
        d = D[i][i] if i < min(nrows, ncols) else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return matvec_int(V, y)


def kernel_basis_int(a: IntMatrix) -> list[list[int]]:
    """Basis (as vectors) of the integer kernel lattice of ``a``."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    if ncols == 0:
        return []
    if nrows == 0:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    _, D, V = smith_normal_form(a)
    basis = []
    for j in range(ncols):
        if j >= nrows or D[j][j] == 0:
            basis.append([V[i][j] for i in range(ncols)])
    return basis


def columns_to_matrix(cols: list[list[int]], nrows: int) -> IntMatrix:
    if not cols:
        return [[] for _ in range(nrows)]
    return [[col[i] for col in cols] for i in range(nrows)]


def lattice_contains(gens: IntMatrix, v: list[int]) -> bool:
    """Is ``v`` an integer combination of the columns of ``gens``?"""
    return solve_int(gens, v) is not None


def lattice_equal(a: IntMatrix, b: IntMatrix) -> bool:
    """Do the columns of ``a`` and ``b`` generate the same lattice?"""
    nrows = len(a)
    if nrows != len(b):
        raise ValueError("lattices live in different ambient ranks")
    acols = [list(col) for col in zip(*a)] if a and a[0] else []
    bcols = [list(col) for col in zip(*b)] if b and b[0] else []
    return all(lattice_contains(b, col) for col in acols) and all(
        lattice_contains(a, col) for col in bcols
    )
