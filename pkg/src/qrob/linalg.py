"""Dense exact linear algebra over the rationals.

Matrices are lists of rows of `Fraction`. Everything here is pure and
deterministic; no floating point anywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction

Matrix = list[list[Fraction]]

_FRACTION_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def fraction_to_str(x: Fraction) -> str:
    return str(Fraction(x))


def fraction_from_str(s: str) -> Fraction:
    # Decimal or exponent notation is rejected: file formats are bit-exact.
    if not isinstance(s, str) or not _FRACTION_RE.match(s):
        raise ValueError(f"not an exact rational literal: {s!r}")
    return Fraction(s)


def mat(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_vec(a: Matrix, v: list[Fraction]) -> list[Fraction]:
    return [sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in a]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (new matrix, pivot columns)."""
    m = [row[:] for row in a]
    if not m:
        return [], []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def row_space_basis(a: Matrix) -> Matrix:
    """Canonical (RREF) basis of the row space."""
    r, pivots = rref(a)
    return [row[:] for row in r[: len(pivots)]]


def in_row_space(basis: Matrix, v: list[Fraction]) -> bool:
    if all(x == 0 for x in v):
        return True
    if not basis:
        return False
    return rank(basis) == rank(basis + [v])


def nullspace(a: Matrix, ncols: int | None = None) -> Matrix:
    """Canonical kernel basis, one vector per free column.

    `ncols` must be given when `a` has no rows.
    """
    if not a:
        if ncols is None:
            raise ValueError("nullspace of empty matrix needs ncols")
        return identity(ncols)
    cols = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][fc]
        basis.append(v)
    return basis


def solve(a: Matrix, b: list[Fraction]) -> list[Fraction] | None:
    """One exact solution of a*x = b (free variables zero), or None."""
    sols = solve_many(a, [b])
    return sols[0]


def solve_many(a: Matrix, bs: list[list[Fraction]]) -> list[list[Fraction] | None]:
    """Solve a*x = b for several right-hand sides with one elimination."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if rows == 0:
        # No constraints: x = 0 works iff each b is the empty vector.
        return [[Fraction(0)] * cols for _ in bs]
    aug = [a[i][:] + [bs[k][i] for k in range(len(bs))] for i in range(rows)]
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        pr = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = Fraction(1) / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    # Rows below the pivot block have zero coefficient part, so a nonzero
    # right-hand entry there means that system is inconsistent.
    out: list[list[Fraction] | None] = []
    for k in range(len(bs)):
        col = cols + k
        if any(aug[i][col] != 0 for i in range(len(pivots), rows)):
            out.append(None)
            continue
        x = [Fraction(0)] * cols
        for i, pc in enumerate(pivots):
            x[pc] = aug[i][col]
        out.append(x)
    return out


def invert(a: Matrix) -> Matrix | None:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("invert needs a square matrix")
    aug = [a[i][:] + identity(n)[i] for i in range(n)]
    r, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in r[:n]]


def pivot_rows_cols(a: Matrix) -> tuple[list[int], list[int]]:
    """Original row and column indices of a maximal invertible submatrix.

    Deterministic: columns are scanned left to right, and the first
    not-yet-used row with a nonzero entry becomes the pivot row.
    """
    if not a:
        return [], []
    m = [row[:] for row in a]
    rows, cols = len(m), len(m[0])
    used: list[bool] = [False] * rows
    piv_rows: list[int] = []
    piv_cols: list[int] = []
    for c in range(cols):
        pr = next((i for i in range(rows) if not used[i] and m[i][c] != 0), None)
        if pr is None:
            continue
        used[pr] = True
        piv_rows.append(pr)
        piv_cols.append(c)
        inv = Fraction(1) / m[pr][c]
        for i in range(rows):
            if i != pr and not used[i] and m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[pr])]
    return piv_rows, piv_cols
