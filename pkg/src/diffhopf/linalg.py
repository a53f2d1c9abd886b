"""Exact dense linear algebra over the coefficient field.

Matrices are lists of rows of scalars (Fraction or RatFunc).  Nothing here
knows about the differential structure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import _poly as P

Matrix = List[list]

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]):
    """Product of two matrices whose entries support + and * (scalars or elements)."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                x, y = row[k], b[k][j]
                if not _is_zero(x) and not _is_zero(y):
                    t = x * y
                    acc = t if acc is None else acc + t
            new.append(acc)
        out.append(new)
    return out


def _is_zero(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return not x


def rref(rows: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv if x else ZERO for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Matrix, ncols: int) -> List[list]:
    """Basis of ``{x : rows x = 0}``, one vector per free column, in column order."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in zip(red, pivots):
            if row[f]:
                v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(rows: Matrix, rhs: Sequence) -> Optional[list]:
    """One solution of ``rows x = rhs`` or None when inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[-1]
    return x


def det(a: Matrix):
    """Determinant by Gaussian elimination over the field."""
    n = len(a)
    m = [list(r) for r in a]
    sign = 1
    acc = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        acc = acc * piv
        inv = 1 / piv
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[c])]
    return acc if sign > 0 else -acc


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(r) + e for r, e in zip(a, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# determinants with polynomial entries (parameters lambda_k)

def bareiss_det(a: List[List[dict]]) -> dict:
    """Determinant of a square matrix of sparse polynomials, by Bareiss.

    Entries are ``_poly`` dicts with coefficients in K; every division is
    exact, so the result stays polynomial.
    """
    n = len(a)
    if n == 0:
        return P.p_const(ONE)
    m = [[dict(x) for x in row] for row in a]
    sign = 1
    prev = P.p_const(ONE)
    for k in range(n - 1):
        if not m[k][k]:
            p = next((i for i in range(k + 1, n) if m[i][k]), None)
            if p is None:
                return {}
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = P.p_sub(P.p_mul(m[i][j], m[k][k]), P.p_mul(m[i][k], m[k][j]))
                q = P.p_divexact(num, prev)
                if q is None:
                    raise ArithmeticError("Bareiss division was not exact")
                m[i][j] = q
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign > 0 else P.p_neg(d)
