"""Exact rational matrix helpers.

Everything here works on ``flint.fmpq_mat``.  Matrices are treated as
immutable values once built; helpers always return fresh objects.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import flint

Matrix = flint.fmpq_mat


def _q(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, (int, flint.fmpz)):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return flint.fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def matrix(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Build a matrix from nested rows of ints / Fractions / "p/q" strings.

    ``ncols`` is needed only when ``rows`` is empty.
    """
    if isinstance(rows, flint.fmpq_mat):
        return flint.fmpq_mat(rows)
    rows = [list(r) for r in rows]
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for a matrix with no rows")
        return flint.fmpq_mat(0, ncols)
    width = len(rows[0])
    if ncols is not None and ncols != width:
        raise ValueError(f"row width {width} != ncols {ncols}")
    if any(len(r) != width for r in rows):
        raise ValueError("ragged rows")
    return flint.fmpq_mat(len(rows), width, [_q(x) for r in rows for x in r])


def zeros(nrows: int, ncols: int) -> Matrix:
    return flint.fmpq_mat(nrows, ncols)


def identity(n: int) -> Matrix:
    m = flint.fmpq_mat(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def shape(m: Matrix) -> tuple[int, int]:
    return m.nrows(), m.ncols()


def rows_of(m: Matrix) -> list[list[flint.fmpq]]:
    return [[m[i, j] for j in range(m.ncols())] for i in range(m.nrows())]


def to_fractions(m: Matrix) -> list[list[Fraction]]:
    return [[Fraction(int(x.p), int(x.q)) for x in row] for row in rows_of(m)]


def to_strings(m: Matrix) -> list[list[str]]:
    return [[str(Fraction(int(x.p), int(x.q))) for x in row] for row in rows_of(m)]


def vstack(blocks: Iterable[Matrix], ncols: int) -> Matrix:
    blocks = [b for b in blocks if b.nrows()]
    total = sum(b.nrows() for b in blocks)
    out = flint.fmpq_mat(total, ncols)
    r0 = 0
    for b in blocks:
        if b.ncols() != ncols:
            raise ValueError(f"block has {b.ncols()} columns, expected {ncols}")
        for i in range(b.nrows()):
            for j in range(ncols):
                x = b[i, j]
                if x:
                    out[r0 + i, j] = x
        r0 += b.nrows()
    return out


def row(m: Matrix, i: int) -> Matrix:
    out = flint.fmpq_mat(1, m.ncols())
    for j in range(m.ncols()):
        out[0, j] = m[i, j]
    return out


def rank(m) -> int:
    """Rank over the rationals (no tolerance)."""
    m = m if isinstance(m, flint.fmpq_mat) else matrix(m)
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return m.rank()


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns."""
    n = m.ncols()
    if m.nrows() == 0 or n == 0:
        return flint.fmpq_mat(0, n), []
    r, rk = m.rref()
    pivots = []
    for i in range(rk):
        for j in range(n):
            if r[i, j] != 0:
                pivots.append(j)
                break
    out = flint.fmpq_mat(rk, n)
    for i in range(rk):
        for j in range(pivots[i], n):
            out[i, j] = r[i, j]
    return out, pivots


def nullspace(m: Matrix) -> Matrix:
    """Rows spanning ``{x : m x = 0}``, returned in reduced echelon form."""
    n = m.ncols()
    r, pivots = rref(m)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    out = flint.fmpq_mat(len(free), n)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, p in enumerate(pivots):
            c = r[i, f]
            if c:
                out[k, p] = -c
    if not free:
        return out
    canon, _ = rref(out)
    return canon


def solve_left(a: Matrix, b: Matrix) -> Matrix:
    """Return ``x`` with ``x * a == b`` for ``a`` of full row rank.

    Raises ``ValueError`` when no exact solution exists.
    """
    if a.nrows() == 0:
        if any(b[i, j] != 0 for i in range(b.nrows()) for j in range(b.ncols())):
            raise ValueError("no solution: source has no rows but target is nonzero")
        return flint.fmpq_mat(b.nrows(), 0)
    gram = a * a.transpose()
    x = b * a.transpose() * gram.inv()
    if x * a != b:
        raise ValueError("no exact solution for x * a = b")
    return x


def is_zero(m: Matrix) -> bool:
    return all(m[i, j] == 0 for i in range(m.nrows()) for j in range(m.ncols()))


def trace(m: Matrix) -> flint.fmpq:
    t = flint.fmpq(0)
    for i in range(min(m.nrows(), m.ncols())):
        t += m[i, i]
    return t


def matrix_key(m: Matrix) -> tuple:
    return (m.nrows(), m.ncols(), tuple(str(x) for x in m.entries()))
