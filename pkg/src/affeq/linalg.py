"""Determinant and linear-solve kernels in two arithmetic modes.

Exact mode works on ``fractions.Fraction`` / ``int`` entries with
fraction-free Bareiss elimination, so signs of near-degenerate determinants
are decided without rounding.  Floating mode delegates to LAPACK
(elimination with partial pivoting) through numpy.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import InputError


def is_exact_value(x) -> bool:
    """True for values that support exact rational arithmetic."""
    return isinstance(x, Rational) and not isinstance(x, bool)


def to_fraction(x) -> Fraction:
    """Exact conversion; floats convert to their exact binary rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    return Fraction(x)


def bareiss_det(rows) -> Fraction:
    """Exact determinant via fraction-free Bareiss elimination.

    ``rows`` is a square list-of-lists of rationals.  Row pivoting is used;
    every division in the Bareiss recurrence is exact.
    """
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = [[to_fraction(x) for x in row] for row in rows]
    if any(len(row) != n for row in a):
        raise InputError("bareiss_det requires a square matrix")
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = pivot
    return sign * a[n - 1][n - 1]


def solve_exact(rows, rhs) -> list[Fraction]:
    """Exact solve of a square nonsingular system by Gaussian elimination."""
    n = len(rows)
    a = [[to_fraction(x) for x in row] + [to_fraction(b)]
         for row, b in zip(rows, rhs)]
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[piv][k] == 0:
            raise InputError("singular system in exact solve")
        a[k], a[piv] = a[piv], a[k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f == 0:
                continue
            for j in range(k, n + 1):
                a[i][j] -= f * a[k][j]
    x = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        s = a[k][n] - sum(a[k][j] * x[j] for j in range(k + 1, n))
        x[k] = s / a[k][k]
    return x


def det_any(rows):
    """Determinant dispatching on entry type: exact when all rational."""
    flat = [x for row in rows for x in row]
    if all(is_exact_value(x) for x in flat):
        return bareiss_det(rows)
    return float(np.linalg.det(np.asarray(rows, dtype=float)))


def det_gradient(mat: np.ndarray) -> np.ndarray:
    """Gradient of det w.r.t. each entry, i.e. the transposed adjugate.

    Computed from cofactors so it stays finite at singular matrices.
    """
    mat = np.asarray(mat, dtype=float)
    d = mat.shape[0]
    if d == 1:
        return np.ones((1, 1))
    grad = np.empty((d, d))
    idx = np.arange(d)
    for i in range(d):
        for j in range(d):
            minor = mat[np.ix_(idx != i, idx != j)]
            grad[i, j] = (-1.0) ** (i + j) * np.linalg.det(minor)
    return grad


def bordered_matrix(z, index_set):
    """Bordered squared-distance determinant matrix for a point subset.

    Layout: a leading 0 with a border of ones, then the squared-distance
    block with a zero diagonal.  For ``k+1`` indices the matrix is
    ``(k+2) x (k+2)``.
    """
    m = len(index_set)
    rows = [[0] + [1] * m]
    for a in index_set:
        rows.append([1] + [z[a][b] for b in index_set])
    for a in range(m):
        rows[a + 1][a + 1] = 0
    return rows


def bordered_det_batch(zf: np.ndarray, subsets) -> np.ndarray:
    """Floating bordered determinants for many subsets of equal size at once."""
    subsets = np.asarray(subsets, dtype=np.intp)
    if subsets.ndim != 2:
        raise InputError("subsets must be a 2-D index array")
    count, m = subsets.shape
    big = np.ones((count, m + 1, m + 1))
    big[:, 0, 0] = 0.0
    big[:, 1:, 1:] = zf[subsets[:, :, None], subsets[:, None, :]]
    diag = np.arange(1, m + 1)
    big[:, diag, diag] = 0.0
    return np.linalg.det(big)
