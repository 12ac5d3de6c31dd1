"""Small exact matrix helpers over symbolic expressions."""

from __future__ import annotations

import itertools

from .symbolic import Expr, is_zero


class SingularMatrixError(ValueError):
    pass


def matrix_inverse_with_det(rows):
    """Exact inverse and determinant of a square Expr matrix by
    Gauss-Jordan elimination with symbolic pivots.

    A pivot is any entry whose canonical form is nonzero; entries that are
    nonzero expressions vanishing on a subset of the chart are legal pivots
    (chart-level models are local).  Raises SingularMatrixError when no
    pivot exists.
    """
    n = len(rows)
    a = [[Expr.of(v) for v in row] for row in rows]
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    inv = [
        [Expr.of(1) if i == j else Expr.of(0) for j in range(n)] for i in range(n)
    ]
    det = Expr.of(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not a[r][col].is_structurally_zero():
                piv = r
                break
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            det = -det
        pivot = a[col][col]
        det = det * pivot
        a[col] = [v / pivot for v in a[col]]
        inv[col] = [v / pivot for v in inv[col]]
        for r in range(n):
            if r == col:
                continue
            factor = a[r][col]
            if factor.is_structurally_zero():
                continue
            a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - factor * y for x, y in zip(inv[r], inv[col])]
    return inv, det


def minor_det(rows, row_idx, col_idx):
    """Determinant of the submatrix picked by index tuples (permutation sum;
    meant for the tiny sizes that occur here)."""
    k = len(row_idx)
    if k != len(col_idx):
        raise ValueError("minor must be square")
    total = Expr.of(0)
    for perm in itertools.permutations(range(k)):
        sign = _perm_sign(perm)
        term = Expr.of(1)
        for i in range(k):
            term = term * rows[row_idx[i]][col_idx[perm[i]]]
        total = total + (term if sign > 0 else -term)
    return total


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[j] < perm[i]:
                sign = -sign
    return sign


def rank_at_point(rows, bindings, **zero_kw):
    """Rank of the matrix after substituting ``bindings``; elimination uses
    the exact zero test for pivoting."""
    a = [[Expr.of(v).subs(bindings) for v in row] for row in rows]
    if not a:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    rank = 0
    row = 0
    for col in range(n_cols):
        piv = None
        for r in range(row, n_rows):
            if not is_zero(a[r][col], **zero_kw):
                piv = r
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        for r in range(row + 1, n_rows):
            if is_zero(a[r][col], **zero_kw):
                continue
            factor = a[r][col] / a[row][col]
            a[r] = [x - factor * y for x, y in zip(a[r], a[row])]
        rank += 1
        row += 1
        if row == n_rows:
            break
    return rank
