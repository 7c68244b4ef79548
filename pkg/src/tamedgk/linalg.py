"""Exact rational linear algebra.

Thin adapters between numpy object arrays of ``Fraction`` and sympy's exact
matrices over QQ (sympy's DomainMatrix).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix


class SingularMatrixError(ValueError):
    pass


def to_sympy(m) -> DomainMatrix:
    """Exact matrix over QQ; a 1-d input becomes a column."""
    m = np.asarray(m, dtype=object)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    rows = [[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in row] for row in m]
    return DomainMatrix(rows, m.shape, QQ)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def from_sympy(m: DomainMatrix) -> np.ndarray:
    rows = m.to_list()
    out = np.empty(m.shape, dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = _frac(x)
    return out


def det(m) -> Fraction:
    m = np.asarray(m, dtype=object)
    if m.shape[0] == 0:
        return Fraction(1)
    return _frac(to_sympy(m).det())


def rank(m) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    return to_sympy(m).rank()


def inverse(m) -> np.ndarray:
    s = to_sympy(m)
    if s.det() == 0:
        raise SingularMatrixError("matrix is singular")
    return from_sympy(s.inv())


def nullspace(m) -> list[np.ndarray]:
    """Basis of {x : m x = 0}, each vector a 1-d object array."""
    m = np.asarray(m, dtype=object)
    if m.shape[0] == 0:
        return [np.array([Fraction(int(i == j)) for i in range(m.shape[1])], dtype=object)
                for j in range(m.shape[1])]
    ns = to_sympy(m).nullspace()
    if ns.shape[0] == 0:
        return []
    return [row for row in from_sympy(ns)]


def column_space(m) -> list[np.ndarray]:
    """A basis of the span of the columns, chosen among the columns themselves."""
    m = np.asarray(m, dtype=object)
    _, pivots = to_sympy(m).rref()
    return [m[:, j].copy() for j in pivots]


def solve_affine(a, b):
    """Solve a x = b exactly.

    Returns ``(particular, kernel_basis)`` or ``None`` when inconsistent.
    """
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object).reshape(-1)
    n = a.shape[1]
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    rref, pivots = to_sympy(aug).rref()
    if n in pivots:
        return None
    rows = rref.to_list()
    x = np.array([Fraction(0)] * n, dtype=object)
    for row, col in enumerate(pivots):
        x[col] = _frac(rows[row][n])
    return x, nullspace(a)


def leading_minors(m) -> list[Fraction]:
    """Leading principal minors, read off one elimination pass without pivoting.

    Minor k is the product of the first k pivots; after a zero pivot the
    remaining minors are computed directly.
    """
    a = [[Fraction(x) for x in row] for row in np.asarray(m, dtype=object)]
    n = len(a)
    out: list[Fraction] = []
    prod = Fraction(1)
    for k in range(n):
        if a[k][k] == 0:
            return out + [det(np.asarray(m, dtype=object)[:j, :j]) for j in range(k + 1, n + 1)]
        prod *= a[k][k]
        out.append(prod)
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                row_k, row_i = a[k], a[i]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
    return out
