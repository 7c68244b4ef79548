"""Exact multilinear algebra on a fixed basis e_1..e_n.

Forms and multivectors are stored sparsely, keyed by strictly increasing
1-based index tuples, so exact equality of tensors is equality of maps.
Every computation goes through dense numpy object arrays of ``Fraction``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from functools import cached_property
from typing import Mapping, NamedTuple

import numpy as np

from . import linalg

Rational = Fraction


def rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "p") and hasattr(x, "q"):  # sympy Rational
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


def zeros(*shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def as_array(data) -> np.ndarray:
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for i, x in enumerate(flat):
        flat[i] = rational(x)
    return arr


def is_zero_array(a: np.ndarray) -> bool:
    return all(x == 0 for x in np.asarray(a).flat)


def frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=object)
    a.flags.writeable = False
    return a


def permutation_sign(p) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _sort_with_sign(idx):
    if len(set(idx)) != len(idx):
        return None, 0
    order = sorted(range(len(idx)), key=lambda t: idx[t])
    return tuple(idx[t] for t in order), permutation_sign(order)


# Contractions of Fraction arrays are done on Python integers after clearing
# denominators; object-array arithmetic on ints avoids a gcd per operation.

def _integral(a) -> tuple[np.ndarray, int]:
    a = np.asarray(a, dtype=object)
    den = 1
    for x in a.flat:
        d = x.denominator
        if den % d:
            den = den * d // gcd(den, d)
    out = np.empty(a.shape, dtype=object)
    flat = out.reshape(-1)
    for i, x in enumerate(a.flat):
        flat[i] = x.numerator * (den // x.denominator)
    return out, den


def _rational_array(a: np.ndarray, den: int) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    flat = out.reshape(-1)
    for i, x in enumerate(a.flat):
        flat[i] = Fraction(x, den)
    return out


def tdot(a, b, axes) -> np.ndarray:
    """np.tensordot for Fraction arrays."""
    ia, da = _integral(a)
    ib, db = _integral(b)
    return _rational_array(np.tensordot(ia, ib, axes=axes), da * db)


def alternate(t: np.ndarray) -> np.ndarray:
    """Sum over permutations of slots with signs (no normalizing factor)."""
    it, den = _integral(t)
    out = np.zeros(it.shape, dtype=object) if it.ndim else it
    for p in itertools.permutations(range(t.ndim)):
        out = out + permutation_sign(p) * np.transpose(it, p)
    return _rational_array(out, den)


def pullback(t: np.ndarray, *maps) -> np.ndarray:
    """The covariant tensor (X1, .., Xk) -> t(M1 X1, .., Mk Xk); ``None`` keeps a slot."""
    out, den = _integral(t)
    for slot, m in enumerate(maps):
        if m is None:
            continue
        im, dm = _integral(m)
        den *= dm
        out = np.moveaxis(np.tensordot(out, im, axes=([slot], [0])), -1, slot)
    return _rational_array(out, den)


def contract_all(t: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Apply the same matrix to every index: out[a..] = m[a, i] .. t[i..]."""
    out, den = _integral(t)
    im, dm = _integral(m)
    for slot in range(out.ndim):
        den *= dm
        out = np.moveaxis(np.tensordot(im, out, axes=([1], [slot])), 0, slot)
    return _rational_array(out, den)


def cyclic_sum(f):
    """(sigma F)(X, Y, Z) = F(X, Y, Z) + F(Y, Z, X) + F(Z, X, Y).

    Accepts a dense 3-array or a trilinear callable and returns the same kind.
    """
    if callable(f) and not isinstance(f, np.ndarray):
        return lambda x, y, z: f(x, y, z) + f(y, z, x) + f(z, x, y)
    f = np.asarray(f)
    # transpose(f, (2, 0, 1))[x, y, z] = f[y, z, x]
    return f + np.transpose(f, (2, 0, 1)) + np.transpose(f, (1, 2, 0))


class _Alternating:
    """Alternating tensor with canonical sparse storage."""

    _symbol = "e"

    def __init__(self, dim: int, grade: int, terms: Mapping | None = None):
        if grade < 0 or grade > dim:
            raise ValueError(f"grade {grade} impossible in dimension {dim}")
        self.dim = dim
        self.grade = grade
        acc: dict[tuple[int, ...], Fraction] = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != grade:
                raise ValueError(f"index {idx} does not have grade {grade}")
            if any(i < 1 or i > dim for i in idx):
                raise ValueError(f"index {idx} out of range 1..{dim}")
            key, sign = _sort_with_sign(idx)
            if key is None:
                continue
            acc[key] = acc.get(key, Fraction(0)) + sign * rational(c)
        self._terms = {k: v for k, v in sorted(acc.items()) if v != 0}

    @classmethod
    def zero(cls, dim: int, grade: int):
        return cls(dim, grade)

    @classmethod
    def basis(cls, dim: int, *indices: int):
        return cls(dim, len(indices), {indices: 1})

    @classmethod
    def from_dense(cls, arr: np.ndarray):
        arr = np.asarray(arr)
        dim, grade = (arr.shape[0] if arr.ndim else 0), arr.ndim
        terms = {}
        for idx in itertools.combinations(range(dim), grade):
            c = arr[idx]
            if c != 0:
                terms[tuple(i + 1 for i in idx)] = c
        return cls(dim, grade, terms)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def coefficient(self, *indices: int) -> Fraction:
        key, sign = _sort_with_sign(tuple(indices))
        if key is None:
            return Fraction(0)
        return sign * self._terms.get(key, Fraction(0))

    @cached_property
    def dense(self) -> np.ndarray:
        out = zeros(*(self.dim,) * self.grade)
        perms = [(p, permutation_sign(p)) for p in itertools.permutations(range(self.grade))]
        for idx, c in self._terms.items():
            for p, s in perms:
                out[tuple(idx[q] - 1 for q in p)] = s * c
        out.flags.writeable = False
        return out

    def support(self) -> set[tuple[int, ...]]:
        return set(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other):
        if type(other) is not type(self) or other.dim != self.dim or other.grade != self.grade:
            raise ValueError("dimension or grade mismatch")

    def __add__(self, other):
        self._check(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, Fraction(0)) + v
        return type(self)(self.dim, self.grade, terms)

    def __neg__(self):
        return type(self)(self.dim, self.grade, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        s = rational(scalar)
        return type(self)(self.dim, self.grade, {k: s * v for k, v in self._terms.items()})

    def __eq__(self, other):
        return (type(other) is type(self) and other.dim == self.dim
                and other.grade == self.grade and other._terms == self._terms)

    def __hash__(self):
        return hash((type(self).__name__, self.dim, self.grade, tuple(self._terms.items())))

    def __repr__(self):
        return f"{type(self).__name__}({self.dim}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for idx, c in self._terms.items():
            label = self._symbol + format_indices(idx, self.dim)
            mag = abs(c)
            body = label if mag == 1 else f"{mag}*{label}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


def format_indices(idx, dim: int) -> str:
    if not idx:
        return "()"
    if dim <= 9:
        return "".join(str(i) for i in idx)
    return "(" + ",".join(str(i) for i in idx) + ")"


class Form(_Alternating):
    """Covariant alternating tensor; (1, 2) with coefficient 1 is e^12."""


class Multivector(_Alternating):
    """Contravariant alternating tensor; (1, 2) with coefficient 1 is e_1 ^ e_2."""

    _symbol = "e_"


class VectorValuedTwoForm:
    """N[k, i, j] = k-th component of N(e_i, e_j), antisymmetric in (i, j)."""

    def __init__(self, array: np.ndarray):
        array = np.asarray(array)
        if not is_zero_array(array + np.transpose(array, (0, 2, 1))):
            raise ValueError("not antisymmetric in the form slots")
        self.array = frozen(array)
        self.dim = array.shape[0]

    def __call__(self, x, y) -> np.ndarray:
        return np.tensordot(np.tensordot(self.array, x, axes=([1], [0])), y, axes=([1], [0]))

    def is_zero(self) -> bool:
        return is_zero_array(self.array)

    def nonzero_count(self) -> int:
        return sum(1 for v in self.array.flat if v != 0)

    def __eq__(self, other):
        return isinstance(other, VectorValuedTwoForm) and np.array_equal(self.array, other.array)


class PsiTensor:
    """Covariant 3-tensor antisymmetric in its last two slots."""

    def __init__(self, array: np.ndarray):
        array = np.asarray(array)
        if not is_zero_array(array + np.transpose(array, (0, 2, 1))):
            raise ValueError("not antisymmetric in the last two slots")
        self.array = frozen(array)
        self.dim = array.shape[0]

    def __call__(self, x, y, z):
        return evaluate_tensor(self.array, x, y, z)

    def is_zero(self) -> bool:
        return is_zero_array(self.array)

    def support(self) -> dict[tuple[int, int, int], Fraction]:
        n = self.dim
        return {(a + 1, b + 1, c + 1): self.array[a, b, c]
                for a, b, c in itertools.product(range(n), repeat=3) if self.array[a, b, c] != 0}


class ComplexTensor(NamedTuple):
    """A complex tensor as an ordered (real, imaginary) pair."""

    re: np.ndarray
    im: np.ndarray

    def is_zero(self) -> bool:
        return is_zero_array(self.re) and is_zero_array(self.im)

    def __sub__(self, other):
        return ComplexTensor(self.re - other.re, self.im - other.im)

    def scale(self, re: Fraction, im: Fraction) -> "ComplexTensor":
        """Multiply by the complex number re + i im."""
        return ComplexTensor(re * self.re - im * self.im, re * self.im + im * self.re)


def evaluate_tensor(t: np.ndarray, *vectors) -> Fraction:
    out = t
    for v in vectors:
        out = np.tensordot(out, np.asarray(v, dtype=object), axes=([0], [0]))
    return out if not isinstance(out, np.ndarray) else out.item()


def wedge(a: Form, b: Form) -> Form:
    if a.dim != b.dim or type(a) is not type(b):
        raise ValueError("dimension mismatch")
    terms: dict[tuple[int, ...], Fraction] = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            idx = ia + ib
            terms[idx] = terms.get(idx, Fraction(0)) + ca * cb
    if a.grade + b.grade > a.dim:
        raise ValueError(f"grade {a.grade + b.grade} exceeds dimension {a.dim}")
    return type(a)(a.dim, a.grade + b.grade, terms)


def evaluate(a: Form, *vectors) -> Fraction:
    if len(vectors) != a.grade:
        raise ValueError(f"form of grade {a.grade} evaluated on {len(vectors)} vectors")
    return evaluate_tensor(a.dense, *vectors)


def sharp_inverse(k: int, a: Form, g: np.ndarray) -> Multivector:
    """Raise every index of a k-form with g^-1."""
    if a.grade != k:
        raise ValueError("grade mismatch")
    return Multivector.from_dense(contract_all(a.dense, linalg.inverse(g)))


def lower(p: Multivector, g: np.ndarray) -> Form:
    return Form.from_dense(contract_all(p.dense, np.asarray(g)))


def sharp_map(pi: Multivector) -> np.ndarray:
    """Matrix of alpha -> pi(alpha, .) acting on coefficient columns."""
    return np.transpose(pi.dense)


def lambda_pullback(pi: Multivector, phi: Form) -> Multivector:
    """(Lambda^3 pi^# phi)(a, b, c) = phi(pi^# a, pi^# b, pi^# c)."""
    if pi.grade != 2 or phi.grade != 3 or pi.dim != phi.dim:
        raise ValueError("need a bivector and a 3-form of the same dimension")
    return Multivector.from_dense(contract_all(phi.dense, pi.dense))


def is_positive_definite(m) -> bool:
    m = np.asarray(m, dtype=object)
    if not np.array_equal(m, m.T):
        raise ValueError("matrix is not symmetric")
    return all(x > 0 for x in linalg.leading_minors(m))
