"""Lie algebras given by structure equations, and their Chevalley-Eilenberg calculus."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from . import linalg
from .algebra import Form, alternate, eye, frozen, is_zero_array, tdot, zeros


class LieAlgebra:
    """Structure constants C[k, i, j] = e^k([e_i, e_j]).

    Built from the declared differentials de^k; with the convention
    d alpha(X, Y) = -alpha([X, Y]) a term a e^{ij} in de^k yields
    [e_i, e_j] = -a e_k.
    """

    def __init__(self, dim: int, differentials: dict[int, Form] | None = None):
        self.dim = dim
        diffs = {}
        c = zeros(dim, dim, dim)
        for k, form in sorted((differentials or {}).items()):
            if not 1 <= k <= dim:
                raise ValueError(f"basis index {k} out of range 1..{dim}")
            if form.dim != dim or form.grade != 2:
                raise ValueError(f"d e{k} must be a 2-form in dimension {dim}")
            if not form.is_zero():
                diffs[k] = form
            for (i, j), a in form.terms.items():
                c[k - 1, i - 1, j - 1] -= a
                c[k - 1, j - 1, i - 1] += a
        self.differentials = diffs
        self.structure = frozen(c)

    @classmethod
    def from_structure_constants(cls, c) -> "LieAlgebra":
        """Inverse of the construction above: de^k has coefficient -C[k, i, j] on e^{ij}."""
        c = np.asarray(c, dtype=object)
        n = c.shape[0]
        diffs = {}
        for k in range(n):
            terms = {(i + 1, j + 1): -c[k, i, j]
                     for i, j in itertools.combinations(range(n), 2) if c[k, i, j] != 0}
            diffs[k + 1] = Form(n, 2, terms)
        out = cls(n, diffs)
        if not np.array_equal(out.structure, c):
            raise ValueError("structure constants are not antisymmetric")
        return out

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.dim == other.dim \
            and self.differentials == other.differentials

    def bracket_matrix(self, x) -> np.ndarray:
        """Matrix of ad_x."""
        return tdot(self.structure, np.asarray(x, dtype=object), axes=([1], [0]))


def lie_bracket(lie: LieAlgebra, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=object)
    y = np.asarray(y, dtype=object)
    return tdot(tdot(lie.structure, x, axes=([1], [0])), y, axes=([1], [0]))


def _d_sparse(lie: LieAlgebra, a: Form) -> Form:
    """Leibniz rule: d(e^{i1} ^ ... ^ e^{ik}) = sum_s (-1)^(s-1) e^{i1} ^ .. ^ de^{is} ^ .. ^ e^{ik}."""
    n = lie.dim
    out: dict[tuple[int, ...], Fraction] = {}
    for idx, c in a.terms.items():
        for s, k in enumerate(idx):
            de = lie.differentials.get(k)
            if de is None:
                continue
            sign = -c if s % 2 else c
            for pair, b in de.terms.items():
                key = idx[:s] + pair + idx[s + 1:]
                out[key] = out.get(key, Fraction(0)) + sign * b
    return Form(n, a.grade + 1, out)


def d_dense(lie: LieAlgebra, a: np.ndarray) -> np.ndarray:
    """Exterior derivative of a dense alternating k-tensor."""
    k = a.ndim
    n = lie.dim
    if k + 1 > n:
        return np.zeros((), dtype=object)
    if k == 0:
        return zeros(n)
    return _d_sparse(lie, Form.from_dense(a)).dense


def d_dense_reference(lie: LieAlgebra, a: np.ndarray) -> np.ndarray:
    """Same as d_dense, from d alpha(X0..Xk) = sum_{p<q} (-1)^(p+q) alpha([Xp, Xq], ...)."""
    k = a.ndim
    # t[p, q, rest] = a([e_p, e_q], rest)
    t = tdot(lie.structure, a, axes=([0], [0]))
    return -alternate(t) / (2 * factorial(k - 1))


def exterior_derivative(lie: LieAlgebra, a: Form) -> Form:
    if a.dim != lie.dim:
        raise ValueError("dimension mismatch")
    if a.grade == lie.dim:
        raise ValueError("top-degree forms have no derivative of higher grade")
    return _d_sparse(lie, a)


def jacobi_check(lie: LieAlgebra) -> bool:
    n = lie.dim
    if n < 3:
        return True
    for k in range(1, n + 1):
        de = exterior_derivative(lie, Form.basis(n, k))
        if not exterior_derivative(lie, de).is_zero():
            return False
    return True


def _span_rank(vectors) -> int:
    if not vectors:
        return 0
    return linalg.rank(np.column_stack(vectors))


def span_involutive(lie: LieAlgebra, vectors) -> bool:
    vectors = [np.asarray(v, dtype=object) for v in vectors]
    r = _span_rank(vectors)
    for x, y in itertools.combinations(vectors, 2):
        z = lie_bracket(lie, x, y)
        if is_zero_array(z):
            continue
        if _span_rank(vectors + [z]) != r:
            return False
    return True


def is_subalgebra(lie: LieAlgebra, vectors) -> bool:
    """Whether span(vectors) is closed under the bracket."""
    return span_involutive(lie, vectors)


def basis_forms(dim: int, grade: int) -> list[Form]:
    return [Form.basis(dim, *(i + 1 for i in idx))
            for idx in itertools.combinations(range(dim), grade)]


def _coordinates(form: Form) -> list[Fraction]:
    return [form.coefficient(*(i + 1 for i in idx))
            for idx in itertools.combinations(range(form.dim), form.grade)]


def d_matrix(lie: LieAlgebra, grade: int) -> np.ndarray:
    """Matrix of d from grade-k to grade-(k+1) forms in the increasing-tuple bases."""
    cols = [_coordinates(exterior_derivative(lie, b)) for b in basis_forms(lie.dim, grade)]
    return np.array(cols, dtype=object).T


def closed_forms_basis(lie: LieAlgebra, grade: int) -> list[Form]:
    basis = basis_forms(lie.dim, grade)
    if grade >= lie.dim:
        return basis
    out = []
    for v in linalg.nullspace(d_matrix(lie, grade)):
        out.append(Form(lie.dim, grade, {tuple(b.terms)[0]: c for b, c in zip(basis, v)}))
    return out


@dataclass(frozen=True)
class StructurePackage:
    """A parsed structure file: algebra plus named endomorphisms and forms."""

    algebra: LieAlgebra
    endomorphisms: dict[str, np.ndarray] = field(default_factory=dict)
    forms: dict[str, Form] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, StructurePackage):
            return NotImplemented
        return (self.algebra == other.algebra and self.forms == other.forms
                and self.endomorphisms.keys() == other.endomorphisms.keys()
                and all(np.array_equal(m, other.endomorphisms[k])
                        for k, m in self.endomorphisms.items()))


def unit_vector(n: int, i: int) -> np.ndarray:
    """e_i with 1-based i."""
    return eye(n)[:, i - 1].copy()
