"""Taming, the induced almost bi-Hermitian package, and generalized structures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import linalg
from .algebra import (Form, VectorValuedTwoForm, cyclic_sum, eye, frozen, is_positive_definite,
                      is_zero_array, pullback, tdot, zeros)
from .conventions import TWIST_J_ON_FORMS
from .lie import LieAlgebra, d_dense

HALF = Fraction(1, 2)


class NotTamedError(ValueError):
    pass


class NotClosedError(ValueError):
    pass


class DegenerateFormError(ValueError):
    pass


class InternalInvariantError(RuntimeError):
    pass


@dataclass(frozen=True)
class AlmostComplexStructure:
    matrix: np.ndarray

    def __post_init__(self):
        m = frozen(self.matrix)
        n = m.shape[0]
        if m.shape != (n, n) or not np.array_equal(m.dot(m), -eye(n)):
            raise ValueError("J^2 is not -identity")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _matrix(j) -> np.ndarray:
    return j.matrix if isinstance(j, AlmostComplexStructure) else np.asarray(j, dtype=object)


def j_action_dense(j, a: np.ndarray, twist: bool = TWIST_J_ON_FORMS) -> np.ndarray:
    """(J a)(X1..Xk) = a(J X1, .., J Xk), times (-1)^k when ``twist``."""
    m = _matrix(j)
    out = pullback(a, *([m] * a.ndim))
    return -out if twist and a.ndim % 2 else out


def j_action(j, a: Form, twist: bool = TWIST_J_ON_FORMS) -> Form:
    return Form.from_dense(j_action_dense(j, a.dense, twist))


def nijenhuis_dense(lie: LieAlgebra, j) -> np.ndarray:
    """N[k, a, b] = e^k(N(e_a, e_b)), N(X, Y) = [X,Y] - [JX,JY] + J[JX,Y] + J[X,JY]."""
    m = _matrix(j)
    c = lie.structure
    cjj = pullback(c, None, m, m)
    cj1 = pullback(c, None, m, None)
    cj2 = pullback(c, None, None, m)
    return c - cjj + tdot(m, cj1 + cj2, axes=([1], [0]))


def nijenhuis(lie: LieAlgebra, j) -> VectorValuedTwoForm:
    return VectorValuedTwoForm(nijenhuis_dense(lie, j))


def taming_matrix(omega: Form, j) -> np.ndarray:
    """Symmetric part of (X, Y) -> Omega(JX, Y), i.e. 1/2 (Omega J - J* Omega)."""
    m = _matrix(j)
    om = omega.dense
    a = m.T.dot(om)
    return HALF * (a + a.T)


def tames(omega: Form, j) -> bool:
    """True iff Omega(JX, X) > 0 for every nonzero X."""
    return is_positive_definite(taming_matrix(omega, j))


@dataclass(frozen=True, eq=False)
class TamedPackage:
    """(Omega, J+, J-, g, b, omega+, omega-) induced by a taming symplectic form."""

    Omega: Form
    Jplus: np.ndarray
    Jminus: np.ndarray
    g: np.ndarray
    b: Form
    omega_plus: Form
    omega_minus: Form

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @cached_property
    def g_inv(self) -> np.ndarray:
        return frozen(linalg.inverse(self.g))

    @cached_property
    def Omega_inv(self) -> np.ndarray:
        return frozen(linalg.inverse(self.Omega.dense))

    @cached_property
    def Q(self) -> np.ndarray:
        """Q = [J+, J-]."""
        return frozen(self.Jplus.dot(self.Jminus) - self.Jminus.dot(self.Jplus))

    @cached_property
    def generalized_pair(self) -> tuple["GeneralizedEndomorphism", "GeneralizedEndomorphism"]:
        """(J1, J2) of the block formula, computed once per package."""
        return build_generalized_pair(self)

    def invariants(self) -> dict[str, bool]:
        """Exact checks of every algebraic relation of the package."""
        n = self.dim
        jp, jm, g, om = self.Jplus, self.Jminus, self.g, self.Omega.dense
        identity = eye(n)
        q = self.Q
        return {
            "J+^2 = -1": np.array_equal(jp.dot(jp), -identity),
            "J-^2 = -1": np.array_equal(jm.dot(jm), -identity),
            "J- = -Omega^-1 J+* Omega": np.array_equal(jm, -self.Omega_inv.dot(jp.T).dot(om)),
            "g symmetric": np.array_equal(g, g.T),
            "g positive definite": is_positive_definite(g),
            "g = 1/2 Omega(J+ + J-)": np.array_equal(g, HALF * (jp + jm).T.dot(om)),
            "b = -1/2 Omega(J+ - J-)": np.array_equal(self.b.dense, -HALF * (jp - jm).T.dot(om)),
            "g - b = Omega J+": np.array_equal(g - self.b.dense, jp.T.dot(om)),
            "g + b = Omega J-": np.array_equal(g + self.b.dense, jm.T.dot(om)),
            "omega+ = g(., J+ .)": np.array_equal(self.omega_plus.dense, g.dot(jp)),
            "omega- = g(., J- .)": np.array_equal(self.omega_minus.dense, g.dot(jm)),
            "Omega J+ = -J-* Omega": np.array_equal(jp.T.dot(om), -om.dot(jm)),
            "g(J+ X, J+ Y) = g(X, Y)": np.array_equal(jp.T.dot(g).dot(jp), g),
            "g(J- X, J- Y) = g(X, Y)": np.array_equal(jm.T.dot(g).dot(jm), g),
            "Q J+ = -J+ Q": np.array_equal(q.dot(jp), -jp.dot(q)),
            "Q J- = -J- Q": np.array_equal(q.dot(jm), -jm.dot(q)),
            "g(QX, Y) = -g(X, QY)": np.array_equal(q.T.dot(g), -g.dot(q)),
            "S(J+X, J+Y) = -S(X, Y)": _type_20(q.T.dot(g), jp),
            "S(J-X, J-Y) = -S(X, Y)": _type_20(q.T.dot(g), jm),
        }


def _type_20(s: np.ndarray, j: np.ndarray) -> bool:
    return np.array_equal(j.T.dot(s).dot(j), -s)


def induce_tamed_package(lie: LieAlgebra, omega: Form, jplus) -> TamedPackage:
    """Build (J-, g, b, omega+-) from a symplectic Omega taming J+."""
    jp = _matrix(jplus)
    AlmostComplexStructure(jp)
    if omega.grade != 2 or omega.dim != lie.dim:
        raise ValueError("Omega must be a 2-form of the algebra's dimension")
    if not is_zero_array(d_dense(lie, omega.dense)):
        raise NotClosedError("Omega is not closed")
    om = omega.dense
    if linalg.det(om) == 0:
        raise DegenerateFormError("Omega is degenerate")
    if not tames(omega, jp):
        raise NotTamedError("Omega does not tame J")
    jm = -linalg.inverse(om).dot(jp.T).dot(om)
    g = HALF * (jp + jm).T.dot(om)
    b = -HALF * (jp - jm).T.dot(om)
    return TamedPackage(omega, frozen(jp), frozen(jm), frozen(g), Form.from_dense(b),
                        Form.from_dense(g.dot(jp)), Form.from_dense(g.dot(jm)))


def skt_check(lie: LieAlgebra, pkg: TamedPackage) -> bool:
    """d(J+ d omega+) = 0."""
    c = j_action_dense(pkg.Jplus, d_dense(lie, pkg.omega_plus.dense))
    return lie.dim < 4 or is_zero_array(d_dense(lie, c))


def jd_omega(lie: LieAlgebra, pkg: TamedPackage, sign: str = "+") -> Form:
    j, w = (pkg.Jplus, pkg.omega_plus) if sign == "+" else (pkg.Jminus, pkg.omega_minus)
    return Form.from_dense(j_action_dense(j, d_dense(lie, w.dense)))


def prop22_residual(lie: LieAlgebra, pkg: TamedPackage, variant: str = "printed") -> tuple[Form, Form]:
    """Residuals of
    -J+ d omega+ + db = 1/2 sigma Omega(J- X, N+(Y, Z)),
    -J- d omega- - db = 1/2 sigma Omega(J+ X, N-(Y, Z)).

    ``variant="sign_flipped"`` uses +J d omega on the left instead.
    """
    if variant not in ("printed", "sign_flipped"):
        raise ValueError(f"unknown variant {variant!r}")
    jsign = -1 if variant == "printed" else 1
    om = pkg.Omega.dense
    db = d_dense(lie, pkg.b.dense)
    out = []
    for j, w, other, sign in ((pkg.Jplus, pkg.omega_plus, pkg.Jminus, 1),
                              (pkg.Jminus, pkg.omega_minus, pkg.Jplus, -1)):
        jdw = j_action_dense(j, d_dense(lie, w.dense))
        n = nijenhuis_dense(lie, j)
        # t[x, y, z] = Omega(other e_x, N(e_y, e_z))
        t = tdot(other.T.dot(om), n, axes=([1], [0]))
        out.append(Form.from_dense(jsign * jdw + sign * db - HALF * cyclic_sum(t)))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Generalized structures on T + T*

def _pairing(n: int) -> np.ndarray:
    p = zeros(2 * n, 2 * n)
    for i in range(n):
        p[i, n + i] = p[n + i, i] = HALF
    return p


def _mdot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return tdot(a, b, axes=([1], [0]))


def flat(beta: np.ndarray) -> np.ndarray:
    """Matrix of X -> i_X beta = beta(X, .) for a dense 2-form."""
    return -np.asarray(beta)


@dataclass(frozen=True, eq=False)
class GeneralizedEndomorphism:
    """Block operator [[A, B], [C, D]] on column vectors (X; xi)."""

    tt: np.ndarray  # T -> T
    ct: np.ndarray  # T* -> T
    tc: np.ndarray  # T -> T*
    cc: np.ndarray  # T* -> T*

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "GeneralizedEndomorphism":
        n = m.shape[0] // 2
        return cls(frozen(m[:n, :n]), frozen(m[:n, n:]), frozen(m[n:, :n]), frozen(m[n:, n:]))

    @property
    def dim(self) -> int:
        return self.tt.shape[0]

    @cached_property
    def matrix(self) -> np.ndarray:
        return frozen(np.block([[self.tt, self.ct], [self.tc, self.cc]]))

    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.tt, self.ct, self.tc, self.cc

    def __matmul__(self, other: "GeneralizedEndomorphism") -> "GeneralizedEndomorphism":
        return GeneralizedEndomorphism.from_matrix(_mdot(self.matrix, other.matrix))

    def __neg__(self):
        return GeneralizedEndomorphism.from_matrix(-self.matrix)

    def __eq__(self, other):
        return isinstance(other, GeneralizedEndomorphism) and np.array_equal(self.matrix, other.matrix)

    def squares_to_minus_one(self) -> bool:
        return np.array_equal(_mdot(self.matrix, self.matrix), -eye(2 * self.dim))

    def is_orthogonal(self) -> bool:
        p = _pairing(self.dim)
        return np.array_equal(_mdot(_mdot(self.matrix.T, p), self.matrix), p)

    def pairing_form(self) -> np.ndarray:
        """Bilinear form (u, v) -> <self u, v>."""
        return _mdot(_pairing(self.dim), self.matrix)

    def is_positive_definite_metric(self) -> bool:
        m = self.pairing_form()
        return np.array_equal(m, m.T) and is_positive_definite(m)


def generalized_symplectic(omega: Form) -> GeneralizedEndomorphism:
    """J_Omega = [[0, Omega^-1], [-Omega, 0]] with Omega acting as X -> i_X Omega."""
    of = flat(omega.dense)
    n = of.shape[0]
    return GeneralizedEndomorphism(frozen(zeros(n, n)), frozen(linalg.inverse(of)),
                                   frozen(-of), frozen(zeros(n, n)))


def _b_transform(b: np.ndarray, sign: int) -> np.ndarray:
    n = b.shape[0]
    return np.block([[eye(n), zeros(n, n)], [sign * flat(b), eye(n)]])


def build_generalized_pair(pkg: TamedPackage) -> tuple[GeneralizedEndomorphism, GeneralizedEndomorphism]:
    """The pair (J1, J2) of the block formula for the quadruple (g, b, J+, J-)."""
    jp, jm = pkg.Jplus, pkg.Jminus
    wp, wm = flat(pkg.omega_plus.dense), flat(pkg.omega_minus.dense)
    wpi, wmi = linalg.inverse(wp), linalg.inverse(wm)
    left = _b_transform(pkg.b.dense, 1)
    right = _b_transform(pkg.b.dense, -1)
    m1 = HALF * np.block([[jm - jp, wmi + wpi], [-(wm + wp), -(jm.T - jp.T)]])
    m2 = HALF * np.block([[jm + jp, wmi - wpi], [-(wm - wp), -(jm.T + jp.T)]])
    j1 = GeneralizedEndomorphism.from_matrix(_mdot(_mdot(left, m1), right))
    j2 = GeneralizedEndomorphism.from_matrix(_mdot(_mdot(left, m2), right))
    return j1, j2


def remark_closed_form(pkg: TamedPackage) -> GeneralizedEndomorphism:
    """[[-2(J+ + J-)^-1, -Omega^-1 (J+* - J-*)(J+* + J-*)^-1],
        [-Omega (J+ - J-)(J+ + J-)^-1, 2 (J+* + J-*)^-1]]."""
    jp, jm = pkg.Jplus, pkg.Jminus
    of = flat(pkg.Omega.dense)
    s = jp + jm
    try:
        si, sti = linalg.inverse(s), linalg.inverse(s.T)
    except linalg.SingularMatrixError as exc:
        raise InternalInvariantError("J+ + J- is singular for a tamed package") from exc
    return GeneralizedEndomorphism(
        frozen(-2 * si),
        frozen(-linalg.inverse(of).dot(jp.T - jm.T).dot(sti)),
        frozen(-of.dot(jp - jm).dot(si)),
        frozen(2 * sti),
    )


def generalized_pair_checks(pkg: TamedPackage) -> dict[str, bool]:
    j1, j2 = pkg.generalized_pair
    rem = remark_closed_form(pkg)
    jo = generalized_symplectic(pkg.Omega)
    out = {"J1 = J_Omega": j1 == jo}
    for name, a, b in zip(("(1,1)", "(1,2)", "(2,1)", "(2,2)"), j2.blocks(), rem.blocks()):
        out[f"J2 block {name} = closed form"] = np.array_equal(a, b)
    out.update({
        "J1^2 = -1": j1.squares_to_minus_one(),
        "J2^2 = -1": j2.squares_to_minus_one(),
        "J1 orthogonal": j1.is_orthogonal(),
        "J2 orthogonal": j2.is_orthogonal(),
        "J1 J2 = J2 J1": j1 @ j2 == j2 @ j1,
        "G = -J1 J2 positive definite": (-(j1 @ j2)).is_positive_definite_metric(),
    })
    return out


def integrable(lie: LieAlgebra, j) -> bool:
    return is_zero_array(nijenhuis_dense(lie, j))


def basis_triples(n: int):
    return itertools.product(range(n), repeat=3)
