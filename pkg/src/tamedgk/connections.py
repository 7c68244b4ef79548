"""Invariant connections on a Lie algebra with an invariant metric."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import Form, frozen, is_zero_array, pullback, tdot
from .hermitian import TamedPackage, j_action_dense, nijenhuis_dense
from .lie import LieAlgebra, d_dense


@dataclass(frozen=True, eq=False)
class Connection:
    """gamma[k, i, j] = e^k(nabla_{e_i} e_j)."""

    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gamma", frozen(self.gamma))

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def __eq__(self, other):
        return isinstance(other, Connection) and np.array_equal(self.gamma, other.gamma)


def from_lowered(g_inv: np.ndarray, low: np.ndarray) -> Connection:
    """Connection whose lowered table is low[i, j, l] = g(nabla_{e_i} e_j, e_l)."""
    return Connection(tdot(g_inv, low, axes=([1], [2])))


def koszul(lie: LieAlgebra, g: np.ndarray) -> np.ndarray:
    """low[x, y, z] = g(nabla^LC_X Y, Z) = 1/2 (g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y))."""
    gc = tdot(g, lie.structure, axes=([0], [0]))  # gc[z, x, y] = g(e_z, [e_x, e_y])
    t1 = np.transpose(gc, (1, 2, 0))                        # g([X,Y], Z)
    t2 = gc                                                 # g([Y,Z], X) at [x, y, z]
    t3 = np.transpose(gc, (2, 0, 1))                        # g([Z,X], Y)
    return Fraction(1, 2) * (t1 - t2 + t3)


def levi_civita(lie: LieAlgebra, g: np.ndarray) -> Connection:
    return from_lowered(linalg.inverse(g), koszul(lie, g))


def _skew_part(t: np.ndarray) -> np.ndarray:
    """Totally skew-symmetric part of a 3-tensor antisymmetric in its last two slots."""
    return Fraction(1, 3) * (t + np.transpose(t, (2, 0, 1)) + np.transpose(t, (1, 2, 0)))


def nijenhuis_3tensor(lie: LieAlgebra, pkg: TamedPackage, j: np.ndarray) -> np.ndarray:
    """N(X, Y, Z) = g(X, N(Y, Z))."""
    return tdot(pkg.g, nijenhuis_dense(lie, j), axes=([1], [0]))


def bismut(lie: LieAlgebra, pkg: TamedPackage, sign: str = "+") -> Connection:
    """Hermitian connection of (g, J+) or (g, J-) obtained from Levi-Civita.

    + : g(nabla_X Y, Z) = LC + 1/2 J+ d omega+ (X, Y, Z)
    - : g(nabla_X Y, Z) = LC + 1/4 (N- + 3 bN-)(X, Y, Z) + 1/2 J- d omega- (X, Y, Z)
    where bN- is the totally skew part of N-(X, Y, Z) = g(X, N-(Y, Z)).
    """
    low = koszul(lie, pkg.g)
    if sign == "+":
        low = low + Fraction(1, 2) * j_action_dense(pkg.Jplus, d_dense(lie, pkg.omega_plus.dense))
    elif sign == "-":
        n3 = nijenhuis_3tensor(lie, pkg, pkg.Jminus)
        low = (low + Fraction(1, 4) * (n3 + 3 * _skew_part(n3))
               + Fraction(1, 2) * j_action_dense(pkg.Jminus, d_dense(lie, pkg.omega_minus.dense)))
    else:
        raise ValueError("sign must be '+' or '-'")
    return from_lowered(pkg.g_inv, low)


def chern(lie: LieAlgebra, pkg: TamedPackage) -> Connection:
    """g(D+_X Y, Z) = g(nabla^LC_X Y, Z) + 1/2 d omega+ (J+ X, Y, Z)."""
    dw = d_dense(lie, pkg.omega_plus.dense)
    low = koszul(lie, pkg.g) + Fraction(1, 2) * pullback(dw, pkg.Jplus)
    return from_lowered(pkg.g_inv, low)


def torsion(lie: LieAlgebra, conn: Connection) -> np.ndarray:
    """T[k, i, j] = e^k(nabla_i e_j - nabla_j e_i - [e_i, e_j])."""
    gm = conn.gamma
    return gm - np.transpose(gm, (0, 2, 1)) - lie.structure


def nabla_metric(conn: Connection, g: np.ndarray) -> np.ndarray:
    """(nabla_i g)(e_j, e_l)."""
    gm = conn.gamma
    a = tdot(gm, g, axes=([0], [0]))                      # a[i, j, l] = g(nabla_i e_j, e_l)
    return -(a + np.transpose(a, (0, 2, 1)))


def nabla_endomorphism(conn: Connection, m: np.ndarray) -> np.ndarray:
    """out[k, i, j] = e^k((nabla_i M) e_j)."""
    gm = conn.gamma
    return tdot(gm, m, axes=([2], [0])) - tdot(m, gm, axes=([1], [0]))


def nabla_two_tensor(conn: Connection, s: np.ndarray) -> np.ndarray:
    """out[i, j, l] = (nabla_i S)(e_j, e_l)."""
    gm = conn.gamma
    a = tdot(gm, s, axes=([0], [0]))                      # S(nabla_i e_j, e_l)
    b = np.transpose(tdot(gm, s, axes=([0], [1])), (0, 2, 1))  # S(e_j, nabla_i e_l)
    return -(a + b)


@dataclass(frozen=True)
class NonSkewTorsion:
    """Witness that c(X, Y, Z) = g(X, T(Y, Z)) is not totally skew."""

    triple: tuple[int, int, int]
    values: tuple[Fraction, Fraction]

    def __str__(self):
        x, y, z = self.triple
        if x == y:
            return f"c(e{x}, e{x}, e{z}) = {self.values[0]} is nonzero"
        return (f"c(e{x}, e{y}, e{z}) = {self.values[0]} but "
                f"c(e{y}, e{x}, e{z}) = {self.values[1]}")


def torsion_3form(lie: LieAlgebra, conn: Connection, g: np.ndarray) -> Form | NonSkewTorsion:
    c = tdot(g, torsion(lie, conn), axes=([1], [0]))
    n = lie.dim
    for x, y, z in itertools.product(range(n), repeat=3):
        if c[x, y, z] != -c[y, x, z]:
            return NonSkewTorsion((x + 1, y + 1, z + 1), (c[x, y, z], c[y, x, z]))
    return Form.from_dense(c)


def connection_contracts(lie: LieAlgebra, conn: Connection, g: np.ndarray, j=None) -> dict[str, bool]:
    out = {"nabla g = 0": is_zero_array(nabla_metric(conn, g))}
    if j is not None:
        out["nabla J = 0"] = is_zero_array(nabla_endomorphism(conn, np.asarray(j)))
    return out
