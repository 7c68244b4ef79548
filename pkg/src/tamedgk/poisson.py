"""Bivectors of skew endomorphisms, Schouten brackets and twisted Poisson structures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import (ComplexTensor, Form, Multivector, PsiTensor, VectorValuedTwoForm,
                      alternate, contract_all, cyclic_sum, eye, frozen, is_zero_array,
                      lambda_pullback, pullback, tdot, zeros)
from .conventions import SCHOUTEN_SIGN
from .connections import chern, levi_civita, nabla_endomorphism, nabla_two_tensor, nijenhuis_3tensor
from .hermitian import TamedPackage, j_action_dense, nijenhuis_dense
from .lie import LieAlgebra, closed_forms_basis, d_dense, is_subalgebra, lie_bracket, span_involutive

HALF = Fraction(1, 2)


class SkewnessError(ValueError):
    pass


class MissingDataError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SkewEndo:
    """An endomorphism Q with g(QX, Y) = -g(X, QY)."""

    Q: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        q, g = frozen(self.Q), frozen(self.g)
        if not np.array_equal(q.T.dot(g), -g.dot(q)):
            raise SkewnessError("Q is not skew-symmetric for g")
        object.__setattr__(self, "Q", q)
        object.__setattr__(self, "g", g)

    @property
    def dim(self) -> int:
        return self.Q.shape[0]

    @property
    def S(self) -> np.ndarray:
        """S(X, Y) = g(QX, Y)."""
        return self.Q.T.dot(self.g)


def commutator_skew(pkg: TamedPackage, scale=1) -> SkewEndo:
    return SkewEndo(Fraction(scale) * pkg.Q, pkg.g)


def bivector_from_skew(q: SkewEndo) -> Multivector:
    """Q~ = #_2^-1 S."""
    return Multivector.from_dense(contract_all(q.S, linalg.inverse(q.g)))


def twist_bivector(pkg: TamedPackage) -> Multivector:
    """Q~ built from 1/2 [J+, J-], as evaluated in the six-dimensional example."""
    return bivector_from_skew(commutator_skew(pkg, HALF))


# ---------------------------------------------------------------------------
# Schouten bracket


def _frame_dense(lie: LieAlgebra, p: np.ndarray) -> np.ndarray:
    # t[m, j, l] = sum_{i,k} C[m, i, k] P[i, j] P[k, l]
    t = tdot(tdot(lie.structure, p, axes=([1], [0])), p, axes=([1], [0]))
    return SCHOUTEN_SIGN * alternate(t)


def _lc_route(lie: LieAlgebra, q: SkewEndo) -> np.ndarray:
    lc = levi_civita(lie, q.g)
    dq = nabla_endomorphism(lc, q.Q)                                # dq[k, i, j] = ((nabla_i Q) e_j)^k
    gdq = tdot(q.g, dq, axes=([0], [0]))                     # g(e_z, (nabla_i Q) e_y) at [z, i, y]
    t = tdot(q.Q, gdq, axes=([0], [1]))                      # [x, z, y] with i = Q e_x
    t = np.transpose(t, (0, 2, 1))                                   # g((nabla_{QX} Q) Y, Z)
    return contract_all(-2 * cyclic_sum(t), linalg.inverse(q.g))


def _prop33_route(lie: LieAlgebra, q: SkewEndo) -> np.ndarray:
    c = pullback(lie.structure, None, q.Q, q.Q)                      # [QY, QZ]
    t = tdot(q.g, c, axes=([1], [0]))                        # g(X, [QY, QZ])
    return contract_all(-2 * cyclic_sum(t), linalg.inverse(q.g))


SCHOUTEN_MODES = ("frame", "levi_civita", "prop33")


def schouten_bracket(lie: LieAlgebra, pi: Multivector | None, mode: str = "frame",
                     skew: SkewEndo | None = None) -> Multivector:
    """[pi, pi] by the frame expansion, the Levi-Civita formula or the bracket formula.

    The last two need the skew endomorphism that ``pi`` comes from.
    """
    if mode == "frame":
        if pi is None:
            if skew is None:
                raise MissingDataError("frame mode needs a bivector")
            pi = bivector_from_skew(skew)
        return Multivector.from_dense(_frame_dense(lie, pi.dense))
    if mode not in SCHOUTEN_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if skew is None:
        raise MissingDataError(f"mode {mode!r} needs the skew endomorphism Q and the metric g")
    route = _lc_route if mode == "levi_civita" else _prop33_route
    return Multivector.from_dense(route(lie, skew))


def schouten_all_modes(lie: LieAlgebra, skew: SkewEndo) -> dict[str, Multivector]:
    pi = bivector_from_skew(skew)
    return {m: schouten_bracket(lie, pi, m, skew) for m in SCHOUTEN_MODES}


def twisted_residual(lie: LieAlgebra, pi: Multivector, phi: Form) -> Multivector:
    """[pi, pi] - 1/2 Lambda^3 pi^# phi."""
    return schouten_bracket(lie, pi) - HALF * lambda_pullback(pi, phi)


def is_twisted_poisson(lie: LieAlgebra, pi: Multivector, phi: Form) -> bool:
    return (is_zero_array(d_dense(lie, phi.dense)) if lie.dim > 3 else True) \
        and twisted_residual(lie, pi, phi).is_zero()


# ---------------------------------------------------------------------------
# Identities involving fundamental forms


def _raise3(a: np.ndarray, g_inv: np.ndarray) -> Multivector:
    return Multivector.from_dense(contract_all(a, g_inv))


def inverse_bivector(w: np.ndarray) -> Multivector:
    """The bivector with dense matrix w^-1."""
    return Multivector.from_dense(linalg.inverse(w))


def zabzine_identity_residual(lie: LieAlgebra, g: np.ndarray, j: np.ndarray) -> Multivector:
    """[omega^-1, omega^-1] - #_3^-1 (2 J d omega) for omega = g(., J .)."""
    w = np.asarray(g).dot(j)
    jdw = j_action_dense(j, d_dense(lie, w))
    return schouten_bracket(lie, inverse_bivector(w)) - _raise3(2 * jdw, linalg.inverse(g))


def beta_bivectors(pkg: TamedPackage) -> tuple[Multivector, Multivector]:
    wp = linalg.inverse(pkg.omega_plus.dense)
    wm = linalg.inverse(pkg.omega_minus.dense)
    return Multivector.from_dense(wp + wm), Multivector.from_dense(wp - wm)


def lemma41_residual(lie: LieAlgebra, pkg: TamedPackage) -> tuple[Multivector, Multivector]:
    """([beta2, beta2] - 4 #_3^-1 (J+ d omega+ + J- d omega-), [beta1, beta1])."""
    b1, b2 = beta_bivectors(pkg)
    total = (j_action_dense(pkg.Jplus, d_dense(lie, pkg.omega_plus.dense))
             + j_action_dense(pkg.Jminus, d_dense(lie, pkg.omega_minus.dense)))
    res = schouten_bracket(lie, b2) - _raise3(4 * total, pkg.g_inv)
    return res, schouten_bracket(lie, b1)


# ---------------------------------------------------------------------------
# Twisting forms


@dataclass(frozen=True)
class AffineFormSet:
    """particular + span(directions); ``particular is None`` means empty."""

    particular: Form | None
    directions: tuple[Form, ...] = ()

    def __bool__(self):
        return self.particular is not None

    def forms(self) -> list[Form]:
        return [] if self.particular is None else [self.particular, *self.directions]

    def contains(self, phi: Form) -> bool:
        if self.particular is None:
            return False
        diff = _coords(phi - self.particular)
        if not self.directions:
            return all(c == 0 for c in diff)
        m = np.array([_coords(d) for d in self.directions], dtype=object).T
        return linalg.solve_affine(m, np.array(diff, dtype=object)) is not None


def _coords(f: Form) -> list[Fraction]:
    return [f.coefficient(*(i + 1 for i in idx))
            for idx in itertools.combinations(range(f.dim), f.grade)]


def endomorphism_on_3form(a: np.ndarray, phi: np.ndarray, interpretation: str) -> np.ndarray:
    """Action of an endomorphism A on a 3-form.

    all_slots: phi(AX, AY, AZ).
    one_slot:  phi(AX, Y, Z) + phi(X, AY, Z) + phi(X, Y, AZ), one slot at a time.
    """
    if interpretation == "all_slots":
        return pullback(phi, a, a, a)
    if interpretation == "one_slot":
        return pullback(phi, a) + pullback(phi, None, a) + pullback(phi, None, None, a)
    raise ValueError(f"unknown interpretation {interpretation!r}")


INTERPRETATIONS = ("all_slots", "one_slot")


def _solve_linear_in_phi(lie: LieAlgebra, image, target: np.ndarray) -> AffineFormSet:
    basis = closed_forms_basis(lie, 3)
    n = lie.dim
    if not basis:
        return AffineFormSet(Form.zero(n, 3)) if is_zero_array(target) else AffineFormSet(None)
    cols = [np.asarray(image(b)).reshape(-1) for b in basis]
    sol = linalg.solve_affine(np.column_stack(cols), np.asarray(target).reshape(-1))
    if sol is None:
        return AffineFormSet(None)
    x, kernel = sol

    def combo(coeffs):
        out = Form.zero(n, 3)
        for c, b in zip(coeffs, basis):
            if c != 0:
                out = out + c * b
        return out

    return AffineFormSet(combo(x), tuple(combo(k) for k in kernel))


def solve_twisting_form(lie: LieAlgebra, pi: Multivector, shape: str = "standard",
                        pkg: TamedPackage | None = None,
                        interpretation: str = "all_slots") -> AffineFormSet:
    """All closed 3-forms phi making pi twisted Poisson.

    standard: [pi, pi] = 1/2 Lambda^3 pi^# phi.
    beta2:    J- d omega- + J+ d omega+ = 1/8 (J+ - J-) phi for the package's beta^2,
              with the action of J+ - J- fixed by ``interpretation``.
    """
    if lie.dim < 3:
        raise ValueError("twisting 3-forms need dimension at least 3")
    if shape == "standard":
        target = schouten_bracket(lie, pi).dense
        return _solve_linear_in_phi(lie, lambda b: HALF * lambda_pullback(pi, b).dense, target)
    if shape == "beta2":
        if pkg is None:
            raise MissingDataError("shape 'beta2' needs the tamed package")
        a = pkg.Jplus - pkg.Jminus
        target = (j_action_dense(pkg.Jplus, d_dense(lie, pkg.omega_plus.dense))
                  + j_action_dense(pkg.Jminus, d_dense(lie, pkg.omega_minus.dense)))
        return _solve_linear_in_phi(
            lie, lambda b: Fraction(1, 8) * endomorphism_on_3form(a, b.dense, interpretation), target)
    raise ValueError(f"unknown shape {shape!r}")


def q_inverse_form(q: SkewEndo) -> Form:
    """q(X, Y) = g(Q^-1 X, Y)."""
    try:
        qi = linalg.inverse(q.Q)
    except linalg.SingularMatrixError as exc:
        raise linalg.SingularMatrixError("Q is singular") from exc
    return Form.from_dense(qi.T.dot(q.g))


# ---------------------------------------------------------------------------
# The bracket of Q~ for a tamed package


def _jdw_pair(lie: LieAlgebra, pkg: TamedPackage):
    p = j_action_dense(pkg.Jplus, d_dense(lie, pkg.omega_plus.dense))
    m = j_action_dense(pkg.Jminus, d_dense(lie, pkg.omega_minus.dense))
    return p, m


def _skew_part(t):
    return Fraction(1, 3) * cyclic_sum(t)


def brac_explicit_rhs(lie: LieAlgebra, pkg: TamedPackage, formula: str = "auto") -> Multivector:
    """Right-hand side of the explicit formula for [Q~, Q~], Q = [J+, J-], raised with g.

    general: -sigma[ (N + 3bN)(QX, J-Y, J+Z) + (N + 3bN)(QX, J+Y, J-Z)
                     - P(QX, J-Y, J+Z) - P(QX, J+Y, J-Z) - P(QX, Y, J+J-Z) - P(QX, J+J-Y, Z)
                     + M(QX, J-Y, J+Z) + M(QX, Y, J-J+Z) + M(QX, J-J+Y, Z) + M(QX, J+Y, J-Z) ]
    dim4:    sigma[ -N(QX, J-Y, J+Z) - N(QX, J+Y, J-Z) - (P + M)(QX, Y, QZ) ]
    dim4_corrected: the dim4 expression with + (P + M)(QX, Y, QZ)
    with N(X, Y, Z) = g(X, N-(Y, Z)), P = J+ d omega+, M = J- d omega-.
    """
    if formula == "auto":
        formula = "dim4" if lie.dim == 4 else "general"
    jp, jm, q = pkg.Jplus, pkg.Jminus, pkg.Q
    identity = eye(lie.dim)
    n3 = nijenhuis_3tensor(lie, pkg, jm)
    p, m = _jdw_pair(lie, pkg)
    if formula == "general":
        a = n3 + 3 * _skew_part(n3)
        inner = (pullback(a, q, jm, jp) + pullback(a, q, jp, jm)
                 - pullback(p, q, jm, jp) - pullback(p, q, jp, jm)
                 - pullback(p, q, identity, jp.dot(jm)) - pullback(p, q, jp.dot(jm), identity)
                 + pullback(m, q, jm, jp) + pullback(m, q, identity, jm.dot(jp))
                 + pullback(m, q, jm.dot(jp), identity) + pullback(m, q, jp, jm))
        low = -cyclic_sum(inner)
    elif formula in ("dim4", "dim4_corrected"):
        sign = -1 if formula == "dim4" else 1
        inner = (-pullback(n3, q, jm, jp) - pullback(n3, q, jp, jm)
                 + sign * pullback(p + m, q, None, q))
        low = cyclic_sum(inner)
    else:
        raise ValueError(f"unknown formula {formula!r}")
    return _raise3(low, pkg.g_inv)


BRAC_FORMULAS = ("general", "dim4", "dim4_corrected")


# ---------------------------------------------------------------------------
# psi, its (3,0) part and holomorphy


def psi_tensor(lie: LieAlgebra, pkg: TamedPackage) -> PsiTensor:
    """psi(X, Y, Z) = Omega(X, N-(Y, Z))."""
    return PsiTensor(tdot(pkg.Omega.dense, nijenhuis_dense(lie, pkg.Jminus), axes=([1], [0])))


def complexify3(t: np.ndarray, j: np.ndarray, sign: int) -> ComplexTensor:
    """(X, Y, Z) -> t(X + sign i JX, Y + sign i JY, Z + sign i JZ) as a (re, im) pair."""
    re = zeros(*t.shape)
    im = zeros(*t.shape)
    for mask in itertools.product((False, True), repeat=3):
        k = sum(mask)
        term = pullback(t, *(j if use else None for use in mask))
        # (sign i)^k
        unit = sign ** k
        if k % 4 == 0:
            re = re + unit * term
        elif k % 4 == 1:
            im = im + unit * term
        elif k % 4 == 2:
            re = re - unit * term
        else:
            im = im - unit * term
    return ComplexTensor(re, im)


def psi30(lie: LieAlgebra, pkg: TamedPackage) -> ComplexTensor:
    """psi(X - iJ+X, Y - iJ+Y, Z - iJ+Z)."""
    return complexify3(psi_tensor(lie, pkg).array, pkg.Jplus, -1)


def frakN_tensor(lie: LieAlgebra, pkg: TamedPackage) -> VectorValuedTwoForm:
    """N(Y,Z) + J- N(J+Y, Z) + J- N(Y, J+Z) - N(J+Y, J+Z) for N = N-."""
    jp, jm = pkg.Jplus, pkg.Jminus
    nm = nijenhuis_dense(lie, jm)
    mixed = pullback(nm, None, jp, None) + pullback(nm, None, None, jp)
    return VectorValuedTwoForm(nm + tdot(jm, mixed, axes=([1], [0]))
                               - pullback(nm, None, jp, jp))


def frakN_holomorphy(lie: LieAlgebra, pkg: TamedPackage) -> tuple[VectorValuedTwoForm, bool]:
    fn = frakN_tensor(lie, pkg)
    return fn, fn.is_zero()


def frakN_cross_check(lie: LieAlgebra, pkg: TamedPackage) -> bool:
    """psi^(3,0) = Omega(X, N(Y,Z)) - i Omega(J+X, N(Y,Z)) with N the tensor above."""
    fn = frakN_tensor(lie, pkg).array
    om = pkg.Omega.dense
    re = tdot(om, fn, axes=([1], [0]))
    im = -tdot(pkg.Jplus.T.dot(om), fn, axes=([1], [0]))
    p = psi30(lie, pkg)
    return np.array_equal(p.re, re) and np.array_equal(p.im, im)


CHERN_FORMS = ("printed", "intermediate", "rescaled")


def chern_derivative_identity_residual(lie: LieAlgebra, pkg: TamedPackage,
                                       form: str = "printed") -> ComplexTensor:
    """Both sides of the Chern derivative identity for Q = [J+, J-], subtracted.

    Left side: 2 (D+_{X+iJ+X} S02)(Y, Z), S02(Y, Z) = 1/4 S(Y + iJ+Y, Z + iJ+Z).
    printed:      right side psi(X - iJ+X, Y - iJ+Y, Z - iJ+Z).
    rescaled:     right side i/2 psi(X + iJ+X, Y + iJ+Y, Z + iJ+Z).
    intermediate: the real identity
                  2 (D_X S)(Y, Z) - 2 (D_{J+X} S)(Y, J+Z)
                  = psi(J+X, J+Y, J+Z) - psi(J+X, Y, Z) - psi(X, J+Y, Z) - psi(X, Y, J+Z).
    """
    jp = pkg.Jplus
    s = pkg.Q.T.dot(pkg.g)
    ds = nabla_two_tensor(chern(lie, pkg), s)          # ds[x, y, z] = (D_X S)(Y, Z)
    psi = psi_tensor(lie, pkg).array
    if form == "intermediate":
        lhs = 2 * ds - 2 * pullback(ds, jp, None, jp)
        rhs = (pullback(psi, jp, jp, jp) - pullback(psi, jp) - pullback(psi, None, jp)
               - pullback(psi, None, None, jp))
        return ComplexTensor(lhs - rhs, zeros(*psi.shape))
    full = complexify3(ds, jp, 1)
    lhs = ComplexTensor(HALF * full.re, HALF * full.im)
    if form == "printed":
        return lhs - complexify3(psi, jp, -1)
    if form == "rescaled":
        return lhs - complexify3(psi, jp, 1).scale(Fraction(0), HALF)
    raise ValueError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# Image of Q and leaves


@dataclass(frozen=True)
class ImageReport:
    rank: int
    image_basis: tuple[np.ndarray, ...]
    kernel_basis: tuple[np.ndarray, ...]
    orthogonal: bool
    involutive: bool
    subalgebra: bool
    dichotomy: bool | None  # rank in {0, 4} when the dimension is 4


def image_analysis(lie: LieAlgebra, q: SkewEndo) -> ImageReport:

    m = q.Q
    r = linalg.rank(m)
    image = tuple(linalg.column_space(m)) if r else ()
    kernel = tuple(linalg.nullspace(m))
    orth = all(u.dot(q.g).dot(v) == 0 for u in image for v in kernel)
    columns = [m[:, j] for j in range(lie.dim) if not is_zero_array(m[:, j])]
    return ImageReport(
        rank=r,
        image_basis=image,
        kernel_basis=kernel,
        orthogonal=orth,
        involutive=span_involutive(lie, columns),
        subalgebra=is_subalgebra(lie, list(image)),
        dichotomy=(r in (0, 4)) if lie.dim == 4 else None,
    )


@dataclass(frozen=True)
class Leaf:
    """The subalgebra spanned by Im(Q) with the restricted data, in the basis ``basis``."""

    basis: np.ndarray          # n x k, columns span Im(Q)
    algebra: LieAlgebra
    g: np.ndarray
    endomorphisms: dict[str, np.ndarray]


def _coordinates_in(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    sol = linalg.solve_affine(basis, v)
    if sol is None:
        raise ValueError("vector not in the span")
    return sol[0]


def restrict_to_image(lie: LieAlgebra, q: SkewEndo, extra: dict[str, np.ndarray] | None = None) -> Leaf:
    """Restrict the algebra, g, Q and any Q-image-preserving endomorphisms to Im(Q)."""

    image = linalg.column_space(q.Q)
    if not image or not is_subalgebra(lie, image):
        raise ValueError("Im(Q) is not a nonzero subalgebra")
    basis = np.column_stack(image)
    k = basis.shape[1]
    c = zeros(k, k, k)
    for i, j in itertools.product(range(k), repeat=2):
        c[:, i, j] = _coordinates_in(basis, lie_bracket(lie, basis[:, i], basis[:, j]))
    sub = LieAlgebra.from_structure_constants(c)
    endos = {"Q": q.Q, **(extra or {})}
    restricted = {}
    for name, e in endos.items():
        restricted[name] = np.column_stack([_coordinates_in(basis, e.dot(basis[:, i])) for i in range(k)])
    return Leaf(basis, sub, basis.T.dot(q.g).dot(basis), restricted)


def leaf_twisting_check(leaf: Leaf, name: str = "Q") -> tuple[Form, bool]:
    """phi = -4 dq_L for the restricted endomorphism, and whether it twists its bivector."""
    sk = SkewEndo(leaf.endomorphisms[name], leaf.g)
    q = q_inverse_form(sk)
    if leaf.algebra.dim < 3:
        raise ValueError("twisting 3-forms need dimension at least 3")
    phi = -4 * Form.from_dense(d_dense(leaf.algebra, q.dense))
    return phi, is_twisted_poisson(leaf.algebra, bivector_from_skew(sk), phi)
