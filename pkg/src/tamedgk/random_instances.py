"""Seeded random tamed packages and skew endomorphisms for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import Form, zeros
from .hermitian import TamedPackage, induce_tamed_package, tames
from .lie import LieAlgebra, closed_forms_basis


def _coefficient(rng: random.Random, bound: int = 2) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def random_tamed_packages(lie: LieAlgebra, jplus, count: int, seed: int = 0,
                          base: Form | None = None, max_tries: int = 2000) -> list[TamedPackage]:
    """Tamed packages whose Omega is ``base`` plus a random closed 2-form.

    Candidates that are degenerate or fail to tame ``jplus`` are discarded.
    """
    rng = random.Random(seed)
    closed = closed_forms_basis(lie, 2)
    start = base if base is not None else Form.zero(lie.dim, 2)
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        omega = start
        for b in closed:
            if rng.random() < 0.5:
                omega = omega + Fraction(1, 2) * _coefficient(rng) * b
        if omega.is_zero() or linalg.det(omega.dense) == 0 or not tames(omega, jplus):
            continue
        out.append(induce_tamed_package(lie, omega, jplus))
    if len(out) < count:
        raise RuntimeError(f"only {len(out)} of {count} packages found in {max_tries} tries")
    return out


def random_skew_endomorphisms(g, count: int, seed: int = 0, invertible: bool = False,
                              bound: int = 3) -> list[np.ndarray]:
    """Q = g^-1 A with A random skew-symmetric; such Q satisfy g(QX, Y) = -g(X, QY)."""
    rng = random.Random(seed)
    g = np.asarray(g, dtype=object)
    n = g.shape[0]
    g_inv = linalg.inverse(g)
    out = []
    while len(out) < count:
        a = zeros(n, n)
        for i in range(n):
            for j in range(i + 1, n):
                c = Fraction(rng.randint(-bound, bound))
                a[i, j], a[j, i] = c, -c
        q = g_inv.dot(a)
        if invertible and linalg.det(q) == 0:
            continue
        out.append(q)
    return out
