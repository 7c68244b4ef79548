import itertools
from fractions import Fraction

import numpy as np
import pytest

from tamedgk.algebra import Form, eye, is_zero_array, tdot
from tamedgk.connections import (Connection, NonSkewTorsion, bismut, chern, connection_contracts,
                                 levi_civita, torsion, torsion_3form)
from tamedgk.hermitian import jd_omega, skt_check
from tamedgk.lie import exterior_derivative, lie_bracket, unit_vector

from conftest import loaded, random_packages

HALF = Fraction(1, 2)


def covariant(conn, i, j):
    return conn.gamma[:, i, j]


def test_levi_civita_on_abelian_is_zero(torus):
    lie, pkg = torus
    assert not levi_civita(lie, pkg.g).gamma.any()
    g = eye(4) + eye(4)
    g[0, 1] = g[1, 0] = 1
    assert not levi_civita(lie, g).gamma.any()


def test_levi_civita_contracts(fixture_name):
    lie, pkg = loaded(fixture_name)
    lc = levi_civita(lie, pkg.g)
    assert connection_contracts(lie, lc, pkg.g) == {"nabla g = 0": True}
    assert is_zero_array(torsion(lie, lc))
    assert torsion_3form(lie, lc, pkg.g).is_zero()


def test_levi_civita_koszul_brute_force(solv6):
    lie, pkg = solv6
    g = pkg.g
    lc = levi_civita(lie, g)
    n = lie.dim
    e = [unit_vector(n, k + 1) for k in range(n)]
    br = lambda a, b: lie_bracket(lie, a, b)  # noqa: E731
    for x, y, z in itertools.product(range(n), repeat=3):
        lhs = 2 * covariant(lc, x, y).dot(g).dot(e[z])
        rhs = (br(e[x], e[y]).dot(g).dot(e[z]) - br(e[y], e[z]).dot(g).dot(e[x])
               + br(e[z], e[x]).dot(g).dot(e[y]))
        assert lhs == rhs


def test_levi_civita_uniqueness_by_perturbation(hyper):
    lie, pkg = hyper
    lc = levi_civita(lie, pkg.g)
    for k, i, j in itertools.product(range(4), repeat=3):
        gamma = lc.gamma.copy()
        gamma[k, i, j] += 1
        other = Connection(gamma)
        broken = (not connection_contracts(lie, other, pkg.g)["nabla g = 0"]
                  or not is_zero_array(torsion(lie, other)))
        assert broken


@pytest.mark.parametrize("sign", ["+", "-"])
def test_bismut_contracts(fixture_name, sign):
    lie, pkg = loaded(fixture_name)
    j = pkg.Jplus if sign == "+" else pkg.Jminus
    conn = bismut(lie, pkg, sign)
    assert all(connection_contracts(lie, conn, pkg.g, j).values())


def test_bismut_plus_torsion_is_j_d_omega(fixture_name):
    lie, pkg = loaded(fixture_name)
    c = torsion_3form(lie, bismut(lie, pkg, "+"), pkg.g)
    assert isinstance(c, Form)
    assert c == jd_omega(lie, pkg)
    assert exterior_derivative(lie, c).is_zero() == skt_check(lie, pkg)


def test_bismut_plus_torsion_on_solv6(solv6):
    lie, pkg = solv6
    c = torsion_3form(lie, bismut(lie, pkg, "+"), pkg.g)
    assert c == HALF * Form.basis(6, 2, 5, 6)


def test_bismut_torsion_on_random_packages():
    for name in ("hyperelliptic", "solv6"):
        lie, _ = loaded(name)
        for pkg in random_packages(name)[:15]:
            conn = bismut(lie, pkg, "+")
            assert all(connection_contracts(lie, conn, pkg.g, pkg.Jplus).values())
            c = torsion_3form(lie, conn, pkg.g)
            assert c == jd_omega(lie, pkg)
            assert exterior_derivative(lie, c).is_zero() == skt_check(lie, pkg)
            assert all(connection_contracts(lie, bismut(lie, pkg, "-"), pkg.g, pkg.Jminus).values())


def test_bismut_minus_torsion_not_skew_when_jminus_not_integrable(hyper):
    lie, pkg = hyper
    c = torsion_3form(lie, bismut(lie, pkg, "-"), pkg.g)
    assert isinstance(c, NonSkewTorsion)
    x, y, z = c.triple
    assert c.values[0] != -c.values[1]
    assert f"e{x}" in str(c)


def test_bismut_unknown_sign(hyper):
    with pytest.raises(ValueError):
        bismut(*hyper, sign="0")


def test_chern_contracts(fixture_name):
    lie, pkg = loaded(fixture_name)
    d = chern(lie, pkg)
    assert all(connection_contracts(lie, d, pkg.g, pkg.Jplus).values())


def test_kaehler_connections_coincide(torus):
    lie, pkg = torus
    lc = levi_civita(lie, pkg.g)
    assert bismut(lie, pkg, "+") == lc == chern(lie, pkg) == bismut(lie, pkg, "-")


def test_connections_differ_from_levi_civita_when_d_omega_nonzero(solv6, hyper):
    for lie, pkg in (solv6, hyper):
        lc = levi_civita(lie, pkg.g)
        assert bismut(lie, pkg, "+") != lc
        assert chern(lie, pkg) != lc


def test_chern_torsion_brute_force(hyper):
    # g(D_X Y, Z) - g(LC_X Y, Z) = 1/2 d omega+ (J+ X, Y, Z)
    lie, pkg = hyper
    diff = tdot(chern(lie, pkg).gamma - levi_civita(lie, pkg.g).gamma, pkg.g, axes=([0], [0]))
    dw = exterior_derivative(lie, pkg.omega_plus).dense
    for x, y, z in itertools.product(range(4), repeat=3):
        jx = pkg.Jplus[:, x]
        assert diff[x, y, z] == HALF * np.tensordot(jx, dw, axes=([0], [0]))[y, z]
