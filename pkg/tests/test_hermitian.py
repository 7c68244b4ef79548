import itertools
from fractions import Fraction

import numpy as np
import pytest

from tamedgk.algebra import Form, as_array, eye, zeros
from tamedgk.hermitian import (AlmostComplexStructure, DegenerateFormError, NotClosedError,
                               NotTamedError, build_generalized_pair, generalized_pair_checks,
                               generalized_symplectic, induce_tamed_package, integrable, jd_omega,
                               nijenhuis, nijenhuis_dense, prop22_residual, remark_closed_form,
                               skt_check, tames)
from tamedgk.lie import closed_forms_basis, exterior_derivative, lie_bracket, unit_vector

from conftest import loaded, parsed, random_packages

F = Fraction
HALF = F(1, 2)


def images(j):
    """Column k of J as a dict {basis index: coefficient} (1-based)."""
    return [{i + 1: c for i, c in enumerate(j[:, k]) if c} for k in range(j.shape[0])]


def standard_j(n):
    j = zeros(n, n)
    for k in range(0, n, 2):
        j[k + 1, k] = -1
        j[k, k + 1] = 1
    return j


def test_almost_complex_structure_rejects_non_square_roots():
    with pytest.raises(ValueError):
        AlmostComplexStructure(eye(2))
    AlmostComplexStructure(standard_j(4))


def test_nijenhuis_examples(hyper):
    lie, pkg = hyper
    assert integrable(lie, pkg.Jplus)
    assert not integrable(lie, pkg.Jminus)
    torus = parsed("torus4").algebra
    for j in (standard_j(4), as_array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])):
        assert nijenhuis(torus, j).is_zero()


def test_nijenhuis_brute_force_and_symmetries(fixture_name):
    lie, pkg = loaded(fixture_name)
    n = lie.dim
    for j in (pkg.Jplus, pkg.Jminus):
        nd = nijenhuis_dense(lie, j)
        br = lambda a, b: lie_bracket(lie, a, b)  # noqa: E731
        for a, b in itertools.product(range(n), repeat=2):
            x, y = unit_vector(n, a + 1), unit_vector(n, b + 1)
            jx, jy = j.dot(x), j.dot(y)
            expected = br(x, y) - br(jx, jy) + j.dot(br(jx, y)) + j.dot(br(x, jy))
            assert np.array_equal(nd[:, a, b], expected)
            assert np.array_equal(nd[:, a, b], -nd[:, b, a])
            # N(JX, Y) = -J N(X, Y)
            lhs = np.tensordot(nd, jx, axes=([1], [0]))[:, b]
            assert np.array_equal(lhs, -j.dot(nd[:, a, b]))


def test_taming_examples():
    for name in ("hyperelliptic", "solv6"):
        sp = parsed(name)
        assert tames(sp.forms["Omega"], sp.endomorphisms["J"])
    omega = Form(4, 2, {(1, 2): 1, (3, 4): 1})
    assert tames(omega, standard_j(4))
    assert not tames(omega, -standard_j(4))


def test_taming_is_open_on_examples(fixture_name):
    sp = parsed(fixture_name)
    omega, j = sp.forms["Omega"], sp.endomorphisms["J"]
    for eta in closed_forms_basis(sp.algebra, 2):
        assert tames(omega + F(1, 1000) * eta, j)
        assert tames(omega - F(1, 1000) * eta, j)


def test_hyperelliptic_jminus_table(hyper):
    _, pkg = hyper
    assert images(pkg.Jminus) == [{2: -1, 3: 1}, {4: -1}, {1: -1, 4: -1}, {2: 1}]


def test_solv6_jminus_table(solv6):
    _, pkg = solv6
    assert images(pkg.Jminus) == [{6: -1}, {1: 1, 5: -1}, {4: -1}, {3: 1}, {2: 1, 6: -1}, {1: 1}]


def test_solv6_package_values(solv6):
    _, pkg = solv6
    g = eye(6)
    g[0, 4] = g[4, 0] = g[1, 5] = g[5, 1] = HALF
    assert np.array_equal(pkg.g, g)
    assert pkg.omega_plus == Form(6, 2, {(1, 2): 1, (3, 4): 1, (5, 6): 1, (1, 6): HALF, (2, 5): -HALF})
    assert pkg.omega_minus == Form(6, 2, {(3, 4): 1, (1, 2): HALF, (5, 6): HALF, (2, 5): HALF, (1, 6): 1})
    assert pkg.b == Form(6, 2, {(1, 5): HALF, (2, 6): -HALF})


def test_hyperelliptic_package_values(hyper):
    _, pkg = hyper
    g = eye(4)
    g[0, 3] = g[3, 0] = -HALF
    g[1, 2] = g[2, 1] = HALF
    assert np.array_equal(pkg.g, g)
    assert pkg.b == Form(4, 2, {(1, 4): HALF, (2, 3): HALF})


def test_kaehler_package_is_trivial(torus):
    _, pkg = torus
    assert np.array_equal(pkg.Jminus, pkg.Jplus)
    assert pkg.b.is_zero()
    assert np.array_equal(pkg.g, eye(4))


def test_package_invariants_hold(fixture_name):
    _, pkg = loaded(fixture_name)
    assert all(pkg.invariants().values()), pkg.invariants()


def test_package_invariants_on_random_packages():
    for name in ("hyperelliptic", "solv6"):
        pkgs = random_packages(name)
        assert len(pkgs) == 50
        for pkg in pkgs:
            bad = [k for k, ok in pkg.invariants().items() if not ok]
            assert not bad, (name, str(pkg.Omega), bad)


def test_induce_errors():
    hyper = parsed("hyperelliptic")
    lie, j = hyper.algebra, hyper.endomorphisms["J"]
    with pytest.raises(NotClosedError):
        induce_tamed_package(lie, Form(4, 2, {(1, 3): 1, (2, 4): 1}), j)
    torus = parsed("torus4").algebra
    with pytest.raises(DegenerateFormError):
        induce_tamed_package(torus, Form.basis(4, 1, 2), standard_j(4))
    with pytest.raises(NotTamedError):
        induce_tamed_package(torus, Form(4, 2, {(1, 2): 1, (3, 4): 1}), -standard_j(4))
    with pytest.raises(ValueError):
        induce_tamed_package(torus, Form(4, 2, {(1, 2): 1, (3, 4): 1}), eye(4))


def test_jd_omega_and_skt(solv6, hyper, torus):
    lie, pkg = solv6
    assert jd_omega(lie, pkg) == HALF * Form.basis(6, 2, 5, 6)
    assert exterior_derivative(lie, jd_omega(lie, pkg)).is_zero()
    assert skt_check(lie, pkg)
    assert skt_check(*torus) and jd_omega(*torus).is_zero()
    # hyperelliptic: evaluated directly
    lie, pkg = hyper
    c = jd_omega(lie, pkg)
    assert c == -HALF * Form.basis(4, 1, 3, 4)
    assert skt_check(lie, pkg) == exterior_derivative(lie, c).is_zero()


def test_skt_check_matches_closed_torsion_on_random_packages():
    for name in ("hyperelliptic", "solv6"):
        lie, _ = loaded(name)
        for pkg in random_packages(name):
            assert skt_check(lie, pkg) == exterior_derivative(lie, jd_omega(lie, pkg)).is_zero()


def test_prop22_identity_with_flipped_sign(fixture_name):
    lie, pkg = loaded(fixture_name)
    plus, minus = prop22_residual(lie, pkg, "sign_flipped")
    assert plus.is_zero() and minus.is_zero()


def test_prop22_identity_on_random_packages():
    for name in ("hyperelliptic", "solv6"):
        lie, _ = loaded(name)
        for pkg in random_packages(name)[:10]:
            plus, minus = prop22_residual(lie, pkg, "sign_flipped")
            assert plus.is_zero() and minus.is_zero()


def test_prop22_unknown_variant(hyper):
    with pytest.raises(ValueError):
        prop22_residual(*hyper, variant="other")


def test_generalized_pair_kaehler(torus):
    _, pkg = torus
    j1, j2 = build_generalized_pair(pkg)
    j = pkg.Jplus
    assert np.array_equal(j2.tt, j) and np.array_equal(j2.cc, -j.T)
    assert not j2.ct.any() and not j2.tc.any()
    assert j1 == generalized_symplectic(pkg.Omega)


def test_generalized_pair_invariants(fixture_name):
    _, pkg = loaded(fixture_name)
    checks = generalized_pair_checks(pkg)
    for key in ("J1 = J_Omega", "J1^2 = -1", "J2^2 = -1", "J1 orthogonal", "J2 orthogonal",
                "J1 J2 = J2 J1", "G = -J1 J2 positive definite",
                "J2 block (1,1) = closed form", "J2 block (2,2) = closed form"):
        assert checks[key], key


def test_closed_form_off_diagonal_blocks_differ_by_sign(fixture_name):
    # the computed J2 agrees with the closed form up to the sign of the mixed blocks
    _, pkg = loaded(fixture_name)
    _, j2 = build_generalized_pair(pkg)
    rem = remark_closed_form(pkg)
    assert np.array_equal(j2.ct, -rem.ct) and np.array_equal(j2.tc, -rem.tc)


def test_generalized_pair_on_random_packages():
    for pkg in random_packages("hyperelliptic")[:20]:
        checks = generalized_pair_checks(pkg)
        assert all(v for k, v in checks.items() if "closed form" not in k)
