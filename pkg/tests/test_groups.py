import itertools

import numpy as np
import pytest

from entsym.channels import ChannelMap, is_channel
from entsym.frobenius import (
    check_algebra,
    check_star_homomorphism,
    center_dimension,
    counit_value,
    multimatrix_algebra,
    multiply,
)
from entsym.groups import (
    Character,
    Cocycle2,
    FiniteAbelianGroup,
    Subgroup,
    character_action,
    check_cocycle,
    check_projective_rep,
    classicalization_iso,
    clock_shift_rep,
    coboundary,
    cohomologous,
    covariant_channel_matrix,
    dual_group,
    factor_basis,
    fourier_matrix,
    is_coboundary,
    is_covariant,
    is_grading_preserving,
    label_characters,
    restriction,
    trivial_cocycle,
    twisted_group_algebra,
    weyl_cocycle,
)
from entsym.tensors import residual


def test_dual_group_z2():
    Z2 = FiniteAbelianGroup((2,))
    chars = dual_group(Z2)
    vals = sorted(tuple(np.round(c.values().real).astype(int)) for c in chars)
    assert vals == [(1, -1), (1, 1)]


def test_dual_group_size():
    G = FiniteAbelianGroup((2, 3))
    assert len(dual_group(G)) == G.order == 6


def test_restriction_z4_to_z2():
    Z4 = FiniteAbelianGroup((4,))
    sub = Subgroup(Z4, ((2,),))
    assert sub.elements == ((0,), (2,))
    restrict, chars = restriction(Z4, sub)
    assert len(chars) == 2
    hits = {i: 0 for i in range(len(chars))}
    for chi in dual_group(Z4):
        t = restrict(chi)
        for i, s in enumerate(chars):
            if max(abs(a - b) for a, b in zip(t, s)) < 1e-9:
                hits[i] += 1
    assert all(v == 2 for v in hits.values())


def test_subgroup_membership_validation():
    Z4 = FiniteAbelianGroup((4,))
    with pytest.raises(ValueError):
        Subgroup(Z4, ((5,),))


def test_restriction_is_homomorphism():
    G = FiniteAbelianGroup((4, 2))
    sub = Subgroup(G, (((2, 0)), (0, 1)))
    restrict, _ = restriction(G, sub)
    chars = dual_group(G)
    for a in chars[:4]:
        for b in chars[:4]:
            ab = Character(G, tuple(x + y for x, y in zip(a.exponents, b.exponents)))
            lhs = np.array(restrict(ab))
            rhs = np.array(restrict(a)) * np.array(restrict(b))
            assert np.abs(lhs - rhs).max() < 1e-12


def test_trivial_cocycle_is_coboundary():
    G = FiniteAbelianGroup((2, 2))
    psi = trivial_cocycle(G)
    assert check_cocycle(psi).is_cocycle
    ok, w = is_coboundary(psi)
    assert ok and np.abs(w - 1.0).max() < 1e-12


def test_weyl_cocycle_identity_bruteforce():
    psi = weyl_cocycle(2)
    g = psi.group
    assert set(np.round(psi.table.real).astype(int).flatten()) <= {1, -1}
    for a, b, c in itertools.product(g.elements, repeat=3):
        lhs = psi(a, b) * psi(g.add(a, b), c)
        rhs = psi(b, c) * psi(a, g.add(b, c))
        assert abs(lhs - rhs) < 1e-12


def test_weyl_not_coboundary_exhaustive():
    psi = weyl_cocycle(2)
    g = psi.group
    ok, _ = is_coboundary(psi)
    assert not ok
    # brute-force oracle over all fourth-root-valued cochains
    roots = [1, 1j, -1, -1j]
    for vals in itertools.product(roots, repeat=4):
        db = coboundary(g, np.array(vals, dtype=complex))
        if np.abs(db.table - psi.table).max() < 1e-9:
            pytest.fail("weyl cocycle trivialised by a fourth-root cochain")


def test_coboundary_times_cocycle_cohomologous(rng):
    psi = weyl_cocycle(3)
    g = psi.group
    phi = np.exp(2j * np.pi * rng.random(g.order))
    phi[g.index[g.identity]] = 1.0
    shifted = psi.mul(coboundary(g, phi))
    ok, _ = cohomologous(shifted, psi)
    assert ok
    ok_reflexive, _ = cohomologous(psi, psi)
    assert ok_reflexive


def test_coboundary_of_irrational_phases_detected(rng):
    g = FiniteAbelianGroup((2, 4))
    phi = np.exp(2j * np.pi * rng.random(g.order))
    db = coboundary(g, phi)
    ok, w = is_coboundary(db)
    assert ok
    assert np.abs(coboundary(g, w).table - db.table).max() < 1e-9


def test_cocycle_validation():
    G = FiniteAbelianGroup((2,))
    bad = Cocycle2(G, np.array([[1.0, 2.0], [1.0, 1.0]]))
    with pytest.raises(ValueError):
        is_coboundary(bad)


@pytest.mark.parametrize("d", [2, 3])
def test_clock_shift_rep(d):
    rep = clock_shift_rep(d)
    g = rep.group
    psi = rep.cocycle
    for x in g.elements:
        for y in g.elements:
            lhs = rep(x) @ rep(y)
            rhs = psi(x, y) * rep(g.add(x, y))
            assert np.abs(lhs - rhs).max() < 1e-12
    assert np.abs(rep(g.identity) - np.eye(d)).max() == 0.0
    for x in g.elements:
        if x != g.identity:
            assert abs(np.trace(rep(x))) < 1e-12
    report = check_projective_rep(rep)
    assert report.passes and report.irreducible


def test_pauli_family():
    rep = clock_shift_rep(2)
    X = np.array([[0, 1], [1, 0]])
    Z = np.diag([1, -1])
    assert np.abs(rep((1, 0)) - X).max() < 1e-15
    assert np.abs(rep((0, 1)) - Z).max() < 1e-15
    assert np.abs(rep((1, 1)) - X @ Z).max() < 1e-15


@pytest.mark.parametrize(
    "orders,twist",
    [((2,), None), ((4,), None), ((2, 2), None), ((3, 3), None), ((2, 2), "weyl"), ((3, 3), "weyl")],
)
def test_twisted_group_algebra_axioms(orders, twist):
    L = FiniteAbelianGroup(orders)
    phi = weyl_cocycle(orders[0]).conj() if twist else None
    alg = twisted_group_algebra(L, phi)
    rep = check_algebra(alg)
    assert rep.is_frobenius and rep.is_special and rep.is_symmetric and rep.is_standard
    assert rep.special <= 1e-10
    assert abs(counit_value(alg, alg.unit) - L.order) < 1e-12
    if twist is None:
        assert rep.is_commutative


def test_twisted_algebra_of_weyl_is_full_matrix_algebra():
    alg = twisted_group_algebra(FiniteAbelianGroup((2, 2)), weyl_cocycle(2).conj())
    assert alg.dim == 4
    assert center_dimension(alg) == 1
    assert not check_algebra(alg).is_commutative


def test_untwisted_algebra_iso_to_commutative():
    alg = twisted_group_algebra(FiniteAbelianGroup((2,)), None)
    mm = multimatrix_algebra([1, 1])
    iso = factor_basis(alg).conj().T
    rep = check_star_homomorphism(iso, alg, mm)
    assert rep.passes and rep.unitary_star_iso


def test_factor_basis_z2_explicit():
    alg = twisted_group_algebra(FiniteAbelianGroup((2,)), None)
    mu = fourier_matrix(alg)
    ref = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.abs(np.abs(mu) - np.abs(ref)).max() < 1e-12
    assert np.abs(mu @ mu.conj().T - np.eye(2)).max() < 1e-12
    # e-bar and g-bar expansions: columns mix the graded basis evenly
    assert np.abs(mu[:, 0] - np.array([1, 1]) / np.sqrt(2)).max() < 1e-12


def test_factor_basis_idempotents_z3():
    L = FiniteAbelianGroup((3,))
    alg = twisted_group_algebra(L, None)
    C = factor_basis(alg)
    n = alg.dim
    # independent oracle: chi-bar products from the bar-basis multiplication
    # rule g-bar h-bar = (g+h)-bar, with chi-bar = (1/n) sum chi(g) g-bar
    chars = label_characters(alg)
    for a, ta in enumerate(chars):
        for b, tb in enumerate(chars):
            prod_bar = np.zeros(n, dtype=complex)
            for i, gi in enumerate(alg.grading):
                for j, gj in enumerate(alg.grading):
                    k = alg.grading.index(L.add(gi, gj))
                    prod_bar[k] += ta[i] * tb[j] / n**2
            got = multiply(alg, C[:, [a]], C[:, [b]])
            # prod_bar is in bar coordinates; bar = sqrt(n) * hat
            expected = np.sqrt(n) * prod_bar.reshape(-1, 1)
            assert residual(got - expected) < 1e-12
            if a == b:
                assert residual(got - C[:, [a]]) < 1e-12
            else:
                assert residual(got) < 1e-12
    assert residual(C.sum(axis=1, keepdims=True) - alg.unit) < 1e-12


def test_factor_basis_requires_untwisted():
    alg = twisted_group_algebra(FiniteAbelianGroup((2, 2)), weyl_cocycle(2).conj())
    with pytest.raises(ValueError):
        factor_basis(alg)


def test_untwisted_mult_is_entrywise_in_factor_basis():
    for orders in ((2, 2), (3,), (4,)):
        alg = twisted_group_algebra(FiniteAbelianGroup(orders), None)
        C = factor_basis(alg)
        n = alg.dim
        for a in range(n):
            prod = multiply(alg, C[:, [a]], C[:, [a]])
            assert residual(prod - C[:, [a]]) < 1e-10


def test_character_action_and_covariance():
    G = FiniteAbelianGroup((3,))
    alg = twisted_group_algebra(G, None)
    ident = np.eye(3, dtype=complex)
    assert is_covariant(ident, alg, alg)[0]
    # action matrices are diagonal unitaries implementing the characters
    for chi in dual_group(G):
        act = character_action(chi, alg)
        assert np.abs(act - np.diag([chi(g) for g in alg.grading])).max() == 0.0

    # translation by a fixed character permutes the factor basis covariantly
    C = factor_basis(alg)
    perm = np.zeros((3, 3))
    chars = label_characters(alg)
    shift = chars[1]
    for a, ta in enumerate(chars):
        prod = ta * shift
        for b, tb in enumerate(chars):
            if np.abs(prod - tb).max() < 1e-9:
                perm[b, a] = 1.0
    trans = C @ perm @ C.conj().T
    ok, res = is_covariant(trans, alg, alg)
    assert ok, res
    assert is_channel(ChannelMap(alg, alg, trans)).passes

    # swapping two factor states only is not covariant
    swap2 = np.eye(3)
    swap2[[0, 1]] = swap2[[1, 0]]
    noncov = C @ swap2 @ C.conj().T
    ok, res = is_covariant(noncov, alg, alg)
    assert not ok and res > 0.1


def test_grading_preserving_iff_covariant(rng):
    G = FiniteAbelianGroup((2, 2))
    alg = twisted_group_algebra(G, None)
    agree = 0
    for k in range(100):
        if k % 2 == 0:
            m = np.diag(rng.normal(size=4) + 1j * rng.normal(size=4))
        else:
            m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        gp, _ = is_grading_preserving(m, alg, alg)
        cov, _ = is_covariant(m, alg, alg)
        assert gp == cov
        agree += 1
    assert agree == 100


def test_character_homomorphism_property():
    G = FiniteAbelianGroup((2, 3))
    for chi in dual_group(G):
        for g in G.elements:
            for h in G.elements:
                assert abs(chi(G.add(g, h)) - chi(g) * chi(h)) < 1e-12


def test_classicalization_iso_is_star_iso():
    G = FiniteAbelianGroup((2, 2))
    rngl = np.random.default_rng(23)
    phi = np.exp(2j * np.pi * rngl.random(G.order))
    phi[G.index[G.identity]] = 1.0
    psi = coboundary(G, phi)
    plain = twisted_group_algebra(G, None)
    twisted = plain.twist(psi)
    ok, cochain = is_coboundary(twisted.cocycle)
    assert ok
    iso = classicalization_iso(twisted, cochain)
    rep = check_star_homomorphism(iso, twisted, plain)
    assert rep.passes and rep.unitary_star_iso


def test_covariant_channel_matrix_uniform_is_unit_projection():
    G = FiniteAbelianGroup((2, 2))
    alg = twisted_group_algebra(G, None)
    F = covariant_channel_matrix(alg, np.full(4, 0.25))
    expected = np.diag([1.0, 0, 0, 0])
    assert residual(F - expected) < 1e-12
    assert residual(F @ alg.unit - alg.unit) < 1e-12  # unital
