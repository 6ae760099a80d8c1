import random

import pytest
from hypothesis import given, settings, strategies as st

from monodromy import arith, gassner, unitary
from monodromy.arith import Case, build_algebra, splitting_data


def test_classical_orders_small():
    assert unitary.classical_group_order("SL", 2, 5) == 120
    assert unitary.classical_group_order("SL", 2, 7) == 336
    assert unitary.classical_group_order("SU", 3, 5) == 378000
    assert unitary.classical_group_order("SU", 4, 5) == 29484000000
    assert unitary.classical_group_order("SL", 3, 11) == 212427600


def test_expected_image_examples():
    assert unitary.expected_image(splitting_data(5, 3), (1, 1, 1, 1)).order == 1134000
    assert (
        unitary.expected_image(splitting_data(5, 3), (1, 1, 1, 1, 1)).order
        == 88452000000
    )
    assert (
        unitary.expected_image(splitting_data(11, 5), (1, 1, 3, 2)).order
        == 1062138000
    )


def test_expected_image_rejects_degenerate():
    with pytest.raises(ValueError):
        unitary.expected_image(splitting_data(5, 3), (1, 1, 2, 2))


def test_hypothesis_certificate_when_present():
    exp = unitary.expected_image(splitting_data(5, 3), (1, 1, 1, 1))
    assert exp.hypothesis_certificate == (0, 1, 2)


# -- norm equation ----------------------------------------------------------


@pytest.mark.parametrize("p,l", [(5, 3), (3, 7)])
def test_norm_equation_all_imaginary(p, l):
    alg = build_algebra(p, l)
    for xi in unitary.imaginary_elements(alg):
        eta = unitary.solve_norm_equation(alg, xi)
        half = alg.invert(alg.scalar(2))
        lhs = alg.add(
            alg.norm(alg.mul(half, xi)), alg.norm(eta)
        )
        assert lhs == alg.one


@pytest.mark.parametrize("p,l", [(5, 3), (3, 7)])
def test_realize_imaginary_scalar(p, l):
    alg = build_algebra(p, l)
    for xi in unitary.imaginary_elements(alg):
        alpha, beta = unitary.realize_imaginary_scalar(alg, xi)
        # commutator entry sum(conj(a) b - a conj(b)) equals xi
        acc = alg.zero
        for a, b in zip(alpha, beta):
            acc = alg.add(acc, alg.sub(
                alg.mul(alg.involve(a), b), alg.mul(a, alg.involve(b))
            ))
        assert acc == xi
        # and the alpha tail is unit-length, as the construction demands
        total = alg.zero
        for a in alpha:
            total = alg.add(total, alg.norm(a))
        assert total == alg.one


# -- extension matrix identities -------------------------------------------


@pytest.mark.parametrize("p,l,m", [(5, 3, 3), (5, 3, 5), (3, 7, 4)])
def test_extension_identities(p, l, m):
    alg = build_algebra(p, l)
    rep = unitary.verify_extension_identities(alg, m, 150, seed=11)
    assert rep.commutator_identity_holds == rep.trials
    assert rep.commutator_entry_always_imaginary


def test_extension_matrices_are_isometries():
    alg = build_algebra(5, 3)
    rng = random.Random(5)
    for _ in range(50):
        T = unitary.random_extension_matrix(alg, 4, rng)
        assert unitary.unitarity_defect(alg, T) == alg.zero


def test_extension_rejects_split():
    alg = build_algebra(11, 5)
    with pytest.raises(ValueError):
        unitary.verify_extension_identities(alg, 3, 1)


# -- subsequence procedure --------------------------------------------------


@given(st.data())
@settings(max_examples=300, deadline=None)
def test_subsequence_certificates_are_valid(data):
    l = data.draw(st.sampled_from([3, 5, 7]))
    n = data.draw(st.integers(2, 12))
    kvec = tuple(
        data.draw(st.integers(1, l - 1)) for _ in range(n + 1)
    )
    cert = unitary.find_degenerate_subsequence(kvec, l)
    if cert is not None:
        assert len(cert) >= 3
        assert sum(kvec[i] for i in cert) % l == 0
        assert all(kvec[i] != 0 for i in cert)
        assert len(set(cert)) == len(cert)


@pytest.mark.parametrize("l", [3, 5, 7, 11])
def test_extremal_family_has_no_certificate(l):
    kvec = tuple([1] * (l - 1) + [l - 1])
    assert unitary.find_degenerate_subsequence(kvec, l) is None


def test_all_ones_certificate():
    assert unitary.find_degenerate_subsequence((1, 1, 1, 1), 3) == (0, 1, 2)


def test_subsequence_rejects_zero_entries():
    with pytest.raises(ValueError):
        unitary.find_degenerate_subsequence((1, 3, 2), 3)


# -- the unipotent radical --------------------------------------------------


def test_radical_elements_are_transvections_along_kernel():
    ctx = gassner.context(5, 3, (1, 1, 2, 2))
    form = gassner.invariant_form(ctx)
    rad = unitary.radical_transvections(form)
    alg = ctx.algebra
    seen = 0
    for M in rad.enumerate(limit=100):
        assert rad.contains(M)
        if M != gassner.amat_identity(alg, ctx.n):
            T = gassner.is_transvection(M, alg)
            assert T is not None
            assert gassner.proportional(alg, T.direction, form.kernel[0])
        seen += 1
    assert seen == 100


def test_radical_needs_degenerate_form():
    ctx = gassner.context(5, 3, (1, 1, 1, 1))
    form = gassner.invariant_form(ctx)
    with pytest.raises(unitary.NondegenerateFormError):
        unitary.radical_transvections(form)
