import pytest
from hypothesis import given, settings, strategies as st

from monodromy import arith
from monodromy.arith import Case, build_algebra, splitting_data

ODD_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]

SMALL_PAIRS = [
    (p, l)
    for p in ODD_PRIMES
    for l in ODD_PRIMES
    if p != l and splitting_data(p, l).q ** (2 if splitting_data(p, l).case is Case.UNITARY else 1) <= arith.MAX_TABLE_ORDER
]


@pytest.mark.parametrize("p,l", [(5, 3), (11, 5), (3, 7), (7, 5), (3, 11)])
def test_splitting_matches_cyclotomic_oracle(p, l):
    sd = splitting_data(p, l)
    degs = arith.cyclotomic_factor_degrees(p, l)
    assert all(d == sd.f for d in degs)
    oracle = Case.UNITARY if degs[0] % 2 == 0 else Case.SPLIT
    assert sd.case is oracle


def test_paper_case_discrepancy_exists():
    # the parity phrase disagrees with the order criterion, e.g. l=13, p=-1
    sd = splitting_data(103, 13)  # 103 = 8*13 - 1
    assert sd.f == 2 and sd.case is Case.UNITARY
    assert sd.paper_case is Case.SPLIT


def test_splitting_examples():
    assert splitting_data(5, 3).q == 5
    assert splitting_data(5, 3).case is Case.UNITARY
    assert splitting_data(11, 5).q == 11
    assert splitting_data(11, 5).case is Case.SPLIT
    assert splitting_data(3, 7).q == 27
    assert splitting_data(3, 7).case is Case.UNITARY


def test_field_basic():
    F = arith.Fq(5, (1, 1, 1))  # F_25 = F_5[x]/(x^2+x+1)
    assert F.order == 25
    for a in range(25):
        if a:
            assert F.mul2(a, F.inv(a)) == 1
        assert F.add2(a, int(F.neg[a])) == 0
    # frobenius is the q-power map and an automorphism
    for a in range(25):
        assert F.frobenius(a) == F.pow(a, 5)


@pytest.mark.parametrize("p,l", [(5, 3), (11, 5), (3, 7), (13, 3), (3, 5)])
def test_algebra_invariants(p, l):
    alg = build_algebra(p, l)
    # zeta has exact order l
    powers = {alg.power(alg.zeta, e) for e in range(l)}
    assert len(powers) == l and alg.power(alg.zeta, l) == alg.one
    mu = alg.roots_of_unity()
    assert len(mu) == l
    for a in mu:
        for b in mu:
            assert alg.mul(a, b) in mu
    # involution: order two, fixes exactly the fixed subfield / diagonal
    fixed = [x for x in list(alg.elements()) if alg.involve(x) == x]
    assert len(fixed) == alg.p ** alg.fixed_dim
    for x in alg.elements():
        assert alg.involve(alg.involve(x)) == x


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_norm_multiplicative(data):
    p, l = data.draw(st.sampled_from([(5, 3), (11, 5), (3, 7)]))
    alg = build_algebra(p, l)
    x = data.draw(st.sampled_from(list(alg.elements())))
    y = data.draw(st.sampled_from(list(alg.elements())))
    assert alg.norm(alg.mul(x, y)) == alg.mul(alg.norm(x), alg.norm(y))
    assert alg.is_fixed(alg.norm(x))


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_units_and_zero_divisors(data):
    p, l = data.draw(st.sampled_from([(5, 3), (11, 5)]))
    alg = build_algebra(p, l)
    x = data.draw(st.sampled_from(list(alg.elements())))
    if alg.is_unit(x):
        assert alg.mul(x, alg.invert(x)) == alg.one
    else:
        with pytest.raises((arith.ZeroDivisorError, ZeroDivisionError)):
            alg.invert(x)


def test_fp_vector_roundtrip():
    for p, l in [(5, 3), (11, 5)]:
        alg = build_algebra(p, l)
        for x in alg.elements():
            assert alg.from_fp_vector(alg.to_fp_vector(x)) == x


def test_field_too_large():
    with pytest.raises(arith.FieldTooLargeError):
        build_algebra(5, 7)  # F_5 has order 6 mod 7 -> F_{5^6} too big


def test_zeta_components_are_swapped_by_involution():
    # split case: the involution exchanges the two primes, so the second
    # component of zeta must carry the inverse root of unity
    alg = build_algebra(11, 5)
    assert alg.ncomp == 2
    assert alg.involve(alg.zeta) == alg.invert(alg.zeta)
