from hypothesis import given, settings, strategies as st

from monodromy.braid import BraidWord, StrandPermutation, half_twist, pure_generator


def words(min_strands=2, max_strands=7, max_len=12):
    @st.composite
    def _w(draw):
        n = draw(st.integers(min_strands, max_strands))
        k = draw(st.integers(0, max_len))
        letters = tuple(
            (draw(st.integers(0, n - 2)), draw(st.sampled_from((1, -1))))
            for _ in range(k)
        )
        return BraidWord(n, letters)

    return _w()


@given(words())
@settings(max_examples=200, deadline=None)
def test_text_roundtrip(w):
    assert BraidWord.parse(w.strand_count, w.to_text()) == w


@given(words())
@settings(max_examples=200, deadline=None)
def test_free_reduce_is_reduced(w):
    r = w.free_reduce()
    for (i, s), (j, t) in zip(r.letters, r.letters[1:]):
        assert not (i == j and s == -t)
    # reduction never changes the induced permutation
    assert r.underlying_permutation() == w.underlying_permutation()


@given(words(), words())
@settings(max_examples=200, deadline=None)
def test_permutation_homomorphism(a, b):
    if a.strand_count != b.strand_count:
        return
    lhs = a.concat(b).underlying_permutation()
    rhs = a.underlying_permutation().then(b.underlying_permutation())
    assert lhs == rhs


@given(words())
@settings(max_examples=200, deadline=None)
def test_inverse_cancels(w):
    assert w.concat(w.invert()).free_reduce().letters == ()
    assert w.invert().underlying_permutation().then(
        w.underlying_permutation()
    ) == StrandPermutation.identity(w.strand_count)


def test_pure_generators_are_pure():
    for n in range(2, 7):
        strands = n + 1
        for i in range(strands):
            for j in range(i + 1, strands):
                w = pure_generator(i, j, n)
                assert w.strand_count == strands
                assert w.is_pure()


def test_pure_generator_basic_shape():
    # A_{i,i+1} is just sigma_i^2
    w = pure_generator(0, 1, 3)
    assert w.free_reduce().letters == ((0, 1), (0, 1))


def test_half_twist_permutation_reverses_range():
    # generator indices first..last touch strands first..last+1
    for strands in range(3, 8):
        w = half_twist(1, strands - 2, strands)
        perm = w.underlying_permutation()
        lo, hi = 1, strands - 1
        for s in range(strands):
            if lo <= s <= hi:
                assert perm.image[s] == lo + hi - s
            else:
                assert perm.image[s] == s


def test_half_twist_square_is_pure():
    w = half_twist(0, 4, 6)
    assert not w.is_pure()
    assert w.concat(w).is_pure()


@given(words())
@settings(max_examples=100, deadline=None)
def test_power_matches_repeated_concat(w):
    acc = BraidWord(w.strand_count, ())
    for e in range(4):
        assert w.power(e) == acc
        acc = acc.concat(w)
