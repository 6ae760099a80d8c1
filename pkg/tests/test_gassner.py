import random

import pytest
from hypothesis import given, settings, strategies as st

from monodromy import gassner as G, linalg
from monodromy.braid import BraidWord, pure_generator

PAIRS = [(5, 3), (11, 5), (3, 7)]


def ctx_strategy(pairs=PAIRS, min_n=2, max_n=5):
    @st.composite
    def _c(draw):
        p, l = draw(st.sampled_from(pairs))
        n = draw(st.integers(min_n, max_n))
        kvec = tuple(
            draw(st.integers(1, l - 1)) for _ in range(n + 1)
        )
        return G.context(p, l, kvec)

    return _c()


def random_pure_word(ctx, rng, length=4):
    strands = ctx.n + 1
    w = BraidWord(strands, ())
    for _ in range(length):
        i = rng.randrange(strands)
        j = rng.randrange(strands)
        if i == j:
            continue
        g = pure_generator(min(i, j), max(i, j), ctx.n)
        w = w.concat(g if rng.random() < 0.5 else g.invert())
    return w


# -- well-definedness -------------------------------------------------------


@given(ctx_strategy())
@settings(max_examples=40, deadline=None)
def test_braid_relations(ctx):
    strands = ctx.n + 1
    for i in range(ctx.n - 1):
        a = BraidWord.parse(strands, f"{i} {i + 1} {i}")
        b = BraidWord.parse(strands, f"{i + 1} {i} {i + 1}")
        assert G.evaluate_word(a, ctx) == G.evaluate_word(b, ctx)
    for i in range(ctx.n):
        for j in range(i + 2, ctx.n):
            a = BraidWord.parse(strands, f"{i} {j}")
            b = BraidWord.parse(strands, f"{j} {i}")
            assert G.evaluate_word(a, ctx) == G.evaluate_word(b, ctx)


@given(ctx_strategy())
@settings(max_examples=40, deadline=None)
def test_generator_square_matches_displayed_formula(ctx):
    for i in range(ctx.n):
        assert G.generator_square(i, ctx).comps == G.square_formula_matrix(i, ctx)


@given(ctx_strategy())
@settings(max_examples=30, deadline=None)
def test_inverse_crossing(ctx):
    strands = ctx.n + 1
    for i in range(ctx.n):
        w = BraidWord.parse(strands, f"{i} -{i}")
        img = G.evaluate_word(w, ctx)
        assert img.comps == G.amat_identity(ctx.algebra, ctx.n)
        assert img.perm == tuple(range(ctx.n + 1))


def test_displayed_square_row_content():
    # the square of a crossing has the stated three-entry row
    ctx = G.context(5, 3, (1, 2, 1, 2))
    alg = ctx.algebra
    i = 1
    sq = G.generator_square(i, ctx).comps
    t_i, t_j = ctx.colors[i], ctx.colors[i + 1]
    assert G.amat_entry(sq, i, i - 1) == alg.mul(
        t_i, alg.sub(alg.one, t_j)
    )
    assert G.amat_entry(sq, i, i) == alg.mul(t_i, t_j)
    assert G.amat_entry(sq, i, i + 1) == alg.sub(alg.one, t_i)


# -- squares are transvection-like -----------------------------------------


@given(ctx_strategy())
@settings(max_examples=30, deadline=None)
def test_square_minus_one_has_rank_one(ctx):
    F = ctx.algebra.field
    for i in range(ctx.n):
        sq = G.generator_square(i, ctx).comps
        for comp in sq:
            delta = linalg.mat_sub(F, comp, linalg.identity(ctx.n))
            assert linalg.rank(F, delta) <= 1


# -- the invariant form ----------------------------------------------------


@given(ctx_strategy(max_n=4))
@settings(max_examples=25, deadline=None)
def test_form_exists_and_detects_degeneracy(ctx):
    form = G.invariant_form(ctx)
    degenerate = sum(ctx.kvec) % ctx.algebra.l == 0
    assert form.degenerate == degenerate
    if degenerate:
        assert form.rank == ctx.n - 1
        assert len(form.kernel) == 1
        assert G.proportional(
            ctx.algebra, form.kernel[0], G.kernel_closed_form(ctx)
        )
    else:
        assert form.rank == ctx.n


@given(ctx_strategy(max_n=4), st.integers(0, 2**32))
@settings(max_examples=20, deadline=None)
def test_form_is_invariant_under_random_pure_words(ctx, seed):
    form = G.invariant_form(ctx)
    alg = ctx.algebra
    rng = random.Random(seed)
    w = random_pure_word(ctx, rng)
    M = G.evaluate_word(w, ctx).comps
    lhs = G.amat_mul(alg, G.amat_mul(alg, G.amat_involve_transpose(alg, M), form.gram), M)
    assert lhs == form.gram


def test_kernel_is_invariant_line():
    ctx = G.context(5, 3, (1, 1, 2, 2))
    inv = G.invariant_vectors(ctx)
    assert inv.dim == 1
    assert G.proportional(ctx.algebra, inv.basis[0], G.kernel_closed_form(ctx))


def test_no_invariant_vectors_when_nondegenerate():
    ctx = G.context(5, 3, (1, 1, 1, 1))
    assert G.invariant_vectors(ctx).dim == 0


# -- determinants ----------------------------------------------------------


@given(ctx_strategy())
@settings(max_examples=30, deadline=None)
def test_generator_square_determinant(ctx):
    alg = ctx.algebra
    for i in range(ctx.n):
        sq = G.generator_square(i, ctx).comps
        d = G.amat_det(alg, sq)
        assert d == alg.mul(ctx.colors[i], ctx.colors[i + 1])


@given(ctx_strategy(max_n=4))
@settings(max_examples=25, deadline=None)
def test_determinant_subgroup_is_mu_l_or_trivial(ctx):
    alg = ctx.algebra
    sub = G.determinant_subgroup(ctx)
    some_nontrivial = any(
        alg.mul(ctx.colors[i], ctx.colors[i + 1]) != alg.one
        for i in range(ctx.n)
    )
    if some_nontrivial:
        assert sorted(sub) == sorted(alg.roots_of_unity())
    else:
        assert sub == [alg.one]


# -- spinning --------------------------------------------------------------


def test_spin_full_space_nondegenerate():
    ctx = G.context(11, 5, (1, 1, 3, 2))
    alg = ctx.algebra
    e0 = tuple(alg.one if i == 0 else alg.zero for i in range(ctx.n))
    assert G.spin_span(ctx, e0) == tuple([ctx.n] * alg.ncomp)


def test_spin_kernel_is_line():
    ctx = G.context(5, 3, (1, 1, 2, 2))
    form = G.invariant_form(ctx)
    assert G.spin_span(ctx, form.kernel[0]) == tuple([1] * ctx.algebra.ncomp)


def test_spin_rejects_zero():
    ctx = G.context(5, 3, (1, 1, 1))
    z = tuple(ctx.algebra.zero for _ in range(ctx.n))
    with pytest.raises(ValueError):
        G.spin_span(ctx, z)


# -- the commutator construction -------------------------------------------


def test_prop21_small_case():
    ctx = G.context(5, 3, (1, 1, 2, 2))
    rep = G.prop21_commutator(ctx)
    assert rep.transvection is not None
    assert rep.direction_spans_kernel
    assert rep.shifted_matches
    assert rep.alternative_reading_trivial


def test_prop21_needs_product_one():
    ctx = G.context(5, 3, (1, 1, 1, 1))
    with pytest.raises(ValueError):
        G.prop21_commutator(ctx)
