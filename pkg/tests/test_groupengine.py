import random

import numpy as np
import pytest

from monodromy import arith, gassner, groupengine as E, unitary
from monodromy.arith import Fq


def sl2_group(p: int) -> E.MatrixGroup:
    F = Fq(p)
    gens = (
        np.array([[1, 1], [0, 1]], dtype=np.int16),
        np.array([[1, 0], [1, 1]], dtype=np.int16),
    )
    return E.MatrixGroup(field=F, dim=2, gens=gens)


def test_bsgs_matches_closure_sl2():
    for p, order in [(5, 120), (7, 336)]:
        grp = sl2_group(p)
        assert E.bsgs_order(grp, seed=1) == order
        res = E.enumerate_closure(grp, cap=10**4)
        assert res.size == order


def test_closure_overflow_marker():
    res = E.enumerate_closure(sl2_group(7), cap=100)
    assert res.overflow and res.size is None


def test_bsgs_matches_closure_monodromy_image():
    ctx = gassner.context(5, 3, (1, 1, 1, 1))
    form = gassner.invariant_form(ctx)
    grp = E.image_group(ctx, form)
    order = E.bsgs_order(grp, seed=0)
    assert order == 1134000
    assert E.enumerate_closure(grp, cap=2 * 10**6).size == order


def test_order_invariant_under_generator_changes():
    grp = sl2_group(5)
    base = E.bsgs_order(grp, seed=0)
    ops = E.Ops(grp.field, grp.dim)
    rng = random.Random(3)
    gens = [np.array(g, dtype=np.int16) for g in grp.gens]
    # shuffle, invert, and conjugate the generating set; the group is the same
    shuffled = list(gens)
    rng.shuffle(shuffled)
    shuffled[0] = ops.inv(shuffled[0])
    c = gens[1]
    ci = ops.inv(c)
    shuffled = [ops.mm(ops.mm(ci, g), c) for g in shuffled]
    grp2 = E.MatrixGroup(field=grp.field, dim=grp.dim, gens=tuple(shuffled))
    for seed in (0, 1, 17):
        assert E.bsgs_order(grp2, seed=seed) == base


def test_membership_and_sifting():
    grp = sl2_group(5)
    chain = E.StabilizerChain(grp, seed=2)
    ops = E.Ops(grp.field, grp.dim)
    rng = random.Random(9)
    gens = [np.array(g, dtype=np.int16) for g in grp.gens]
    w = np.eye(2, dtype=np.int16)
    for _ in range(20):
        w = ops.mm(w, rng.choice(gens))
    assert chain.contains(w)
    # an element with determinant != 1 is never in SL_2
    bad = np.array([[2, 0], [0, 1]], dtype=np.int16)
    assert not chain.contains(bad)


def test_dual_determination_asserted_in_split_case():
    ctx = gassner.context(11, 5, (1, 1, 3, 2))
    form = gassner.invariant_form(ctx)
    mats = [
        gassner.evaluate_word(w, ctx).comps
        for w in E.monodromy_generator_words(ctx.n)
    ]
    E.assert_dual_determination(ctx, form, mats)  # must not raise


def test_image_group_split_degenerate_uses_pairs():
    ctx = gassner.context(11, 5, (1, 1, 3))
    form = gassner.invariant_form(ctx)
    assert form.degenerate
    grp = E.image_group(ctx, form)
    assert grp.dim == 2 * ctx.n


def test_capacity_guard():
    F = Fq(5)
    grp = E.MatrixGroup(field=F, dim=12, gens=(np.eye(12, dtype=np.int16),))
    with pytest.raises(E.EngineCapacityError):
        E.StabilizerChain(grp, seed=0)


def test_radical_containment_degenerate_cases():
    for p, l, kvec in [(5, 3, (1, 1, 2, 2)), (11, 5, (1, 1, 3))]:
        ctx = gassner.context(p, l, kvec)
        form = gassner.invariant_form(ctx)
        grp = E.image_group(ctx, form)
        chain = E.StabilizerChain(grp, seed=4)
        rep = E.radical_containment(ctx, form, chain, limit=20000)
        assert rep.contained == rep.total
        assert rep.full_radical
