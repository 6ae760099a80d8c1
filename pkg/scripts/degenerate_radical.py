#!/usr/bin/env python3
"""Empirics for the degenerate (product-one) specializations: does the image
contain the full unipotent radical along the kernel line, and does the
split-degenerate "graph of an isomorphism" pattern ever show up?

Usage: python scripts/degenerate_radical.py
"""

import itertools

from monodromy import arith, gassner, groupengine


def cases(per_cell=8):
    for p, l in [(5, 3), (7, 3), (11, 5), (3, 5)]:
        try:
            arith.build_algebra(p, l)
        except arith.FieldTooLargeError:
            continue
        for n in (2, 3):
            grid = (
                kvec
                for kvec in itertools.product(range(1, l), repeat=n + 1)
                if sum(kvec) % l == 0
            )
            for kvec in itertools.islice(grid, per_cell):
                yield p, l, kvec


def main():
    seen_graph_pattern = False
    for p, l, kvec in cases():
        ctx = gassner.context(p, l, kvec)
        form = gassner.invariant_form(ctx)
        grp = groupengine.image_group(ctx, form)
        chain = groupengine.StabilizerChain(grp, seed=0)
        rep = groupengine.radical_containment(ctx, form, chain, limit=4000)
        tag = "full" if rep.full_radical else f"{rep.contained}/{rep.total}"
        print(
            f"p={p} l={l} k={kvec} case={ctx.algebra.kind.value} "
            f"order={chain.order} radical={tag} graph={rep.graph_pattern}",
            flush=True,
        )
        seen_graph_pattern |= rep.graph_pattern
    print(
        "graph-of-isomorphism pattern observed:" , seen_graph_pattern,
    )


if __name__ == "__main__":
    main()
