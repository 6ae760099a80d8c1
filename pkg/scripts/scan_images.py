#!/usr/bin/env python3
"""Sweep small (p, l, n) grids and compare every computed image order with
the classical prediction.  Writes a TSV to stdout; mismatches, if any ever
show up, go to stderr too.

Usage: python scripts/scan_images.py [--p-max 14] [--l-max 8] [--n-max 4]
"""

import argparse
import sys
import time

from monodromy import arith, gassner, groupengine, unitary


def odd_primes(bound):
    return [q for q in range(3, bound) if all(q % d for d in range(2, q))]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p-max", type=int, default=14)
    ap.add_argument("--l-max", type=int, default=8)
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--order-cap", type=int, default=10**8)
    args = ap.parse_args()

    print("p\tl\tcase\tq\tkvec\tkind\texpected\tcomputed\tseconds")
    for p in odd_primes(args.p_max):
        for l in odd_primes(args.l_max):
            if p == l:
                continue
            try:
                sd = arith.splitting_data(p, l)
                arith.build_algebra(p, l)
            except arith.FieldTooLargeError:
                continue
            for n in range(2, args.n_max + 1):
                kvec = tuple([1] * (n + 1))
                if sum(kvec) % l == 0:
                    continue
                exp = unitary.expected_image(sd, kvec)
                if exp.order > args.order_cap:
                    continue
                t0 = time.time()
                ctx = gassner.context(p, l, kvec)
                grp = groupengine.image_group(ctx)
                got = groupengine.bsgs_order(grp, seed=0)
                row = (
                    f"{p}\t{l}\t{sd.case.value}\t{sd.q}\t{kvec}\t{exp.kind}"
                    f"\t{exp.order}\t{got}\t{time.time() - t0:.2f}"
                )
                print(row, flush=True)
                if got != exp.order:
                    print(f"MISMATCH: {row}", file=sys.stderr)


if __name__ == "__main__":
    main()
