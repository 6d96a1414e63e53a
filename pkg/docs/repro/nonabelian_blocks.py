"""Blocks of the pants matrix for S3 and S4 between named classes.

S3, pair of equal transpositions -> identity.  The reference lists rows by
source basis element, so it is compared with the transpose of our block, up
to a row permutation.

S4, pair of equal 3-cycles -> 3-cycle.  The reference differs by relabeling
the second Z3 character factor, (i, j) -> (i, -j).  The provenance shows the
two apex classes that contribute.
"""
import itertools

import numpy as np

from dw2vect import builtin_presentation, fc, lambda_block, symmetric

REFERENCE_S3 = np.array([[0, 1, 1], [1, 1, 0], [1, 1, 0], [0, 1, 1]])
REFERENCE_S4 = np.array([[2, 1, 1, 1, 2, 1, 1, 1, 2],
                         [1, 2, 1, 1, 1, 2, 2, 1, 1],
                         [1, 1, 2, 2, 1, 1, 1, 2, 1]])


def show(B):
    width = max(len(s) for s in B.target.labels)
    print("  columns:", ", ".join(B.source.labels))
    for label, row in zip(B.target.labels, B.entries):
        print(f"  {label:>{width}}  " + " ".join(str(v) for v in row))


def main():
    B = lambda_block(fc(builtin_presentation("pants"), symmetric(3)), "(12),(12)", "()")
    print(f"S3 block (t,t) -> 1, shape {B.shape}")
    show(B)
    perms = [p for p in itertools.permutations(range(4)) if np.array_equal(B.entries.T[list(p)], REFERENCE_S3)]
    print(f"  transpose matches the reference under row orders: {perms}")

    B = lambda_block(fc(builtin_presentation("pants"), symmetric(4)), "(123),(123)", "(132)")
    print(f"S4 block (s,s) -> s, shape {B.shape}")
    show(B)
    relabelled = np.zeros_like(B.entries)
    for i, j in itertools.product(range(3), repeat=2):
        relabelled[:, i * 3 + (-j) % 3] = B.entries[:, i * 3 + j]
    print(f"  matches the reference after (i, j) -> (i, -j): {np.array_equal(relabelled, REFERENCE_S4)}")
    print("  provenance of the (chi0 <- chi0,chi0) entry:")
    for label, aut, mult in B.provenance[(0, 0)]:
        print(f"    apex class [{label}] |Aut| = {aut}: multiplicity {mult}")


if __name__ == "__main__":
    main()
