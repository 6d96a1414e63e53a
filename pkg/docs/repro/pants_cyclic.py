"""Pants matrices of Z2 and Z3 against the tensor-square reference layout.

The reference layout indexes source columns by ((a, b), (i, j)): holonomy
pair first, character pair second, with the first in-circle read with the
opposite orientation.  Our columns are lexicographic pairs ((a, i), (b, j)).
The fixed relabeling between the two is (a, i), (b, j) -> ((-a, b), (-i, j)).
"""
import itertools

import numpy as np

from dw2vect import builtin_presentation, cyclic, fc, lambda_morphism

REFERENCE_M = {
    2: np.array([[1, 0, 0, 1], [0, 1, 1, 0]]),
    3: np.array([[1, 0, 0, 0, 1, 0, 0, 0, 1],
                 [0, 1, 0, 0, 0, 1, 1, 0, 0],
                 [0, 0, 1, 1, 0, 0, 0, 1, 0]]),
}


def reference_in_our_columns(n):
    full = np.kron(REFERENCE_M[n], REFERENCE_M[n])
    cols = []
    for (a, i), (b, j) in itertools.product(itertools.product(range(n), repeat=2), repeat=2):
        cols.append(((-a) % n * n + b) * n * n + ((-i) % n * n + j))
    return full[:, cols]


def main():
    for n in (2, 3):
        L = lambda_morphism(fc(builtin_presentation("pants"), cyclic(n)))
        print(f"Z{n}: pants matrix {L.shape[0]}x{L.shape[1]} (rows = target basis, columns = source basis)")
        print("  target basis:", ", ".join(L.target.labels))
        for row in L.entries:
            print("  " + "".join(str(v) for v in row))
        ref = reference_in_our_columns(n)
        print(f"  equals M (x) M after the fixed relabeling: {np.array_equal(L.entries, ref)}")
        print(f"  every source column has exactly one 1: {bool((L.entries.sum(axis=0) == 1).all())}")


if __name__ == "__main__":
    main()
