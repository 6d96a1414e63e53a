"""Flat connections on closed surfaces: direct enumeration, the Frobenius
character-sum formula, and the closed amplitude of the surface as a map
from the empty surface to itself."""
from fractions import Fraction

from dw2vect import builtin_three_cobordism, cyclic, dw_closed_invariant, dw_vector_space, symmetric
from dw2vect.field_theory import mednykh_hom_count


def main():
    groups = [("Z2", cyclic(2)), ("Z3", cyclic(3)), ("S3", symmetric(3)), ("S4", symmetric(4))]
    print(f"{'group':6s}{'genus':>6s}{'|Hom|':>8s}{'formula':>9s}{'classes':>9s}{'amplitude':>11s}")
    for name, G in groups:
        for g in (0, 1, 2):
            if G.order ** (2 * g) > 10**6:
                continue
            space = dw_vector_space(g, G)
            formula = mednykh_hom_count(G, g)
            amp = dw_closed_invariant(builtin_three_cobordism(f"surface:{g}"), G).as_fractions()[0][0]
            assert amp == Fraction(space.hom_count, G.order)
            print(f"{name:6s}{g:6d}{space.hom_count:8d}{str(formula):>9s}{space.dimension:9d}{str(amp):>11s}")


if __name__ == "__main__":
    main()
