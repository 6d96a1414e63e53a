"""The level-one 3-cocycle on Z2: its transgression to Z2 // Z2, the twisted
irreducibles, and the twisted pants matrix with its fusion ring."""
import numpy as np

from dw2vect import builtin_omega_cyclic, builtin_presentation, cyclic, decorate, transgress_to_loop_groupoid
from dw2vect.cocycles import find_primitive, is_cocycle
from dw2vect.linearization import fusion_check, fusion_coefficients, lambda_twisted_morphism
from dw2vect.twisted import twisted_algebra, twisted_irreps


def fmt(z):
    z = complex(np.round(z, 10))
    re, im = z.real + 0.0, z.imag + 0.0
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}i"
    return f"{re:g}{im:+g}i"


def main():
    G, w = cyclic(2), builtin_omega_cyclic(2, 1)
    theta = transgress_to_loop_groupoid(w)
    X = theta.groupoid
    print(f"theta is a 2-cocycle: {bool(is_cocycle(theta))}; primitive exists: {find_primitive(theta) is not None}")
    f, g = X.composable_pairs()
    for a, b in zip(f, g):
        ph = theta.phase(a, b)
        if ph.value:
            print(f"  nontrivial value at ({X.morphism_payload(int(a))}) o ({X.morphism_payload(int(b))}): {ph}")
    irr = twisted_irreps(twisted_algebra(X, theta))
    print(f"twisted irreducibles: rank {irr.rank}, dims {irr.dims}")
    for cls in irr.classes:
        for label, row in zip(cls.labels, cls.characters):
            print(f"  class [{cls.label}] {label}: " + " ".join(fmt(z) for z in row))
    pants = lambda_twisted_morphism(decorate(builtin_presentation("pants"), G, w))
    print(f"twisted pants {pants.shape[0]}x{pants.shape[1]}")
    for row in pants.entries:
        print("  " + "".join(str(v) for v in row))
    unit = lambda_twisted_morphism(decorate(builtin_presentation("disk"), G, w)).entries[:, 0]
    print("fusion:", fusion_check(fusion_coefficients(pants), unit))


if __name__ == "__main__":
    main()
