"""Skeleta of S3 // S3 and of S3 acting on pairs by simultaneous conjugation.

For the pairs, each class is listed with its stabiliser order and the class
of the product (the image under the outgoing leg of the pants).
"""
from dw2vect import builtin_presentation, fc, symmetric
from dw2vect.field_theory import circle_groupoid

KIND = {1: "1", 2: "t", 3: "s"}


def main():
    G = symmetric(3)
    sk = circle_groupoid(G).skeleton
    print("S3 // S3")
    for label, aut in zip(sk.labels, sk.aut_orders):
        print(f"  [{label}]  |Aut| = {aut}")
    X = fc(builtin_presentation("pants"), G).apex
    sk = X.skeleton
    print(f"(S3 x S3) // S3: {len(sk)} classes")
    for c, r in enumerate(sk.reps):
        g1, g2 = (int(v) for v in X.carrier[r])
        kinds = f"({KIND[int(G.element_orders[g1])]},{KIND[int(G.element_orders[g2])]})"
        product = KIND[int(G.element_orders[G.table[g1, g2]])]
        label = f"[{sk.labels[c]}]"
        print(f"  {label:14s}{kinds:7s} |Aut| = {sk.aut_orders[c]}  product class [{product}]")


if __name__ == "__main__":
    main()
