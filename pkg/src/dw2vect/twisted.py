"""Twisted groupoid algebras and their irreducible (projective) characters.

The algebra of a groupoid ``X`` twisted by a 2-cocycle ``theta`` has basis
``e_f`` for morphisms ``f`` and product ``e_f * e_g = theta(f, g) e_{f o g}``
when ``f o g`` is defined, zero otherwise.  Its simple modules are found per
isomorphism class by decomposing the twisted group algebra of the
automorphism group numerically.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import DEFAULT_SEED, INTEGRALITY_TOL, character_table
from .cocycles import GroupoidCochain, as_cochain, is_cocycle, is_normalized
from .errors import CocycleError, IntegralityError, UnsupportedError
from .groupoids import FiniteGroupoid, Skeleton
from .groups import FiniteGroup

AUT_ORDER_LIMIT = 200
EXHAUSTIVE_BASIS_LIMIT = 200


@dataclass(eq=False)
class TwistedGroupoidAlgebra:
    groupoid: FiniteGroupoid
    theta: GroupoidCochain

    def __post_init__(self):
        self.theta = as_cochain(self.groupoid, self.theta, 2)

    @property
    def dimension(self) -> int:
        return self.groupoid.n_morphisms

    def basis_product(self, f, g) -> tuple[np.ndarray, np.ndarray]:
        """``e_f * e_g`` as (morphism index or -1 for zero, phase numerator)."""
        X = self.groupoid
        f, g = np.asarray(f), np.asarray(g)
        ok = X.src[f] == X.tgt[g]
        idx = np.full(np.shape(f), -1, dtype=np.int64)
        ph = np.zeros(np.shape(f), dtype=np.int64)
        if ok.any():
            idx[ok] = X.compose(f[ok], g[ok])
            ph[ok] = self.theta.values(f[ok], g[ok])
        return idx, ph

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Product of coefficient vectors (complex, length = dimension)."""
        m = self.theta.modulus
        a = np.nonzero(u)[0]
        b = np.nonzero(v)[0]
        out = np.zeros(self.dimension, dtype=complex)
        if not len(a) or not len(b):
            return out
        f = np.repeat(a, len(b))
        g = np.tile(b, len(a))
        idx, ph = self.basis_product(f, g)
        keep = idx >= 0
        coeff = u[f[keep]] * v[g[keep]] * np.exp(2j * np.pi * ph[keep] / m)
        np.add.at(out, idx[keep], coeff)
        return out

    def is_associative(self, samples: int = 1000, seed: int = DEFAULT_SEED) -> tuple[bool, tuple | None]:
        """Compare ``(e_f e_g) e_h`` with ``e_f (e_g e_h)`` on basis triples.

        Exhaustive over composable triples when the basis has at most 200
        elements, otherwise on ``samples`` random composable triples.
        Triples that are not composable give zero on both sides.
        """
        X = self.groupoid
        f, g, h = X.composable_triples()
        if self.dimension > EXHAUSTIVE_BASIS_LIMIT and len(f) > samples:
            pick = np.random.default_rng(seed).choice(len(f), size=samples, replace=False)
            f, g, h = f[pick], g[pick], h[pick]
        m = self.theta.modulus
        fg, p1 = self.basis_product(f, g)
        left, p2 = self.basis_product(fg, h)
        gh, q1 = self.basis_product(g, h)
        right, q2 = self.basis_product(f, gh)
        bad = np.nonzero((left != right) | ((p1 + p2 - q1 - q2) % m != 0))[0]
        if len(bad):
            i = bad[0]
            return False, (int(f[i]), int(g[i]), int(h[i]))
        return True, None


def twisted_algebra(X: FiniteGroupoid, theta) -> TwistedGroupoidAlgebra:
    A = TwistedGroupoidAlgebra(X, theta)
    check = is_cocycle(A.theta)
    if not check:
        raise CocycleError(f"twisting cochain is not a 2-cocycle: {check.message}", check.witness)
    return A


# irreducible projective characters ------------------------------------------------

@dataclass(eq=False)
class TwistedClassIrreps:
    """Irreducible projective characters of Aut(rep) for one class.

    ``characters[i, a]`` is the character of irrep ``i`` on element ``a`` of
    the automorphism group (element indices as in the skeleton).
    """

    label: str
    group: FiniteGroup
    cocycle: np.ndarray  # numerators, shape (|Aut|, |Aut|)
    modulus: int
    dims: list[int]
    characters: np.ndarray
    labels: list[str]


@dataclass(eq=False)
class TwistedIrrepList:
    algebra: TwistedGroupoidAlgebra
    classes: list[TwistedClassIrreps]

    @property
    def rank(self) -> int:
        return sum(len(c.dims) for c in self.classes)

    @property
    def dims(self) -> list[int]:
        return [d for c in self.classes for d in c.dims]


def restricted_cocycle(theta: GroupoidCochain, sk: Skeleton, c: int) -> np.ndarray:
    members = sk.aut_members[c]
    a, b = np.meshgrid(members, members, indexing="ij")
    return theta.values(a.ravel(), b.ravel()).reshape(len(members), len(members))


def regular_class_count(G: FiniteGroup, cocycle: np.ndarray, modulus: int) -> int:
    """Number of conjugacy classes of cocycle-regular elements.

    ``g`` is regular when ``c(g, h) = c(h, g)`` for every ``h`` commuting
    with ``g``; this counts the irreducible projective representations.
    """
    count = 0
    for cls in G.classes:
        g = int(cls[0])
        h = np.nonzero(G.table[g] == G.table[:, g])[0]
        if not np.any((cocycle[g, h] - cocycle[h, g]) % modulus):
            count += 1
    return count


def _regular_matrices(G: FiniteGroup, cocycle: np.ndarray, modulus: int) -> np.ndarray:
    """Left-regular matrices: ``L[a] e_b = c(a, b) e_{ab}``."""
    n = G.order
    L = np.zeros((n, n, n), dtype=complex)
    a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    L[a, G.table[a, b], b] = np.exp(2j * np.pi * cocycle[a, b] / modulus)
    return L


def _center_basis(G: FiniteGroup, cocycle: np.ndarray, modulus: int) -> np.ndarray:
    """Basis of the centre of the twisted group algebra (rows are coefficient vectors)."""
    n = G.order
    w = np.exp(2j * np.pi * cocycle / modulus)
    # (z e_h - e_h z)[k] = z[k h^-1] w(k h^-1, h) - z[h^-1 k] w(h, h^-1 k)
    rows = []
    k = np.arange(n)
    for h in range(n):
        A = np.zeros((n, n), dtype=complex)
        left = G.table[k, G.inv[h]]
        right = G.table[G.inv[h], k]
        np.add.at(A, (k, left), w[left, h])
        np.add.at(A, (k, right), -w[h, right])
        rows.append(A)
    M = np.vstack(rows)
    _, s, vh = np.linalg.svd(M)
    rank = int(np.sum(s > 1e-8 * max(1.0, s[0] if len(s) else 1.0)))
    return vh[rank:].conj()


def decompose_twisted_group_algebra(G: FiniteGroup, cocycle: np.ndarray, modulus: int,
                                    seed: int = DEFAULT_SEED, attempts: int = 3) -> tuple[list[int], np.ndarray]:
    """Dimensions and characters of the irreducible projective representations."""
    n = G.order
    if n > AUT_ORDER_LIMIT:
        raise UnsupportedError(f"automorphism group of order {n} exceeds the limit of {AUT_ORDER_LIMIT}")
    L = _regular_matrices(G, cocycle, modulus)
    Z = _center_basis(G, cocycle, modulus)
    expected = regular_class_count(G, cocycle, modulus)
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        coeff = rng.standard_normal(len(Z)) + 1j * rng.standard_normal(len(Z))
        z = coeff @ Z
        Lz = np.tensordot(z, L, axes=1)
        H = Lz + Lz.conj().T
        vals, vecs = np.linalg.eigh(H)
        clusters = []
        start = 0
        for i in range(1, n + 1):
            if i == n or vals[i] - vals[i - 1] > 1e-6 * max(1.0, abs(vals[i - 1])):
                clusters.append((start, i))
                start = i
        dims, chars, ok = [], [], True
        for lo, hi in clusters:
            V = vecs[:, lo:hi]
            P = V @ V.conj().T
            d = np.sqrt(hi - lo)
            if abs(d - round(d)) > INTEGRALITY_TOL:
                ok = False
                break
            d = int(round(d))
            dims.append(d)
            chars.append(np.einsum("aij,ji->a", L, P) / d)
        if not ok or len(dims) != len(Z) or len(dims) != expected or sum(d * d for d in dims) != n:
            continue
        X = np.array(chars)
        gram = X @ X.conj().T / n
        if np.abs(gram - np.eye(len(X))).max() > INTEGRALITY_TOL:
            continue
        if np.abs(X[:, 0] - np.array(dims)).max() > INTEGRALITY_TOL:
            continue
        key = [(d, tuple(np.round(row.real, 6)), tuple(np.round(row.imag, 6))) for d, row in zip(dims, X)]
        order = sorted(range(len(dims)), key=lambda i: key[i])
        return [dims[i] for i in order], X[order]
    raise IntegralityError(f"twisted decomposition of {G.name} failed validation after {attempts} attempts")


def twisted_class_irreps(theta: GroupoidCochain, sk: Skeleton, c: int, seed: int = DEFAULT_SEED) -> TwistedClassIrreps:
    G = sk.aut_groups[c]
    coc = restricted_cocycle(theta, sk, c)
    label = sk.labels[c]
    if not np.any(coc):
        t = character_table(G, seed)
        chars = t.element_complex()
        return TwistedClassIrreps(label, G, coc, theta.modulus, t.dims, chars, list(t.labels))
    dims, chars = decompose_twisted_group_algebra(G, coc, theta.modulus, seed)
    return TwistedClassIrreps(label, G, coc, theta.modulus, dims, chars, [f"P{i}" for i in range(len(dims))])


def twisted_irreps(A: TwistedGroupoidAlgebra, seed: int = DEFAULT_SEED) -> TwistedIrrepList:
    check = is_normalized(A.theta)
    if not check:
        raise CocycleError("twisted irreps need a normalized 2-cocycle", check.witness)
    sk = A.groupoid.skeleton
    return TwistedIrrepList(A, [twisted_class_irreps(A.theta, sk, c, seed) for c in range(len(sk))])
