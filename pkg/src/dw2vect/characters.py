"""Character tables of finite groups.

Exact tables (values in Z[zeta_N], see :mod:`dw2vect.cyclotomic`) are built
for cyclic, symmetric, dihedral groups and direct products.  A group without
a recorded construction (for example an automorphism group cut out of a
groupoid) is matched against those families by isomorphism search; if that
fails a numerical table is computed from the class-sum algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from . import cyclotomic as cy
from .errors import IntegralityError
from .groups import (
    ISOMORPHISM_ORDER_BOUND,
    FiniteGroup,
    Subgroup,
    cyclic,
    dihedral,
    direct_product,
    find_isomorphism,
    symmetric,
)

DEFAULT_SEED = 0xD1C5
INTEGRALITY_TOL = 1e-6


@dataclass(eq=False)
class CharacterTable:
    """Rows are irreducible characters, columns conjugacy classes of ``group``.

    ``exact`` tables carry ``values`` of shape (irreps, classes, conductor) in
    the group ring Z[C_conductor]; ``complex_values`` is always filled.
    """

    group: FiniteGroup
    labels: list[str]
    complex_values: np.ndarray
    values: np.ndarray | None = None
    conductor: int = 1
    method: str = "exact"

    @property
    def exact(self) -> bool:
        return self.values is not None

    @property
    def n_irreps(self) -> int:
        return len(self.labels)

    @property
    def dims(self) -> list[int]:
        return [int(round(v.real)) for v in self.complex_values[:, 0]]

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.group.classes])

    def element_values(self) -> np.ndarray:
        """Exact values per element, shape (irreps, |G|, conductor)."""
        return self.values[:, self.group.class_of]

    def element_complex(self) -> np.ndarray:
        return self.complex_values[:, self.group.class_of]

    def character(self, i: int) -> "ClassFunction":
        return ClassFunction(self.group, self.complex_values[i],
                             self.values[i] if self.exact else None)

    def orthogonality_error(self) -> float:
        X = self.complex_values
        w = self.class_sizes / self.group.order
        gram = (X * w) @ X.conj().T
        return float(np.abs(gram - np.eye(len(X))).max()) if len(X) else 0.0

    def check(self) -> None:
        G = self.group
        if self.n_irreps != len(G.classes):
            raise IntegralityError(f"{self.n_irreps} irreps but {len(G.classes)} classes")
        if sum(d * d for d in self.dims) != G.order:
            raise IntegralityError("sum of squared dimensions differs from the group order")
        if self.exact:
            X = self.values
            conj = cy.conj(X)
            sizes = self.class_sizes
            weighted = X * sizes[None, :, None]
            gram = cy.as_rational(cy.pair_sum(weighted, conj))
            if not np.array_equal(gram, G.order * np.eye(self.n_irreps, dtype=np.int64)):
                raise IntegralityError("exact character table fails row orthogonality")
        elif self.orthogonality_error() > INTEGRALITY_TOL:
            raise IntegralityError("numerical character table fails row orthogonality")

    def format_value(self, i: int, c: int) -> str:
        if self.exact:
            return cy.format_phase_sum(self.values[i, c])
        v = self.complex_values[i, c]
        # round first so that tiny values of either sign print as 0.000000
        re, im = round(v.real, 6) + 0.0, round(v.imag, 6) + 0.0
        if abs(im) < 5e-7:
            return f"{re:.6f}"
        return f"{re:.6f}{im:+.6f}i"


@dataclass(eq=False)
class ClassFunction:
    group: FiniteGroup
    complex_values: np.ndarray
    values: np.ndarray | None = None  # exact, shape (classes, conductor)

    @property
    def exact(self) -> bool:
        return self.values is not None

    def per_element_complex(self) -> np.ndarray:
        return self.complex_values[self.group.class_of]


def _finish(G, labels, exact_values, conductor, method="exact") -> CharacterTable:
    exact_values = np.asarray(exact_values, dtype=np.int64)
    table = CharacterTable(G, labels, cy.to_complex(exact_values), exact_values, conductor, method)
    table.check()
    return table


# families ---------------------------------------------------------------------

def _cyclic_table(G: FiniteGroup, n: int) -> CharacterTable:
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    vals = np.zeros((n, n, n), dtype=np.int64)
    np.put_along_axis(vals, ((j * k) % n)[..., None], 1, axis=2)
    return _finish(G, [f"chi{i}" for i in range(n)], vals, n)


def partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of n in reverse lexicographic order, ``(n,)`` first."""
    out = []

    def rec(rest, largest, prefix):
        if rest == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(rest, largest), 0, -1):
            rec(rest - part, part, prefix + [part])

    rec(n, n, [])
    return out


@lru_cache(maxsize=None)
def murnaghan_nakayama(shape: tuple[int, ...], cycle_type: tuple[int, ...]) -> int:
    """Irreducible S_n character ``chi^shape`` on cycle type ``cycle_type``.

    Border strips are removed on the beta-set (first-column hook lengths): a
    strip of length r corresponds to moving a bead from b to b - r, and its
    height is the number of beads strictly between.
    """
    if not cycle_type:
        return 1 if sum(shape) == 0 else 0
    r, rest = cycle_type[0], cycle_type[1:]
    k = len(shape)
    beta = [shape[i] + (k - 1 - i) for i in range(k)]
    beads = set(beta)
    total = 0
    for b in beta:
        if b - r >= 0 and (b - r) not in beads:
            height = sum(1 for c in beta if b - r < c < b)
            new_beta = sorted((beads - {b}) | {b - r}, reverse=True)
            new_shape = tuple(x - (k - 1 - i) for i, x in enumerate(new_beta))
            new_shape = tuple(x for x in new_shape if x > 0)
            total += (-1) ** height * murnaghan_nakayama(new_shape, rest)
    return total


def cycle_type(perm) -> tuple[int, ...]:
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def _symmetric_table(G: FiniteGroup, n: int) -> CharacterTable:
    shapes = partitions(n)
    reps = [int(c[0]) for c in G.classes]
    types = [cycle_type(G.perms[r]) for r in reps]
    vals = np.array([[[murnaghan_nakayama(s, t)] for t in types] for s in shapes], dtype=np.int64)
    labels = ["[" + ",".join(map(str, s)) + "]" for s in shapes]
    return _finish(G, labels, vals, 1)


def _dihedral_table(G: FiniteGroup, n: int) -> CharacterTable:
    reps = np.array([int(c[0]) for c in G.classes])
    k, e = reps % n, reps // n
    rows, labels = [], []

    def linear(r_sign, s_sign):
        v = np.zeros((len(reps), n), dtype=np.int64)
        val = np.where(e == 1, s_sign * r_sign**k, r_sign**k)
        v[:, 0] = val
        return v

    rows.append(linear(1, 1))
    labels.append("triv")
    rows.append(linear(1, -1))
    labels.append("sign")
    if n % 2 == 0:
        rows.append(linear(-1, 1))
        labels.append("alt+")
        rows.append(linear(-1, -1))
        labels.append("alt-")
    for j in range(1, (n - 1) // 2 + 1):
        v = np.zeros((len(reps), n), dtype=np.int64)
        rot = e == 0
        np.add.at(v, (np.nonzero(rot)[0], (j * k[rot]) % n), 1)
        np.add.at(v, (np.nonzero(rot)[0], (-j * k[rot]) % n), 1)
        rows.append(v)
        labels.append(f"rho{j}")
    return _finish(G, labels, np.array(rows), n)


def _product_table(G: FiniteGroup, factors) -> CharacterTable:
    tables = [character_table(F) for F in factors]
    if not all(t.exact for t in tables):
        return numerical_character_table(G)
    n = cy.lcm(*(t.conductor for t in tables))
    elem = np.ones((1, 1, 1), dtype=np.int64)
    elem_n = 1
    labels = [""]
    for t in tables:
        ev = cy.lift(t.element_values(), n)
        cur = cy.lift(elem, n) if elem_n != n else elem
        # rows: (old irrep, new irrep); columns: (old element, new element)
        prod = cy.multiply(cur[:, None, :, None, :], ev[None, :, None, :, :])
        r1, r2, g1, g2, _ = prod.shape
        elem = prod.reshape(r1 * r2, g1 * g2, n)
        elem_n = n
        labels = [f"{a},{b}" if a else b for a in labels for b in t.labels]
    reps = [int(c[0]) for c in G.classes]
    labels = [f"({s})" if len(tables) > 1 else s for s in labels]
    return _finish(G, labels, elem[:, reps], n)


# recognition and numerics -----------------------------------------------------

_CACHE: dict[bytes, CharacterTable] = {}


def _abelian_candidates(n: int) -> list[FiniteGroup]:
    from .zmod import factorize

    per_prime = []
    for p, e in factorize(n):
        per_prime.append([[p**k for k in part] for part in partitions(e)])
    out = []

    def rec(i, acc):
        if i == len(per_prime):
            out.append(acc)
            return
        for choice in per_prime[i]:
            rec(i + 1, acc + choice)

    rec(0, [])
    return [direct_product(*[cyclic(m) for m in sorted(c)]) if len(c) > 1 else cyclic(c[0] if c else 1)
            for c in out]


def _family_candidates(G: FiniteGroup) -> list[FiniteGroup]:
    n = G.order
    if G.is_abelian:
        return _abelian_candidates(n)
    cands = []
    k = 1
    while factorial(k) < n:
        k += 1
    if factorial(k) == n:
        cands.append(symmetric(k))
    if n % 2 == 0 and n >= 6:
        cands.append(dihedral(n // 2))
    return cands


def _transport(G: FiniteGroup, K: FiniteGroup, phi: np.ndarray, table: CharacterTable) -> CharacterTable:
    """Move ``table`` (for K) to G along the isomorphism ``phi: K -> G``."""
    inv = np.empty_like(phi)
    inv[phi] = np.arange(len(phi))
    reps = [int(c[0]) for c in G.classes]
    pre = inv[reps]
    vals = table.values[:, K.class_of[pre]]
    return _finish(G, list(table.labels), vals, table.conductor)


def character_table(G: FiniteGroup, seed: int = DEFAULT_SEED) -> CharacterTable:
    key = G.table.tobytes()
    if key in _CACHE:
        cached = _CACHE[key]
        if cached.group is G:
            return cached
        out = CharacterTable(G, cached.labels, cached.complex_values, cached.values, cached.conductor, cached.method)
        return out
    fam = G.family
    if fam is not None and fam[0] == "cyclic":
        t = _cyclic_table(G, fam[1])
    elif fam is not None and fam[0] == "symmetric":
        t = _symmetric_table(G, fam[1])
    elif fam is not None and fam[0] == "dihedral":
        t = _dihedral_table(G, fam[1])
    elif fam is not None and fam[0] == "product":
        t = _product_table(G, fam[1])
    else:
        t = None
        if G.order == 1:
            t = _cyclic_table(G, 1)
        elif G.order <= ISOMORPHISM_ORDER_BOUND:
            for K in _family_candidates(G):
                phi = find_isomorphism(K, G)
                if phi is not None:
                    t = _transport(G, K, phi, character_table(K))
                    break
        if t is None:
            t = numerical_character_table(G, seed)
    _CACHE[key] = t
    return t


def numerical_character_table(G: FiniteGroup, seed: int = DEFAULT_SEED, attempts: int = 3) -> CharacterTable:
    """Characters from simultaneous eigenvectors of the class-sum algebra."""
    classes = G.classes
    r = len(classes)
    sizes = np.array([len(c) for c in classes], dtype=float)
    class_of = G.class_of
    # a[j, k, l]: coefficient of class sum C_l in C_j C_k, read off at representative of C_l
    a = np.zeros((r, r, r))
    for j, Cj in enumerate(classes):
        for k, Ck in enumerate(classes):
            prods = G.table[np.ix_(Cj, Ck)].ravel()
            counts = np.bincount(class_of[prods], minlength=r).astype(float)
            a[j, k] = counts / sizes
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        coeff = rng.standard_normal(r)
        M = np.einsum("j,jkl->lk", coeff, a)  # acts on omega vectors
        _, vecs = np.linalg.eig(M.T)
        rows = []
        for v in vecs.T:
            omega = v / v[0]
            d = np.sqrt(G.order / np.sum(np.abs(omega) ** 2 / sizes))
            rows.append(d * omega / sizes)
        X = np.array(rows)
        order = np.lexsort((np.round(X[:, 0].real, 6),))
        X = X[order]
        t = CharacterTable(G, [f"X{i}" for i in range(r)], X, None, 1, "numerical")
        dims_ok = np.allclose(X[:, 0].imag, 0, atol=INTEGRALITY_TOL) and np.allclose(
            X[:, 0].real, np.round(X[:, 0].real), atol=INTEGRALITY_TOL)
        if dims_ok and t.orthogonality_error() < INTEGRALITY_TOL:
            t.complex_values = X
            t.check()
            return t
    raise IntegralityError(f"numerical character table for {G.name} failed validation after {attempts} attempts")


# class-function arithmetic ------------------------------------------------------

def _round_integer(x: complex, what: str) -> int:
    k = int(round(x.real))
    if abs(x - k) > INTEGRALITY_TOL:
        raise IntegralityError(f"{what} {x} is not an integer within {INTEGRALITY_TOL}")
    return k


def inner_product(chi: ClassFunction, psi: ClassFunction) -> Fraction | complex:
    """``(1/|G|) sum_g chi(g) conj(psi(g))``; exact when both are exact."""
    G = chi.group
    sizes = np.array([len(c) for c in G.classes])
    if chi.exact and psi.exact:
        n = cy.lcm(chi.values.shape[-1], psi.values.shape[-1])
        a, b = cy.lift(chi.values, n), cy.lift(psi.values, n)
        total = (cy.multiply(a, cy.conj(b)) * sizes[:, None]).sum(axis=0)
        return Fraction(int(cy.as_rational(total)), G.order)
    return complex(np.sum(sizes * chi.complex_values * np.conj(psi.complex_values)) / G.order)


def hom_multiplicity(chi: ClassFunction, psi: ClassFunction) -> int:
    val = inner_product(chi, psi)
    if isinstance(val, Fraction):
        if val.denominator != 1:
            raise IntegralityError(f"multiplicity {val} is not an integer")
        return int(val)
    return _round_integer(val, "multiplicity")


def dual_character(chi: ClassFunction) -> ClassFunction:
    return ClassFunction(chi.group, np.conj(chi.complex_values),
                         cy.conj(chi.values) if chi.exact else None)


def tensor_character(chi: ClassFunction, psi: ClassFunction) -> ClassFunction:
    if chi.exact and psi.exact:
        n = cy.lcm(chi.values.shape[-1], psi.values.shape[-1])
        v = cy.multiply(cy.lift(chi.values, n), cy.lift(psi.values, n))
        return ClassFunction(chi.group, cy.to_complex(v), v)
    return ClassFunction(chi.group, chi.complex_values * psi.complex_values)


def regular_character(G: FiniteGroup) -> ClassFunction:
    v = np.zeros((len(G.classes), 1), dtype=np.int64)
    v[0, 0] = G.order
    return ClassFunction(G, v[:, 0].astype(complex), v)


def restrict(psi: ClassFunction, H: Subgroup) -> ClassFunction:
    """Restriction of a class function of ``H.parent`` to the subgroup."""
    K = H.as_group()
    members = np.array(H.members)
    cls = [int(members[c[0]]) for c in K.classes]
    pc = H.parent.class_of[cls]
    return ClassFunction(K, psi.complex_values[pc], psi.values[pc] if psi.exact else None)


def induce(chi: ClassFunction, H: Subgroup) -> ClassFunction:
    """Induction from ``H`` (chi lives on ``H.as_group()``) to ``H.parent``."""
    G = H.parent
    K = chi.group
    members = np.array(H.members)
    where = np.full(G.order, -1, dtype=np.int64)
    where[members] = np.arange(len(members))
    reps = [int(c[0]) for c in G.classes]
    x = np.arange(G.order)
    conj = G.table[G.table[G.inv[x][:, None], np.array(reps)[None, :]], x[:, None]]  # x^-1 g x
    inside = where[conj]
    ok = inside >= 0
    kcls = K.class_of[np.where(ok, inside, 0)]
    if chi.exact:
        vals = chi.values[kcls] * ok[..., None]
        n = vals.shape[-1]
        total = cy.reduce(vals.sum(axis=0))
        if np.any(total % len(members)):
            raise IntegralityError("induced character is not integral")
        exact = np.zeros((len(reps), n), dtype=np.int64)
        exact[:, : total.shape[-1]] = total // len(members)
        return ClassFunction(G, cy.to_complex(exact), exact)
    vals = np.where(ok, chi.complex_values[kcls], 0)
    return ClassFunction(G, vals.sum(axis=0) / len(members))
