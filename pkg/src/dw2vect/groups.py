"""Finite groups as dense multiplication tables.

Elements are the integers ``0 .. order-1`` and the identity is always ``0``.
Every group is materialized in full, so all constructions stay exact and every
axiom can be checked exhaustively at the sizes this package is meant for.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial, prod
from typing import Sequence

import numpy as np

from .errors import EnumerationCapExceeded, GroupError, UnsupportedError

DEFAULT_ORDER_CAP = 10_000
DEFAULT_ENUMERATION_CAP = 10**8
ISOMORPHISM_ORDER_BOUND = 64

# a word is a sequence of (generator index, exponent) pairs, exponent +1 or -1
Word = Sequence[tuple[int, int]]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its Cayley table.

    ``family`` records how the group was built (``("cyclic", n)``,
    ``("symmetric", n)``, ``("dihedral", n)``, ``("product", factors)``) and is
    what lets :mod:`dw2vect.characters` pick an exact character table.
    """

    table: np.ndarray
    name: str = "G"
    labels: tuple[str, ...] | None = None
    family: tuple | None = None
    perms: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        t = np.ascontiguousarray(self.table, dtype=np.int64)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    identity = 0

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def mul(self, g, h):
        return self.table[g, h]

    @cached_property
    def inv(self) -> np.ndarray:
        out = np.argmin(self.table, axis=1)  # column where g*h == 0
        out.setflags(write=False)
        return out

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def element_index(self, label: str) -> int:
        labels = self.labels or tuple(str(i) for i in range(self.order))
        try:
            return labels.index(label.replace(" ", ""))
        except ValueError:
            raise GroupError(f"no element labelled {label!r} in {self.name}") from None

    def conj(self, h, g):
        """``h g h^-1``."""
        return self.table[self.table[h, g], self.inv[h]]

    def power(self, g: int, k: int) -> int:
        out = 0
        base = g if k >= 0 else int(self.inv[g])
        for _ in range(abs(k)):
            out = int(self.table[out, base])
        return out

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        k = 1
        pending = cur != 0
        while pending.any():
            k += 1
            cur = self.table[cur, np.arange(self.order)]
            done = pending & (cur == 0)
            orders[done] = k
            pending &= ~done
        orders[0] = 1
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def _classes(self) -> tuple[tuple[np.ndarray, ...], np.ndarray]:
        n = self.order
        # conj_table[h, g] = h g h^-1
        conj_table = self.table[self.table, self.inv[:, None]] if n else None
        class_of = np.full(n, -1, dtype=np.int64)
        classes = []
        for g in range(n):
            if class_of[g] >= 0:
                continue
            members = np.unique(conj_table[:, g])
            class_of[members] = len(classes)
            classes.append(members)
        class_of.setflags(write=False)
        return tuple(classes), class_of

    @property
    def classes(self) -> tuple[np.ndarray, ...]:
        return self._classes[0]

    @property
    def class_of(self) -> np.ndarray:
        return self._classes[1]

    def validate(self, samples: int = 10_000, seed: int = 0) -> None:
        """Check the group axioms; exhaustive up to order 64, sampled above."""
        n = self.order
        t = self.table
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        if t.min() < 0 or t.max() >= n:
            raise GroupError("multiplication table has entries out of range")
        if not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            raise GroupError("element 0 is not a two-sided identity")
        expect = np.arange(n)
        if not all(np.array_equal(np.sort(row), expect) for row in t) or not all(
            np.array_equal(np.sort(col), expect) for col in t.T
        ):
            raise GroupError("table is not a Latin square (no inverses)")
        if n <= ISOMORPHISM_ORDER_BOUND:
            a, b, c = np.meshgrid(expect, expect, expect, indexing="ij")
            bad = t[t[a, b], c] != t[a, t[b, c]]
        else:
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, n, size=(3, samples))
            bad = t[t[a, b], c] != t[a, t[b, c]]
        if bad.any():
            i = tuple(int(x[bad][0]) for x in (a, b, c))
            raise GroupError(f"multiplication is not associative at {i}")


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, g):
        return int(g) in self.members

    @cached_property
    def index_of(self) -> dict[int, int]:
        return {g: i for i, g in enumerate(self.members)}

    def as_group(self, name: str | None = None) -> FiniteGroup:
        """The subgroup as a standalone group; element i is ``members[i]``."""
        m = np.asarray(self.members)
        lookup = np.full(self.parent.order, -1, dtype=np.int64)
        lookup[m] = np.arange(len(m))
        table = lookup[self.parent.table[np.ix_(m, m)]]
        labels = tuple(self.parent.label(g) for g in m)
        return FiniteGroup(table, name or f"subgroup of {self.parent.name}", labels)


# constructors -----------------------------------------------------------------

def _check_cap(order: int, cap: int, what: str):
    if order > cap:
        raise GroupError(f"{what} has order {order}, above the cap of {cap}")


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    _check_cap(n, DEFAULT_ORDER_CAP, f"Z{n}")
    r = np.arange(n)
    return FiniteGroup((r[:, None] + r[None, :]) % n, f"Z{n}", tuple(map(str, r)), ("cyclic", n))


def cycle_notation(perm: Sequence[int]) -> str:
    seen = set()
    cycles = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        cycles.append(cyc)
    if not cycles:
        return "()"
    sep = "," if len(perm) > 9 else ""
    return "".join("(" + sep.join(str(k + 1) for k in c) + ")" for c in cycles)


def _perm_group(perms: np.ndarray, name: str, family=None) -> FiniteGroup:
    keys = {p.tobytes(): i for i, p in enumerate(perms)}
    # (g*h)[i] = g[h[i]]: apply h first
    table = np.empty((len(perms), len(perms)), dtype=np.int64)
    for i, g in enumerate(perms):
        prods = g[perms]
        table[i] = [keys[p.tobytes()] for p in prods]
    labels = tuple(cycle_notation(p) for p in perms)
    return FiniteGroup(table, name, labels, family, perms)


def symmetric(n: int) -> FiniteGroup:
    """S_n on points 0..n-1, elements in lexicographic order of one-line form."""
    if n < 1:
        raise GroupError("symmetric group needs n >= 1")
    _check_cap(factorial(n), DEFAULT_ORDER_CAP, f"S{n}")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    return _perm_group(perms, f"S{n}", ("symmetric", n))


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; element ``k + n*e`` is ``r^k s^e``."""
    if n < 2:
        raise GroupError("dihedral group needs n >= 2")
    _check_cap(2 * n, DEFAULT_ORDER_CAP, f"D{n}")
    idx = np.arange(2 * n)
    a, e = idx % n, idx // n
    # (r^a s^e)(r^b s^f) = r^(a + (-1)^e b) s^(e+f)
    sign = 1 - 2 * e[:, None]
    rot = (a[:, None] + sign * a[None, :]) % n
    ref = (e[:, None] + e[None, :]) % 2
    labels = tuple(
        ("e" if k == 0 else f"r{k}" if k > 1 else "r") if f == 0 else ("s" if k == 0 else f"r{k}s" if k > 1 else "rs")
        for k, f in zip(a, e)
    )
    return FiniteGroup(rot + n * ref, f"D{n}", labels, ("dihedral", n))


def from_permutations(degree: int, generators: Sequence[Sequence[int]], name: str | None = None,
                      cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Close a set of permutations of ``0..degree-1`` under composition."""
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    for g in gens:
        if g.shape != (degree,) or not np.array_equal(np.sort(g), np.arange(degree)):
            raise GroupError(f"{list(g)} is not a permutation of {degree} points")
    ident = np.arange(degree, dtype=np.int64)
    elems = [ident]
    seen = {ident.tobytes()}
    i = 0
    while i < len(elems):
        for g in gens:
            p = elems[i][g]
            key = p.tobytes()
            if key not in seen:
                seen.add(key)
                elems.append(p)
                if len(elems) > cap:
                    raise GroupError(f"permutation group exceeds the cap of {cap} elements")
        i += 1
    return _perm_group(np.array(elems), name or f"Perm({degree})")


def from_table(table, name: str = "G", labels=None) -> FiniteGroup:
    """Validate an explicit Cayley table, moving the identity to index 0."""
    t = np.asarray(table, dtype=np.int64)
    n = t.shape[0]
    if t.ndim != 2 or t.shape != (n, n) or n == 0 or t.min() < 0 or t.max() >= n:
        raise GroupError("Cayley table must be a square array with entries in range")
    ids = [e for e in range(n) if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))]
    if not ids:
        raise GroupError("Cayley table has no identity element")
    e = ids[0]
    order = [e] + [g for g in range(n) if g != e]
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    t = pos[t[np.ix_(order, order)]]
    if labels is not None:
        labels = tuple(str(labels[g]) for g in order)
    G = FiniteGroup(t, name, labels)
    G.validate()
    return G


def direct_product(*factors: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Elements in lexicographic order of component tuples (last factor fastest)."""
    if not factors:
        return cyclic(1)
    order = prod(f.order for f in factors)
    _check_cap(order, cap, "direct product")
    table = np.zeros((1, 1), dtype=np.int64)
    for f in factors:
        m = f.order
        table = (table[:, None, :, None] * m + f.table[None, :, None, :]).reshape(
            table.shape[0] * m, table.shape[1] * m
        )
    labels = tuple(
        "(" + ",".join(f.label(g) for f, g in zip(factors, comp)) + ")"
        for comp in itertools.product(*(range(f.order) for f in factors))
    )
    name = " x ".join(f.name for f in factors)
    return FiniteGroup(table, name, labels, ("product", tuple(factors)))


def build_group(spec) -> FiniteGroup:
    """Build a group from a GroupSpec mapping (see README for the JSON form)."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise GroupError(f"malformed group spec: {spec!r}")
    kind = spec["type"]
    try:
        if kind == "cyclic":
            return cyclic(int(spec["n"]))
        if kind == "symmetric":
            return symmetric(int(spec["n"]))
        if kind == "dihedral":
            return dihedral(int(spec["n"]))
        if kind == "cayley":
            return from_table(spec["table"], spec.get("name", "G"), spec.get("labels"))
        if kind == "perm":
            G = from_permutations(int(spec["degree"]), spec["generators"], spec.get("name"))
            G.validate()
            return G
        if kind == "product":
            factors = [build_group(f) for f in spec["factors"]]
            return direct_product(*factors)
    except KeyError as exc:
        raise GroupError(f"group spec of type {kind!r} is missing {exc}") from None
    raise GroupError(f"unknown group spec type {kind!r}")


# structure ---------------------------------------------------------------------

def conjugacy_classes(G: FiniteGroup) -> list[np.ndarray]:
    """Classes ordered by smallest member, so the identity class comes first."""
    return list(G.classes)


def centralizer(G: FiniteGroup, g: int) -> Subgroup:
    h = np.arange(G.order)
    return Subgroup(G, tuple(int(x) for x in h[G.table[h, g] == G.table[g, h]]))


def simultaneous_stabilizer(G: FiniteGroup, elements: Sequence[int]) -> Subgroup:
    keep = np.ones(G.order, dtype=bool)
    h = np.arange(G.order)
    for g in elements:
        keep &= G.table[h, g] == G.table[g, h]
    return Subgroup(G, tuple(int(x) for x in h[keep]))


def evaluate_word(G: FiniteGroup, word: Word, assignment: np.ndarray) -> np.ndarray:
    """Evaluate ``word`` on each row of ``assignment`` (shape (k, ngens))."""
    assignment = np.atleast_2d(assignment)
    acc = np.zeros(assignment.shape[0], dtype=np.int64)
    for gen, exp in word:
        if exp not in (1, -1):
            raise GroupError(f"word exponents must be +1 or -1, got {exp}")
        x = assignment[:, gen]
        acc = G.table[acc, x if exp == 1 else G.inv[x]]
    return acc


def solve_relations(G: FiniteGroup, ngens: int, relations: Sequence[Word],
                    cap: int = DEFAULT_ENUMERATION_CAP, chunk: int = 1 << 20) -> np.ndarray:
    """All tuples in G^ngens on which every relation evaluates to the identity.

    Rows come out in lexicographic order (first generator most significant).
    """
    for rel in relations:
        for gen, _ in rel:
            if not 0 <= gen < ngens:
                raise GroupError(f"relation uses generator {gen} but there are {ngens}")
    total = G.order**ngens
    if total > cap:
        raise EnumerationCapExceeded(
            f"enumerating |G|^{ngens} = {G.order}^{ngens} = {total} candidate tuples exceeds the cap of {cap}; "
            f"raise --cap to at least {total} to proceed"
        )
    if ngens == 0:
        return np.zeros((1, 0), dtype=np.int64)
    weights = G.order ** np.arange(ngens - 1, -1, -1, dtype=np.int64)
    found = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        tuples = (idx[:, None] // weights[None, :]) % G.order
        ok = np.ones(len(idx), dtype=bool)
        for rel in relations:
            ok &= evaluate_word(G, rel, tuples) == 0
        found.append(tuples[ok])
    return np.concatenate(found, axis=0)


def commutator_word(a: int, b: int) -> list[tuple[int, int]]:
    return [(a, 1), (b, 1), (a, -1), (b, -1)]


# isomorphism -----------------------------------------------------------------------

def generating_set(G: FiniteGroup) -> list[int]:
    """A small generating set, chosen greedily by element order."""
    gens: list[int] = []
    reached = np.zeros(G.order, dtype=bool)
    reached[0] = True
    by_order = sorted(range(G.order), key=lambda g: (-G.element_orders[g], g))
    while not reached.all():
        g = next(x for x in by_order if not reached[x])
        gens.append(g)
        reached = _closure(G, gens)
    return gens


def _closure(G: FiniteGroup, gens: Sequence[int]) -> np.ndarray:
    reached = np.zeros(G.order, dtype=bool)
    reached[0] = True
    frontier = [0]
    while frontier:
        nxt = G.table[np.asarray(frontier)][:, list(gens)].ravel()
        new = np.unique(nxt[~reached[nxt]])
        reached[new] = True
        frontier = list(new)
    return reached


def _invariants(G: FiniteGroup):
    orders = np.bincount(G.element_orders, minlength=G.order + 1)
    class_sizes = sorted(len(c) for c in G.classes)
    return G.order, G.is_abelian, tuple(orders), tuple(class_sizes)


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> np.ndarray | None:
    """An isomorphism G -> H as an index array, or None.

    Backtracks over images of a generating set of G; both orders must be at
    most 64.
    """
    for X in (G, H):
        if X.order > ISOMORPHISM_ORDER_BOUND:
            raise UnsupportedError(
                f"isomorphism test supports orders <= {ISOMORPHISM_ORDER_BOUND}, got {X.order}"
            )
    if _invariants(G) != _invariants(H):
        return None
    gens = generating_set(G)
    candidates = [
        [h for h in range(H.order) if H.element_orders[h] == G.element_orders[g]
         and len(H.classes[H.class_of[h]]) == len(G.classes[G.class_of[g]])]
        for g in gens
    ]

    def extend(images):
        phi = np.full(G.order, -1, dtype=np.int64)
        phi[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, img in zip(gens, images):
                    y = G.table[x, g]
                    val = H.table[phi[x], img]
                    if phi[y] < 0:
                        phi[y] = val
                        nxt.append(y)
                    elif phi[y] != val:
                        return None
            frontier = nxt
        reached = phi[phi >= 0]
        if len(np.unique(reached)) != len(reached):
            return None
        return phi

    def search(images):
        phi = extend(images)
        if phi is None:
            return None
        if len(images) == len(gens):
            return phi
        for h in candidates[len(images)]:
            out = search(images + [h])
            if out is not None:
                return out
        return None

    phi = search([])
    if phi is None or (phi < 0).any():
        return None
    return phi


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None
