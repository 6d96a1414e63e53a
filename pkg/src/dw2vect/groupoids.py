"""Explicit finite groupoids, functors, spans and weak pullbacks.

Every groupoid is materialized: objects are ``0 .. n_objects-1`` and morphisms
``0 .. n_morphisms-1`` with ``src``/``tgt`` arrays.  Composition, identities
and inverses are vectorized over index arrays, and ``compose(f, g)`` means
``f o g`` (apply ``g`` first), defined when ``tgt[g] == src[f]``.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import Callable, Hashable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cyclotomic import Phase
from .errors import GroupoidError, UnsupportedError
from .groups import (
    ISOMORPHISM_ORDER_BOUND,
    FiniteGroup,
    Subgroup,
    cyclic,
    direct_product,
    is_isomorphic,
)

EXHAUSTIVE_PAIR_LIMIT = 4_000_000


def _ranges(counts: np.ndarray) -> np.ndarray:
    """``concatenate([arange(c) for c in counts])`` without the Python loop."""
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    starts = np.cumsum(counts) - counts
    return np.arange(total, dtype=np.int64) - np.repeat(starts, counts)


class FiniteGroupoid:
    """Base class; subclasses provide ``src``, ``tgt`` and the three operations."""

    n_objects: int
    n_morphisms: int
    src: np.ndarray
    tgt: np.ndarray

    def compose(self, f, g):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def inverse(self, f):
        raise NotImplementedError

    def object_label(self, x: int) -> str:
        return str(x)

    def morphism_payload(self, f: int):
        return int(f)

    @property
    def key(self) -> Hashable:
        """Structural identity; two groupoids with equal keys are the same."""
        return ("id", id(self))

    def same_as(self, other: "FiniteGroupoid") -> bool:
        return self is other or self.key == other.key

    def __repr__(self):
        return f"{type(self).__name__}(objects={self.n_objects}, morphisms={self.n_morphisms})"

    # adjacency ------------------------------------------------------------

    @cached_property
    def _out(self):
        order = np.argsort(self.src, kind="stable")
        degree = np.bincount(self.src, minlength=self.n_objects)
        start = np.cumsum(degree) - degree
        rank = np.empty(self.n_morphisms, dtype=np.int64)
        rank[order] = _ranges(degree)
        return order, start, degree, rank

    @property
    def out_degree(self) -> np.ndarray:
        return self._out[2]

    def out_morphisms(self, x: int) -> np.ndarray:
        order, start, degree, _ = self._out
        return order[start[x] : start[x] + degree[x]]

    def out_rank(self, f) -> np.ndarray:
        """Position of ``f`` among the morphisms leaving ``src[f]``."""
        return self._out[3][f]

    def out_at(self, x, rank) -> np.ndarray:
        order, start, _, _ = self._out
        return order[start[x] + rank]

    def composable_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """All ``(f, g)`` with ``tgt[g] == src[f]``."""
        order, start, degree, _ = self._out
        counts = degree[self.tgt]
        g = np.repeat(np.arange(self.n_morphisms), counts)
        f = order[np.repeat(start[self.tgt], counts) + _ranges(counts)]
        return f, g

    def composable_triples(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All ``(f, g, h)`` with ``f o g o h`` defined."""
        g, h = self.composable_pairs()
        order, start, degree, _ = self._out
        counts = degree[self.tgt[g]]
        g2 = np.repeat(g, counts)
        h2 = np.repeat(h, counts)
        f = order[np.repeat(start[self.tgt[g]], counts) + _ranges(counts)]
        return f, g2, h2

    def count_composable_pairs(self) -> int:
        return int(self.out_degree[self.tgt].sum())

    # derived structure -----------------------------------------------------

    def validate(self, seed: int = 0) -> None:
        """Check the groupoid axioms (exhaustive below a size limit, sampled above)."""
        ids = self.identity(np.arange(self.n_objects))
        if not (np.array_equal(self.src[ids], np.arange(self.n_objects))
                and np.array_equal(self.tgt[ids], np.arange(self.n_objects))):
            raise GroupoidError("identity morphisms have wrong endpoints")
        m = np.arange(self.n_morphisms)
        if not np.array_equal(self.compose(m, ids[self.src]), m) or not np.array_equal(
            self.compose(ids[self.tgt], m), m
        ):
            raise GroupoidError("identities are not neutral")
        inv = self.inverse(m)
        if not np.array_equal(self.compose(inv, m), ids[self.src]) or not np.array_equal(
            self.compose(m, inv), ids[self.tgt]
        ):
            raise GroupoidError("inverse morphisms are not inverses")
        if self.count_composable_pairs() * 4 <= EXHAUSTIVE_PAIR_LIMIT:
            f, g, h = self.composable_triples()
        else:
            rng = np.random.default_rng(seed)
            f, g = self.composable_pairs()
            pick = rng.integers(0, len(f), size=10_000)
            f, g = f[pick], g[pick]
            x = self.src[g]
            h = self.inverse(self.out_at(x, rng.integers(0, self.out_degree[x])))
        fg = self.compose(f, g)
        if not (np.array_equal(self.src[fg], self.src[g]) and np.array_equal(self.tgt[fg], self.tgt[f])):
            raise GroupoidError("composite has wrong endpoints")
        if not np.array_equal(self.compose(fg, h), self.compose(f, self.compose(g, h))):
            raise GroupoidError("composition is not associative")

    @cached_property
    def skeleton(self) -> "Skeleton":
        return _generic_skeleton(self)


# concrete groupoids -------------------------------------------------------------

class ActionGroupoid(FiniteGroupoid):
    """Action groupoid of ``G`` acting on points ``0 .. n-1``.

    ``act[g, x]`` is the image of point ``x``; morphism ``g * n + x`` is
    ``(g, x): x -> act[g, x]``.
    """

    def __init__(self, group: FiniteGroup, act: np.ndarray, labels: Sequence[str] | None = None,
                 carrier: np.ndarray | None = None, name: str = ""):
        act = np.asarray(act, dtype=np.int64)
        if act.ndim != 2 or act.shape[0] != group.order:
            raise GroupoidError("action table must have one row per group element")
        self.group = group
        self.act = act
        self.n_points = act.shape[1]
        self.carrier = carrier
        self._labels = list(labels) if labels is not None else None
        self.name = name
        self.n_objects = self.n_points
        self.n_morphisms = group.order * self.n_points
        m = np.arange(self.n_morphisms)
        self.src = m % self.n_points
        self.tgt = act.ravel()

    @property
    def key(self):
        return ("action", self.group.table.tobytes(), self.act.tobytes())

    def validate_action(self) -> None:
        n = self.n_points
        if self.act.min(initial=0) < 0 or self.act.max(initial=0) >= max(n, 1):
            raise GroupoidError("action sends a point outside the carrier")
        if not np.array_equal(self.act[0], np.arange(n)):
            raise GroupoidError("identity element does not act trivially")
        G = self.group
        # act(gh, x) == act(g, act(h, x))
        lhs = self.act[G.table]  # lhs[g, h, x] = act[g*h, x]
        rhs = self.act[:, self.act]  # rhs[g, h, x] = act[g, act[h, x]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            g, h, x = bad[0]
            raise GroupoidError(f"action axiom fails for g={g}, h={h}, point={x}")

    def element_of(self, f):
        return np.asarray(f) // self.n_points

    def morphism(self, g, x):
        return np.asarray(g) * self.n_points + np.asarray(x)

    def compose(self, f, g):
        n = self.n_points
        return self.group.table[np.asarray(f) // n, np.asarray(g) // n] * n + np.asarray(g) % n

    def identity(self, x):
        return np.asarray(x)

    def inverse(self, f):
        f = np.asarray(f)
        n = self.n_points
        return self.group.inv[f // n] * n + self.tgt[f]

    def object_label(self, x):
        return self._labels[x] if self._labels is not None else str(x)

    def morphism_payload(self, f):
        return (self.group.label(int(f) // self.n_points), self.object_label(int(f) % self.n_points))

    @cached_property
    def skeleton(self) -> "Skeleton":
        n = self.n_points
        G = self.group
        rows = np.repeat(np.arange(n), G.order)
        cols = self.act.T.ravel()
        _, comp = connected_components(coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n)),
                                       directed=False)
        reps, class_of = _order_components(comp)
        transport = np.empty(n, dtype=np.int64)
        for r in reps:
            images = self.act[:, r]
            pts, first = np.unique(images, return_index=True)
            transport[pts] = first * n + r
        aut_members, aut_groups = [], []
        for r in reps:
            stab = np.nonzero(self.act[:, r] == r)[0]
            aut_members.append(stab * n + r)
            aut_groups.append(Subgroup(G, tuple(int(s) for s in stab)).as_group(f"Aut({self.object_label(r)})"))
        return Skeleton(self, reps, class_of, transport, aut_members, aut_groups)


class ProductGroupoid(FiniteGroupoid):
    """Cartesian product; objects and morphisms in mixed radix, first factor slowest."""

    def __init__(self, factors: Sequence[FiniteGroupoid]):
        self.factors = tuple(factors)
        self.obj_radix = np.array([X.n_objects for X in self.factors], dtype=np.int64)
        self.mor_radix = np.array([X.n_morphisms for X in self.factors], dtype=np.int64)
        self.n_objects = int(prod(self.obj_radix.tolist()))
        self.n_morphisms = int(prod(self.mor_radix.tolist()))
        m = self.split_morphisms(np.arange(self.n_morphisms))
        self.src = self.join_objects([X.src[c] for X, c in zip(self.factors, m)])
        self.tgt = self.join_objects([X.tgt[c] for X, c in zip(self.factors, m)])

    @property
    def key(self):
        return ("product",) + tuple(X.key for X in self.factors)

    @staticmethod
    def _split(idx, radix):
        idx = np.asarray(idx)
        out = []
        for r in radix[::-1]:
            out.append(idx % r)
            idx = idx // r
        return out[::-1]

    @staticmethod
    def _join(parts, radix):
        acc = np.zeros(np.shape(parts[0]) if parts else (), dtype=np.int64)
        for p, r in zip(parts, radix):
            acc = acc * r + np.asarray(p)
        return acc

    def split_objects(self, x):
        return self._split(x, self.obj_radix)

    def split_morphisms(self, f):
        return self._split(f, self.mor_radix)

    def join_objects(self, parts):
        return self._join(parts, self.obj_radix)

    def join_morphisms(self, parts):
        return self._join(parts, self.mor_radix)

    def compose(self, f, g):
        fs, gs = self.split_morphisms(f), self.split_morphisms(g)
        return self.join_morphisms([X.compose(a, b) for X, a, b in zip(self.factors, fs, gs)])

    def identity(self, x):
        return self.join_morphisms([X.identity(a) for X, a in zip(self.factors, self.split_objects(x))])

    def inverse(self, f):
        return self.join_morphisms([X.inverse(a) for X, a in zip(self.factors, self.split_morphisms(f))])

    def object_label(self, x):
        return ",".join(X.object_label(int(a)) for X, a in zip(self.factors, self.split_objects(x)))

    def morphism_payload(self, f):
        return tuple(X.morphism_payload(int(a)) for X, a in zip(self.factors, self.split_morphisms(f)))

    @cached_property
    def skeleton(self) -> "Skeleton":
        sks = [X.skeleton for X in self.factors]
        counts = [len(s.reps) for s in sks]
        combos = np.indices(counts).reshape(len(counts), -1) if counts else np.zeros((0, 1), dtype=np.int64)
        reps = self.join_objects([s.reps[c] for s, c in zip(sks, combos)])
        class_of = self._join([s.class_of[a] for s, a in zip(sks, self.split_objects(np.arange(self.n_objects)))],
                              np.array(counts, dtype=np.int64))
        transport = self.join_morphisms([s.transport[a] for s, a in zip(sks, self.split_objects(np.arange(self.n_objects)))])
        aut_members, aut_groups = [], []
        for col in combos.T:
            members = [s.aut_members[c] for s, c in zip(sks, col)]
            grids = np.meshgrid(*members, indexing="ij") if members else []
            aut_members.append(self.join_morphisms([g.ravel() for g in grids]) if members
                               else np.zeros(1, dtype=np.int64))
            aut_groups.append(direct_product(*[s.aut_groups[c] for s, c in zip(sks, col)]))
        return Skeleton(self, np.asarray(reps, dtype=np.int64).reshape(-1), class_of, transport,
                        aut_members, aut_groups)


class GroupsGroupoid(FiniteGroupoid):
    """Disjoint union of one-object groupoids, one per group."""

    def __init__(self, groups: Sequence[FiniteGroup], labels: Sequence[str] | None = None):
        self.groups = tuple(groups)
        self._labels = list(labels) if labels is not None else [str(i) for i in range(len(self.groups))]
        sizes = np.array([G.order for G in self.groups], dtype=np.int64)
        self.offsets = np.cumsum(sizes) - sizes
        self.n_objects = len(self.groups)
        self.n_morphisms = int(sizes.sum())
        self.src = np.repeat(np.arange(self.n_objects), sizes)
        self.tgt = self.src
        self._elem = np.arange(self.n_morphisms) - self.offsets[self.src]
        total = self.n_morphisms
        self._mul = [G.table for G in self.groups]
        self._inv = np.concatenate([G.inv for G in self.groups]) if total else np.zeros(0, dtype=np.int64)

    @property
    def key(self):
        return ("groups",) + tuple(G.table.tobytes() for G in self.groups)

    def compose(self, f, g):
        f, g = np.asarray(f), np.asarray(g)
        obj = self.src[g]
        out = np.empty(np.shape(f), dtype=np.int64)
        for i in np.unique(obj):
            sel = obj == i
            out[sel] = self.offsets[i] + self._mul[i][self._elem[f[sel]], self._elem[g[sel]]]
        return out

    def identity(self, x):
        return self.offsets[np.asarray(x)]

    def inverse(self, f):
        f = np.asarray(f)
        return self.offsets[self.src[f]] + self._inv[f]

    def object_label(self, x):
        return self._labels[x]

    def morphism_payload(self, f):
        i = int(self.src[f])
        return (self.groups[i].label(int(self._elem[f])), self._labels[i])

    @cached_property
    def skeleton(self) -> "Skeleton":
        n = self.n_objects
        return Skeleton(self, np.arange(n), np.arange(n), self.offsets.copy(),
                        [self.offsets[i] + np.arange(G.order) for i, G in enumerate(self.groups)],
                        list(self.groups))


def terminal_groupoid() -> GroupsGroupoid:
    return GroupsGroupoid([cyclic(1)], ["*"])


def discrete_groupoid(k: int, labels=None) -> GroupsGroupoid:
    return GroupsGroupoid([cyclic(1)] * k, labels)


def one_object_groupoid(G: FiniteGroup) -> GroupsGroupoid:
    return GroupsGroupoid([G], ["*"])


def action_groupoid(G: FiniteGroup, carrier: Sequence, action: Callable, labels=None) -> ActionGroupoid:
    """Action groupoid from a carrier list and ``action(g, point) -> point``."""
    points = list(carrier)
    index = {p: i for i, p in enumerate(points)}
    act = np.empty((G.order, len(points)), dtype=np.int64)
    for g in range(G.order):
        for i, p in enumerate(points):
            q = action(g, p)
            if q not in index:
                raise GroupoidError(f"action sends {p!r} to {q!r}, outside the carrier")
            act[g, i] = index[q]
    X = ActionGroupoid(G, act, labels or [str(p) for p in points])
    X.validate_action()
    return X


def conjugation_groupoid(G: FiniteGroup, tuples: np.ndarray, name: str = "") -> ActionGroupoid:
    """G acting by simultaneous conjugation on a conjugation-closed set of tuples.

    ``tuples`` has shape (k, m) and must be sorted lexicographically.
    """
    tuples = np.asarray(tuples, dtype=np.int64).reshape(len(tuples), -1)
    k, m = tuples.shape
    weights = G.order ** np.arange(m - 1, -1, -1, dtype=np.int64)
    codes = tuples @ weights
    if k > 1 and np.any(np.diff(codes) <= 0):
        raise GroupoidError("carrier tuples must be sorted and distinct")
    g = np.arange(G.order)[:, None, None]
    conj = G.table[G.table[g, tuples[None]], G.inv[g]]  # (|G|, k, m)
    ccodes = conj @ weights
    act = np.searchsorted(codes, ccodes)
    act = np.minimum(act, max(k - 1, 0))
    if k and not np.array_equal(codes[act], ccodes):
        raise GroupoidError("carrier is not closed under conjugation")
    labels = [",".join(G.label(int(e)) for e in row) for row in tuples]
    return ActionGroupoid(G, act.reshape(G.order, k), labels, carrier=tuples, name=name)


def adjoint_groupoid(G: FiniteGroup) -> ActionGroupoid:
    """G // G: the group acting on itself by conjugation."""
    return conjugation_groupoid(G, np.arange(G.order)[:, None], name=f"{G.name}//{G.name}")


def product_groupoid(*factors: FiniteGroupoid) -> FiniteGroupoid:
    if len(factors) == 1:
        return factors[0]
    if not factors:
        return terminal_groupoid()
    return ProductGroupoid(factors)


class IsoCommaGroupoid(FiniteGroupoid):
    """Weak pullback of ``F: X1 -> B`` and ``H: X2 -> B``.

    Objects are triples ``(x1, f, x2)`` with ``f: F(x1) -> H(x2)`` in ``B``;
    a morphism ``(g1, g2): (x1, f, x2) -> (x1', f', x2')`` satisfies
    ``f' o F(g1) = H(g2) o f``.
    """

    def __init__(self, F: "GroupoidFunctor", H: "GroupoidFunctor"):
        if not F.target.same_as(H.target):
            raise GroupoidError("weak pullback needs functors into the same groupoid")
        self.F, self.H = F, H
        X1, X2, B = F.source, H.source, F.target
        # objects, ordered by (x1, f, x2)
        b1 = F.obj_map
        deg_b = B.out_degree
        x1 = np.repeat(np.arange(X1.n_objects), deg_b[b1])
        f = B.out_at(np.repeat(b1, deg_b[b1]), _ranges(deg_b[b1]))
        fiber_order = np.argsort(H.obj_map, kind="stable")
        fiber_size = np.bincount(H.obj_map, minlength=B.n_objects)
        fiber_start = np.cumsum(fiber_size) - fiber_size
        cnt = fiber_size[B.tgt[f]]
        self.obj_x1 = np.repeat(x1, cnt)
        self.obj_f = np.repeat(f, cnt)
        self.obj_x2 = fiber_order[np.repeat(fiber_start[B.tgt[f]], cnt) + _ranges(cnt)]
        self.n_objects = len(self.obj_x1)
        self._keys = self._obj_key(self.obj_x1, self.obj_f, self.obj_x2)
        # morphisms: for each object, every (g1 out of x1) x (g2 out of x2)
        d1 = X1.out_degree[self.obj_x1]
        d2 = X2.out_degree[self.obj_x2]
        per = d1 * d2
        self.offsets = np.cumsum(per) - per
        self.n_morphisms = int(per.sum())
        self.mor_obj = np.repeat(np.arange(self.n_objects), per)
        within = _ranges(per)
        dd2 = d2[self.mor_obj]
        self.mor_g1 = X1.out_at(self.obj_x1[self.mor_obj], within // dd2)
        self.mor_g2 = X2.out_at(self.obj_x2[self.mor_obj], within % dd2)
        self.src = self.mor_obj
        new_f = B.compose(B.compose(H.mor_map[self.mor_g2], self.obj_f[self.mor_obj]),
                          B.inverse(F.mor_map[self.mor_g1]))
        self.tgt = self.lookup(X1.tgt[self.mor_g1], new_f, X2.tgt[self.mor_g2])

    def _obj_key(self, x1, f, x2):
        B, X2 = self.F.target, self.H.source
        return (np.asarray(x1) * B.n_morphisms + np.asarray(f)) * X2.n_objects + np.asarray(x2)

    def lookup(self, x1, f, x2) -> np.ndarray:
        key = self._obj_key(x1, f, x2)
        pos = np.searchsorted(self._keys, key)
        pos = np.minimum(pos, max(self.n_objects - 1, 0))
        if not np.array_equal(self._keys[pos], key):
            raise GroupoidError("triple is not an object of the weak pullback")
        return pos

    def morphism(self, obj, g1, g2):
        X1, X2 = self.F.source, self.H.source
        d2 = X2.out_degree[self.obj_x2[obj]]
        return self.offsets[obj] + X1.out_rank(g1) * d2 + X2.out_rank(g2)

    def compose(self, f, g):
        X1, X2 = self.F.source, self.H.source
        return self.morphism(self.mor_obj[g], X1.compose(self.mor_g1[f], self.mor_g1[g]),
                             X2.compose(self.mor_g2[f], self.mor_g2[g]))

    def identity(self, x):
        x = np.asarray(x)
        X1, X2 = self.F.source, self.H.source
        return self.morphism(x, X1.identity(self.obj_x1[x]), X2.identity(self.obj_x2[x]))

    def inverse(self, f):
        f = np.asarray(f)
        X1, X2 = self.F.source, self.H.source
        return self.morphism(self.tgt[f], X1.inverse(self.mor_g1[f]), X2.inverse(self.mor_g2[f]))

    def object_label(self, x):
        X1, X2, B = self.F.source, self.H.source, self.F.target
        return (f"({X1.object_label(int(self.obj_x1[x]))}; {B.morphism_payload(int(self.obj_f[x]))}; "
                f"{X2.object_label(int(self.obj_x2[x]))})")

    def morphism_payload(self, f):
        X1, X2 = self.F.source, self.H.source
        return (X1.morphism_payload(int(self.mor_g1[f])), X2.morphism_payload(int(self.mor_g2[f])))

    @cached_property
    def projections(self) -> tuple["GroupoidFunctor", "GroupoidFunctor"]:
        return (GroupoidFunctor(self, self.F.source, self.obj_x1, self.mor_g1),
                GroupoidFunctor(self, self.H.source, self.obj_x2, self.mor_g2))


# skeleta ------------------------------------------------------------------------

def _order_components(comp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Relabel components so they are ordered by their smallest object."""
    n = len(comp)
    first = np.full(comp.max() + 1 if n else 0, n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n))
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return first[order], relabel[comp]


@dataclass(eq=False)
class Skeleton:
    """One representative per isomorphism class, with its automorphism group.

    ``transport[y]`` is a morphism ``rep -> y`` from the representative of
    ``y``'s class; ``aut_members[c]`` lists the morphisms of ``Aut(rep_c)``
    (identity first) and element ``i`` of ``aut_groups[c]`` is
    ``aut_members[c][i]``.
    """

    groupoid: FiniteGroupoid
    reps: np.ndarray
    class_of: np.ndarray
    transport: np.ndarray
    aut_members: list
    aut_groups: list

    def __len__(self):
        return len(self.reps)

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.class_of, minlength=len(self.reps))

    @property
    def aut_orders(self) -> list[int]:
        return [G.order for G in self.aut_groups]

    @cached_property
    def labels(self) -> list[str]:
        return [self.groupoid.object_label(int(r)) for r in self.reps]

    @cached_property
    def _position(self) -> np.ndarray:
        pos = np.full(self.groupoid.n_morphisms, -1, dtype=np.int64)
        for members in self.aut_members:
            pos[members] = np.arange(len(members))
        return pos

    def to_representative(self, k) -> tuple[np.ndarray, np.ndarray]:
        """Conjugate endomorphisms ``k`` back to their class representative.

        Returns ``(class index, element index in aut_groups[class])`` for
        ``u^-1 o k o u`` with ``u = transport[src k]``.
        """
        X = self.groupoid
        k = np.asarray(k)
        u = self.transport[X.src[k]]
        m = X.compose(X.inverse(u), X.compose(k, u))
        pos = self._position[m]
        if np.any(pos < 0):
            raise GroupoidError("morphism is not an endomorphism")
        return self.class_of[X.src[k]], pos

    def summary(self) -> list[dict]:
        return [
            {"label": lab, "size": int(s), "aut_order": G.order}
            for lab, s, G in zip(self.labels, self.sizes, self.aut_groups)
        ]

    def as_groupoid(self) -> GroupsGroupoid:
        return GroupsGroupoid(self.aut_groups, self.labels)


def _generic_skeleton(X: FiniteGroupoid) -> Skeleton:
    n = X.n_objects
    _, comp = connected_components(
        coo_matrix((np.ones(X.n_morphisms), (X.src, X.tgt)), shape=(n, n)), directed=False
    )
    reps, class_of = _order_components(comp) if n else (np.zeros(0, dtype=np.int64), comp)
    rep_of = reps[class_of]
    from_rep = np.nonzero(X.src == rep_of[X.src])[0]
    targets, first = np.unique(X.tgt[from_rep], return_index=True)
    transport = np.empty(n, dtype=np.int64)
    transport[targets] = from_rep[first]
    aut_members, aut_groups = [], []
    for r in reps:
        ident = int(X.identity(np.array([r]))[0])
        loops = from_rep[X.tgt[from_rep] == r]
        members = np.concatenate([[ident], loops[loops != ident]]).astype(np.int64)
        lookup = {int(m): i for i, m in enumerate(members)}
        a, b = np.meshgrid(members, members, indexing="ij")
        prods = X.compose(a.ravel(), b.ravel())
        table = np.array([lookup[int(p)] for p in prods], dtype=np.int64).reshape(len(members), -1)
        aut_members.append(members)
        aut_groups.append(FiniteGroup(table, f"Aut({X.object_label(int(r))})"))
    return Skeleton(X, reps, class_of, transport, aut_members, aut_groups)


def skeleton(X: FiniteGroupoid) -> Skeleton:
    return X.skeleton


def groupoid_cardinality(X: FiniteGroupoid) -> Fraction:
    return sum((Fraction(1, G.order) for G in X.skeleton.aut_groups), Fraction(0))


@dataclass(frozen=True)
class PhaseSum:
    """A formal sum of ``weight * exp(2 pi i phase)`` terms, like terms merged."""

    terms: tuple[tuple[Phase, Fraction], ...]

    @classmethod
    def of(cls, pairs) -> "PhaseSum":
        acc: dict[Phase, Fraction] = {}
        for ph, w in pairs:
            acc[ph] = acc.get(ph, Fraction(0)) + Fraction(w)
        return cls(tuple(sorted((p, w) for p, w in acc.items() if w != 0)))

    def __add__(self, other):
        return PhaseSum.of(self.terms + other.terms)

    def __mul__(self, other):
        return PhaseSum.of((p * q, a * b) for p, a in self.terms for q, b in other.terms)

    def scale(self, c) -> "PhaseSum":
        return PhaseSum.of((p, w * c) for p, w in self.terms)

    def to_complex(self) -> complex:
        return complex(sum(float(w) * p.to_complex() for p, w in self.terms))

    def as_fraction(self) -> Fraction | None:
        """The value when it is rational, decided exactly."""
        from .cyclotomic import as_rational, lcm

        if not self.terms:
            return Fraction(0)
        n = lcm(*(p.value.denominator for p, _ in self.terms))
        den = lcm(*(w.denominator for _, w in self.terms))
        vec = np.zeros(n, dtype=object)
        for p, w in self.terms:
            vec[int(p.value * n)] += int(w * den)
        try:
            return Fraction(int(as_rational(vec.astype(np.int64))), den)
        except ValueError:
            return None

    def __str__(self):
        if not self.terms:
            return "0"
        q = self.as_fraction()
        if q is not None:
            return str(q)
        return " + ".join(f"{w}*e({p})" if not p.is_trivial else str(w) for p, w in self.terms)


def weighted_cardinality(X: FiniteGroupoid, weight) -> PhaseSum:
    """``sum over classes of weight(x) / |Aut(x)|`` as an exact phase sum.

    ``weight`` is a degree-0 cochain (or anything with ``phase(x)``) and must be
    constant on isomorphism classes.
    """
    from .cocycles import as_cochain  # local import: cocycles builds on this module

    beta = as_cochain(X, weight, degree=0)
    vals = beta.values(np.arange(X.n_objects))
    bad = np.nonzero(vals[X.src] != vals[X.tgt])[0]
    if len(bad):
        m = int(bad[0])
        raise GroupoidError(
            f"weight is not constant on isomorphism classes: objects {X.object_label(int(X.src[m]))} "
            f"and {X.object_label(int(X.tgt[m]))} differ"
        )
    sk = X.skeleton
    return PhaseSum.of(
        (Phase.of(int(vals[r]), beta.modulus), Fraction(1, G.order)) for r, G in zip(sk.reps, sk.aut_groups)
    )


def equivalent_skeletons(X: FiniteGroupoid, Y: FiniteGroupoid) -> bool:
    """Whether the classes of X and Y match up with isomorphic automorphism groups."""
    A, B = X.skeleton.aut_groups, Y.skeleton.aut_groups
    if len(A) != len(B):
        return False
    for G in list(A) + list(B):
        if G.order > ISOMORPHISM_ORDER_BOUND:
            raise UnsupportedError(f"automorphism group of order {G.order} exceeds the isomorphism bound")
    if Counter(G.order for G in A) != Counter(G.order for G in B):
        return False
    unmatched = list(B)
    for G in A:
        for i, H in enumerate(unmatched):
            if G.order == H.order and is_isomorphic(G, H):
                del unmatched[i]
                break
        else:
            return False
    return True


# functors and spans -------------------------------------------------------------

@dataclass(eq=False)
class GroupoidFunctor:
    source: FiniteGroupoid
    target: FiniteGroupoid
    obj_map: np.ndarray
    mor_map: np.ndarray

    def __post_init__(self):
        self.obj_map = np.asarray(self.obj_map, dtype=np.int64).reshape(self.source.n_objects)
        self.mor_map = np.asarray(self.mor_map, dtype=np.int64).reshape(self.source.n_morphisms)

    def validate(self, seed: int = 0) -> None:
        S, T = self.source, self.target
        if len(self.obj_map) and (self.obj_map.min() < 0 or self.obj_map.max() >= T.n_objects):
            raise GroupoidError("functor object map leaves the target")
        if not np.array_equal(T.src[self.mor_map], self.obj_map[S.src]) or not np.array_equal(
            T.tgt[self.mor_map], self.obj_map[S.tgt]
        ):
            raise GroupoidError("functor does not preserve sources and targets")
        if not np.array_equal(self.mor_map[S.identity(np.arange(S.n_objects))], T.identity(self.obj_map)):
            raise GroupoidError("functor does not preserve identities")
        if S.count_composable_pairs() <= EXHAUSTIVE_PAIR_LIMIT:
            f, g = S.composable_pairs()
        else:
            f, g = S.composable_pairs()
            pick = np.random.default_rng(seed).integers(0, len(f), size=100_000)
            f, g = f[pick], g[pick]
        bad = np.nonzero(self.mor_map[S.compose(f, g)] != T.compose(self.mor_map[f], self.mor_map[g]))[0]
        if len(bad):
            raise GroupoidError(f"functor does not preserve the composite of morphisms {int(f[bad[0]])}, {int(g[bad[0]])}")

    def then(self, other: "GroupoidFunctor") -> "GroupoidFunctor":
        """``other o self``."""
        if not self.target.same_as(other.source):
            raise GroupoidError("functors are not composable")
        return GroupoidFunctor(self.source, other.target, other.obj_map[self.obj_map], other.mor_map[self.mor_map])


class FullSubgroupoid(FiniteGroupoid):
    """The full subgroupoid of ``parent`` on the objects flagged in ``keep``."""

    def __init__(self, parent: FiniteGroupoid, keep: np.ndarray):
        keep = np.asarray(keep, dtype=bool).reshape(parent.n_objects)
        self.parent = parent
        self.objects = np.nonzero(keep)[0]
        self.morphisms = np.nonzero(keep[parent.src] & keep[parent.tgt])[0]
        self._obj_pos = np.full(parent.n_objects, -1, dtype=np.int64)
        self._obj_pos[self.objects] = np.arange(len(self.objects))
        self._mor_pos = np.full(parent.n_morphisms, -1, dtype=np.int64)
        self._mor_pos[self.morphisms] = np.arange(len(self.morphisms))
        self.n_objects = len(self.objects)
        self.n_morphisms = len(self.morphisms)
        self.src = self._obj_pos[parent.src[self.morphisms]]
        self.tgt = self._obj_pos[parent.tgt[self.morphisms]]

    def compose(self, f, g):
        return self._mor_pos[self.parent.compose(self.morphisms[f], self.morphisms[g])]

    def identity(self, x):
        return self._mor_pos[self.parent.identity(self.objects[x])]

    def inverse(self, f):
        return self._mor_pos[self.parent.inverse(self.morphisms[f])]

    def object_label(self, x):
        return self.parent.object_label(int(self.objects[x]))

    def morphism_payload(self, f):
        return self.parent.morphism_payload(int(self.morphisms[f]))

    @cached_property
    def inclusion(self) -> "GroupoidFunctor":
        return GroupoidFunctor(self, self.parent, self.objects, self.morphisms)


def identity_functor(X: FiniteGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(X, X, np.arange(X.n_objects), np.arange(X.n_morphisms))


def to_terminal(X: FiniteGroupoid, terminal: FiniteGroupoid | None = None) -> GroupoidFunctor:
    T = terminal or terminal_groupoid()
    return GroupoidFunctor(X, T, np.zeros(X.n_objects), np.zeros(X.n_morphisms))


def product_functor(*functors: GroupoidFunctor) -> GroupoidFunctor:
    if len(functors) == 1:
        return functors[0]
    S = product_groupoid(*(F.source for F in functors))
    T = product_groupoid(*(F.target for F in functors))
    obj = [F.obj_map[p] for F, p in zip(functors, S.split_objects(np.arange(S.n_objects)))]
    mor = [F.mor_map[p] for F, p in zip(functors, S.split_morphisms(np.arange(S.n_morphisms)))]
    return GroupoidFunctor(S, T, T.join_objects(obj), T.join_morphisms(mor))


@dataclass(eq=False)
class GroupoidSpan:
    """``left.target <- apex -> right.target``."""

    apex: FiniteGroupoid
    left: GroupoidFunctor
    right: GroupoidFunctor
    name: str = ""

    def __post_init__(self):
        if self.left.source is not self.apex or self.right.source is not self.apex:
            raise GroupoidError("span legs must start at the apex")

    @property
    def source(self) -> FiniteGroupoid:
        return self.left.target

    @property
    def target(self) -> FiniteGroupoid:
        return self.right.target

    def validate(self):
        self.left.validate()
        self.right.validate()


def identity_span(X: FiniteGroupoid) -> GroupoidSpan:
    return GroupoidSpan(X, identity_functor(X), identity_functor(X), "id")


def weak_pullback(F: GroupoidFunctor, H: GroupoidFunctor) -> tuple[IsoCommaGroupoid, GroupoidFunctor, GroupoidFunctor]:
    P = IsoCommaGroupoid(F, H)
    p1, p2 = P.projections
    return P, p1, p2


def compose_spans(S1: GroupoidSpan, S2: GroupoidSpan) -> GroupoidSpan:
    """``S2 o S1``: glue S1's target foot to S2's source foot."""
    if not S1.target.same_as(S2.source):
        raise GroupoidError("span feet do not match")
    P, p1, p2 = weak_pullback(S1.right, S2.left)
    name = f"{S2.name} o {S1.name}" if S1.name and S2.name else ""
    return GroupoidSpan(P, p1.then(S1.left), p2.then(S2.right), name)


def product_span(*spans: GroupoidSpan) -> GroupoidSpan:
    left = product_functor(*(S.left for S in spans))
    right = product_functor(*(S.right for S in spans))
    right = GroupoidFunctor(left.source, right.target, right.obj_map, right.mor_map)
    return GroupoidSpan(left.source, left, right, " x ".join(S.name for S in spans))


def dump_groupoid(X: FiniteGroupoid, max_morphisms: int = 100_000) -> str:
    """JSON dump: object labels, morphisms, and a skeleton summary."""
    if X.n_morphisms > max_morphisms:
        raise UnsupportedError(f"groupoid has {X.n_morphisms} morphisms; dump limit is {max_morphisms}")
    doc = {
        "objects": [X.object_label(i) for i in range(X.n_objects)],
        "morphisms": [[int(X.src[f]), int(X.tgt[f]), X.morphism_payload(f)] for f in range(X.n_morphisms)],
        "skeleton": X.skeleton.summary(),
        "cardinality": str(groupoid_cardinality(X)),
    }
    return json.dumps(doc, indent=1)
