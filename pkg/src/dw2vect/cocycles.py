"""U(1)-valued cochains on groupoids and groups, with exact phases.

A cochain with modulus ``m`` stores integers ``k`` read as the phase ``k/m``
(so the value is ``exp(2 pi i k/m)``).  Cochains are function-backed and
vectorized: degree 0 takes object arrays, degree 1 morphism arrays, degree 2
pairs ``(f, g)`` of morphism arrays with ``f o g`` defined.  Group law on
values is addition mod ``m``, written multiplicatively in the docstrings.

Coboundaries:

* ``(d beta)(f) = beta(tgt f) / beta(src f)``
* ``(d alpha)(f, g) = alpha(f) alpha(g) / alpha(f o g)``

and a 2-cocycle satisfies ``theta(g, h) theta(f, g o h) = theta(f o g, h) theta(f, g)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cyclotomic import Phase, lcm
from .errors import CocycleError, InternalError
from .groupoids import (
    FiniteGroupoid,
    FullSubgroupoid,
    GroupoidFunctor,
    GroupoidSpan,
    ProductGroupoid,
    adjoint_groupoid,
    compose_spans,
    identity_span,
    weak_pullback,
)
from .groups import FiniteGroup, cyclic
from .zmod import solve_mod


@dataclass(eq=False)
class GroupoidCochain:
    groupoid: FiniteGroupoid
    degree: int
    modulus: int
    fn: Callable = field(repr=False)

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise ValueError("groupoid cochains have degree 0, 1 or 2")

    def values(self, *args) -> np.ndarray:
        return np.asarray(self.fn(*(np.asarray(a) for a in args)), dtype=np.int64) % self.modulus

    def phase(self, *args) -> Phase:
        return Phase.of(int(self.values(*(np.atleast_1d(a) for a in args))[0]), self.modulus)

    def lifted(self, modulus: int) -> "GroupoidCochain":
        if modulus % self.modulus:
            raise ValueError(f"cannot lift modulus {self.modulus} to {modulus}")
        k = modulus // self.modulus
        return GroupoidCochain(self.groupoid, self.degree, modulus, lambda *a: self.values(*a) * k)

    def __mul__(self, other: "GroupoidCochain") -> "GroupoidCochain":
        _same_domain(self, other)
        m = lcm(self.modulus, other.modulus)
        a, b = self.lifted(m), other.lifted(m)
        return GroupoidCochain(self.groupoid, self.degree, m, lambda *x: a.values(*x) + b.values(*x))

    def inverse(self) -> "GroupoidCochain":
        return GroupoidCochain(self.groupoid, self.degree, self.modulus, lambda *x: -self.values(*x))

    def __truediv__(self, other):
        return self * other.inverse()

    def is_trivial(self) -> bool:
        return not np.any(_evaluate_all(self))

    def as_array(self) -> np.ndarray:
        """Values on all objects / morphisms / composable pairs (in canonical order)."""
        return _evaluate_all(self)

    def to_json(self) -> str:
        X = self.groupoid
        vals = _evaluate_all(self)
        doc = {"degree": self.degree, "objects": X.n_objects, "morphisms": X.n_morphisms,
               "entries": [str(Phase.of(int(v), self.modulus)) for v in vals]}
        return json.dumps(doc)


def _same_domain(a, b):
    if not a.groupoid.same_as(b.groupoid) or a.degree != b.degree:
        raise CocycleError("cochains live on different groupoids or degrees")


def _evaluate_all(c: GroupoidCochain) -> np.ndarray:
    X = c.groupoid
    if c.degree == 0:
        return c.values(np.arange(X.n_objects))
    if c.degree == 1:
        return c.values(np.arange(X.n_morphisms))
    return c.values(*X.composable_pairs())


def trivial_cochain(X: FiniteGroupoid, degree: int) -> GroupoidCochain:
    if degree == 2:
        return GroupoidCochain(X, 2, 1, lambda f, g: np.zeros(np.shape(f), dtype=np.int64))
    return GroupoidCochain(X, degree, 1, lambda a: np.zeros(np.shape(a), dtype=np.int64))


def cochain_from_array(X: FiniteGroupoid, degree: int, numerators, modulus: int) -> GroupoidCochain:
    """Degree 0 or 1 cochain from a value per object / morphism."""
    arr = np.asarray(numerators, dtype=np.int64) % modulus
    expected = X.n_objects if degree == 0 else X.n_morphisms
    if degree not in (0, 1) or arr.shape != (expected,):
        raise CocycleError(f"degree {degree} cochain needs {expected} values, got {arr.shape}")
    return GroupoidCochain(X, degree, modulus, lambda a: arr[a])


def cochain_from_phases(X: FiniteGroupoid, degree: int, phases) -> GroupoidCochain:
    """From Phase values (or "num/den" strings); degree 2 uses composable_pairs order."""
    ph = [p if isinstance(p, Phase) else Phase.parse(str(p)) for p in phases]
    m = lcm(*(p.value.denominator for p in ph)) if ph else 1
    nums = np.array([int(p.value * m) for p in ph], dtype=np.int64)
    if degree in (0, 1):
        return cochain_from_array(X, degree, nums, m)
    f, g = X.composable_pairs()
    if len(nums) != len(f):
        raise CocycleError(f"degree 2 cochain needs {len(f)} values, got {len(nums)}")
    keys = f * X.n_morphisms + g
    order = np.argsort(keys)
    skeys = keys[order]
    svals = nums[order]

    def fn(a, b):
        k = np.asarray(a) * X.n_morphisms + np.asarray(b)
        pos = np.minimum(np.searchsorted(skeys, k), len(skeys) - 1)
        if not np.array_equal(skeys[pos], k):
            raise CocycleError("2-cochain evaluated on a non-composable pair")
        return svals[pos]

    return GroupoidCochain(X, 2, m, fn)


def as_cochain(X: FiniteGroupoid, value, degree: int) -> GroupoidCochain:
    """Accept a cochain, ``None`` (trivial), a constant Phase, or a callable of indices."""
    if value is None:
        return trivial_cochain(X, degree)
    if isinstance(value, GroupoidCochain):
        if value.degree != degree or not value.groupoid.same_as(X):
            raise CocycleError("cochain has the wrong degree or domain")
        return value
    if isinstance(value, Phase):
        q = value.value
        return GroupoidCochain(X, degree, q.denominator,
                               lambda *a: np.full(np.shape(a[0]), q.numerator, dtype=np.int64))
    if callable(value):
        idx = np.arange(X.n_objects if degree == 0 else X.n_morphisms)
        return cochain_from_phases(X, degree, [value(int(i)) for i in idx])
    raise CocycleError(f"cannot interpret {value!r} as a cochain")


# coboundary and cocycle checks -----------------------------------------------------

def coboundary(c: GroupoidCochain) -> GroupoidCochain:
    X = c.groupoid
    if c.degree == 0:
        return GroupoidCochain(X, 1, c.modulus, lambda f: c.values(X.tgt[f]) - c.values(X.src[f]))
    if c.degree == 1:
        return GroupoidCochain(
            X, 2, c.modulus, lambda f, g: c.values(f) + c.values(g) - c.values(X.compose(f, g))
        )
    raise CocycleError("coboundary is implemented for degrees 0 and 1")


@dataclass(frozen=True)
class CocycleCheck:
    ok: bool
    witness: tuple | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


def is_cocycle(c: GroupoidCochain) -> CocycleCheck:
    """Exhaustive check of the degree-appropriate cocycle identity."""
    X = c.groupoid
    if c.degree == 0:
        bad = np.nonzero(c.values(X.src) != c.values(X.tgt))[0]
        if len(bad):
            f = int(bad[0])
            return CocycleCheck(False, (int(X.src[f]), int(X.tgt[f])),
                                f"values differ on isomorphic objects {X.object_label(int(X.src[f]))} "
                                f"and {X.object_label(int(X.tgt[f]))}")
        return CocycleCheck(True)
    if c.degree == 1:
        f, g = X.composable_pairs()
        bad = np.nonzero(c.values(X.compose(f, g)) != (c.values(f) + c.values(g)) % c.modulus)[0]
        if len(bad):
            w = (int(f[bad[0]]), int(g[bad[0]]))
            return CocycleCheck(False, w, f"not multiplicative on composable pair {w}")
        return CocycleCheck(True)
    f, g, h = X.composable_triples()
    lhs = c.values(g, h) + c.values(f, X.compose(g, h))
    rhs = c.values(X.compose(f, g), h) + c.values(f, g)
    bad = np.nonzero((lhs - rhs) % c.modulus)[0]
    if len(bad):
        w = (int(f[bad[0]]), int(g[bad[0]]), int(h[bad[0]]))
        return CocycleCheck(False, w, f"2-cocycle identity fails on composable triple {w}")
    return CocycleCheck(True)


def is_normalized(c: GroupoidCochain) -> CocycleCheck:
    X = c.groupoid
    if c.degree == 0:
        return CocycleCheck(True)
    if c.degree == 1:
        ids = X.identity(np.arange(X.n_objects))
        bad = np.nonzero(c.values(ids))[0]
        return CocycleCheck(not len(bad), (int(ids[bad[0]]),) if len(bad) else None)
    m = np.arange(X.n_morphisms)
    for a, b in ((X.identity(X.tgt), m), (m, X.identity(X.src))):
        bad = np.nonzero(c.values(a, b))[0]
        if len(bad):
            return CocycleCheck(False, (int(a[bad[0]]), int(b[bad[0]])), "not normalized")
    return CocycleCheck(True)


def normalize_groupoid_2cocycle(theta: GroupoidCochain) -> tuple[GroupoidCochain, GroupoidCochain]:
    """A normalized representative ``theta / d(beta)`` and the shift ``beta``.

    For a 2-cocycle ``theta(id_y, f) = theta(id_y, id_y)`` for every ``f`` into
    ``y``, so ``beta`` is supported on identity morphisms.
    """
    X = theta.groupoid
    ids = X.identity(np.arange(X.n_objects))
    shift = np.zeros(X.n_morphisms, dtype=np.int64)
    shift[ids] = theta.values(ids, ids)
    beta = cochain_from_array(X, 1, shift, theta.modulus)
    out = theta / coboundary(beta)
    return out, beta


def pullback(c: GroupoidCochain, F: GroupoidFunctor) -> GroupoidCochain:
    if not F.target.same_as(c.groupoid):
        raise CocycleError("functor does not land in the cochain's groupoid")
    if c.degree == 0:
        return GroupoidCochain(F.source, 0, c.modulus, lambda x: c.values(F.obj_map[x]))
    if c.degree == 1:
        return GroupoidCochain(F.source, 1, c.modulus, lambda f: c.values(F.mor_map[f]))
    return GroupoidCochain(F.source, 2, c.modulus, lambda f, g: c.values(F.mor_map[f], F.mor_map[g]))


def product_cochain(P: FiniteGroupoid, parts) -> GroupoidCochain:
    """The exterior product of cochains on the factors of ``P``."""
    parts = list(parts)
    if not isinstance(P, ProductGroupoid):
        if len(parts) != 1:
            raise CocycleError("exterior product needs a product groupoid")
        return parts[0]
    degree = parts[0].degree
    m = lcm(*(c.modulus for c in parts))
    lifted = [c.lifted(m) for c in parts]
    if degree == 0:
        return GroupoidCochain(P, 0, m, lambda x: sum(c.values(a) for c, a in zip(lifted, P.split_objects(x))))
    if degree == 1:
        return GroupoidCochain(P, 1, m, lambda f: sum(c.values(a) for c, a in zip(lifted, P.split_morphisms(f))))
    return GroupoidCochain(
        P, 2, m,
        lambda f, g: sum(c.values(a, b) for c, a, b in zip(lifted, P.split_morphisms(f), P.split_morphisms(g))),
    )


# group 3-cocycles and transgression ---------------------------------------------------

@dataclass(eq=False)
class GroupCocycle3:
    group: FiniteGroup
    table: np.ndarray  # numerators, shape (n, n, n)
    modulus: int
    name: str = ""

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64) % self.modulus

    def __call__(self, a, b, c) -> np.ndarray:
        return self.table[a, b, c]

    def phase(self, a, b, c) -> Phase:
        return Phase.of(int(self.table[a, b, c]), self.modulus)

    def check(self) -> CocycleCheck:
        """``w(h,k,l) w(g,hk,l) w(g,h,k) = w(gh,k,l) w(g,h,kl)``, exhaustively."""
        G = self.group
        T, w = G.table, self.table
        g, h, k, l = np.meshgrid(*[np.arange(G.order)] * 4, indexing="ij", sparse=True)
        lhs = w[h, k, l] + w[g, T[h, k], l] + w[g, h, k]
        rhs = w[T[g, h], k, l] + w[g, h, T[k, l]]
        bad = np.argwhere((lhs - rhs) % self.modulus)
        if len(bad):
            return CocycleCheck(False, tuple(int(x) for x in bad[0]), "3-cocycle identity fails")
        return CocycleCheck(True)

    def is_normalized(self) -> bool:
        w = self.table
        return not (w[0].any() or w[:, 0].any() or w[:, :, 0].any())

    def to_json(self) -> str:
        n = self.group.order
        entries = [[[str(Phase.of(int(self.table[a, b, c]), self.modulus)) for c in range(n)]
                    for b in range(n)] for a in range(n)]
        return json.dumps({"degree": 3, "group_order": n, "entries": entries})


def builtin_omega_cyclic(n: int, p: int) -> GroupCocycle3:
    """``w_p(a, b, c) = exp(2 pi i p a (b + c - [b + c mod n]) / n^2)`` on Z_n."""
    if not 0 <= p < n:
        raise CocycleError(f"level p must satisfy 0 <= p < n, got p={p}, n={n}")
    r = np.arange(n)
    a, b, c = np.meshgrid(r, r, r, indexing="ij")
    carry = (b + c >= n).astype(np.int64)
    return GroupCocycle3(cyclic(n), p * a * carry, n, f"zn:{n}:{p}")


def group_coboundary(G: FiniteGroup, eta: np.ndarray, modulus: int) -> GroupCocycle3:
    """``(d eta)(g,h,k) = eta(h,k) eta(g,hk) / (eta(gh,k) eta(g,h))``."""
    T = G.table
    r = np.arange(G.order)
    g, h, k = np.meshgrid(r, r, r, indexing="ij")
    eta = np.asarray(eta, dtype=np.int64)
    return GroupCocycle3(G, eta[h, k] + eta[g, T[h, k]] - eta[T[g, h], k] - eta[g, h], modulus)


def random_normalized_2cochain(G: FiniteGroup, modulus: int, rng) -> np.ndarray:
    eta = rng.integers(0, modulus, size=(G.order, G.order))
    eta[0, :] = 0
    eta[:, 0] = 0
    return eta


def normalize_group_cocycle(w: GroupCocycle3) -> tuple[GroupCocycle3, np.ndarray]:
    """A normalized cohomologous cocycle and the 2-cochain shift used."""
    if w.is_normalized():
        return w, np.zeros((w.group.order,) * 2, dtype=np.int64)
    G, n = w.group, w.group.order
    rows, rhs = [], []
    T = G.table
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if 0 not in (a, b, c):
                    continue
                row = np.zeros(n * n, dtype=np.int64)
                for (x, y), s in (((b, c), 1), ((a, int(T[b, c])), 1), ((int(T[a, b]), c), -1), ((a, b), -1)):
                    row[x * n + y] += s
                rows.append(row)
                rhs.append(int(w.table[a, b, c]))
    eta = solve_mod(np.array(rows), np.array(rhs), w.modulus)
    if eta is None:
        raise CocycleError("3-cochain cannot be normalized (is it a cocycle?)")
    eta = eta.reshape(n, n)
    out = GroupCocycle3(G, w.table - group_coboundary(G, eta, w.modulus).table, w.modulus, w.name)
    return out, eta


def transgress_to_loop_groupoid(w: GroupCocycle3, X: FiniteGroupoid | None = None) -> GroupoidCochain:
    """The loop-groupoid 2-cocycle of a normalized group 3-cocycle.

    On ``G // G`` a morphism ``(h, x)`` goes ``x -> h x h^-1``.  For the
    composable pair ``a = (k, h x h^-1)`` after ``b = (h, x)`` the value is
    ``tau_x(h^-1, k^-1)`` with

        tau_g(u, v) = w(g, u, v) w(u, v, (uv)^-1 g (uv)) / w(u, u^-1 g u, v).

    The result is checked to be a normalized 2-cocycle before it is returned.
    """
    G = w.group
    if not w.is_normalized():
        raise CocycleError("transgression needs a normalized 3-cocycle")
    X = X or adjoint_groupoid(G)
    n = X.n_objects
    T, inv, W = G.table, G.inv, w.table

    def fn(a, b):
        x = X.src[b]
        u, v = inv[b // n], inv[a // n]
        uv = T[u, v]
        g_u = T[T[inv[u], x], u]
        g_uv = T[T[inv[uv], x], uv]
        return W[x, u, v] + W[u, v, g_uv] - W[u, g_u, v]

    theta = GroupoidCochain(X, 2, w.modulus, fn)
    for check in (is_cocycle(theta), is_normalized(theta)):
        if not check:
            raise InternalError(f"transgressed cochain fails its postcondition: {check.message} at {check.witness}")
    return theta


def find_primitive(theta: GroupoidCochain) -> GroupoidCochain | None:
    """A 1-cochain ``alpha`` with ``d alpha = theta``, or None, solved exactly.

    A U(1)-valued primitive of a cocycle with values in ``(1/m)Z/Z`` can be
    chosen with values in ``(1/(m E))Z/Z``, ``E`` the exponent of the
    automorphism groups, so the system is solved over ``Z/(m E)``.
    """
    X = theta.groupoid
    f, g = X.composable_pairs()
    fg = X.compose(f, g)
    k = len(f)
    exponent = lcm(*(int(np.lcm.reduce(G.element_orders)) for G in X.skeleton.aut_groups))
    m = theta.modulus * exponent
    A = np.zeros((k, X.n_morphisms), dtype=np.int64)
    rows = np.arange(k)
    np.add.at(A, (rows, f), 1)
    np.add.at(A, (rows, g), 1)
    np.add.at(A, (rows, fg), -1)
    sol = solve_mod(A, theta.lifted(m).values(f, g), m)
    if sol is None:
        return None
    return cochain_from_array(X, 1, sol, m)


# decorated spans ----------------------------------------------------------------

@dataclass(eq=False)
class DecoratedGroupoid:
    groupoid: FiniteGroupoid
    theta: GroupoidCochain
    parts: tuple | None = None  # factor decorations when built as a product

    def __post_init__(self):
        self.theta = as_cochain(self.groupoid, self.theta, 2)

    def validate(self) -> None:
        for check in (is_cocycle(self.theta), is_normalized(self.theta)):
            if not check:
                raise CocycleError(f"object cocycle invalid: {check.message}", check.witness)

    def same_as(self, other: "DecoratedGroupoid") -> bool:
        if not self.groupoid.same_as(other.groupoid):
            return False
        return self.theta is other.theta or not np.any(
            (_evaluate_all(self.theta.lifted(lcm(self.theta.modulus, other.theta.modulus)))
             - _evaluate_all(other.theta.lifted(lcm(self.theta.modulus, other.theta.modulus))))
        )


def undecorated(X: FiniteGroupoid) -> DecoratedGroupoid:
    return DecoratedGroupoid(X, trivial_cochain(X, 2))


def product_decorated(*parts: DecoratedGroupoid) -> DecoratedGroupoid:
    from .groupoids import product_groupoid

    P = product_groupoid(*(d.groupoid for d in parts))
    if len(parts) == 1:
        return parts[0]
    return DecoratedGroupoid(P, product_cochain(P, [d.theta for d in parts]), tuple(d.theta for d in parts))


@dataclass(eq=False)
class DecoratedSpan:
    """A span ``A <-s X ->t B`` with a 1-cochain ``alpha`` on the apex.

    The compatibility condition is ``d(alpha) = s*theta_A / t*theta_B``.
    With ``strict=True`` the stronger ``s*theta_A = t*theta_B`` and
    ``d(alpha) = 1`` are required instead.
    """

    span: GroupoidSpan
    source: DecoratedGroupoid
    target: DecoratedGroupoid
    alpha: GroupoidCochain = None

    def __post_init__(self):
        self.alpha = as_cochain(self.span.apex, self.alpha, 1)
        if not self.span.source.same_as(self.source.groupoid) or not self.span.target.same_as(self.target.groupoid):
            raise CocycleError("decorations live on groupoids other than the span's feet")

    def discrepancy(self) -> GroupoidCochain:
        """``s*theta_A / t*theta_B`` on the apex."""
        return pullback(self.source.theta, self.span.left) / pullback(self.target.theta, self.span.right)

    def check(self, strict: bool = False) -> CocycleCheck:
        disc = self.discrepancy()
        X = self.span.apex
        f, g = X.composable_pairs()
        m = lcm(disc.modulus, self.alpha.modulus)
        d = disc.lifted(m).values(f, g)
        da = coboundary(self.alpha).lifted(m).values(f, g)
        if strict:
            bad = np.nonzero(d)[0]
            if len(bad):
                w = (int(f[bad[0]]), int(g[bad[0]]))
                return CocycleCheck(False, w, f"s*theta_A != t*theta_B on composable pair {w}")
            d = np.zeros_like(d)
        bad = np.nonzero((da - d) % m)[0]
        if len(bad):
            w = (int(f[bad[0]]), int(g[bad[0]]))
            return CocycleCheck(False, w, f"d(alpha) does not match s*theta_A / t*theta_B on composable pair {w}")
        return CocycleCheck(True)

    def validate(self, strict: bool = False) -> None:
        c = self.check(strict)
        if not c:
            raise CocycleError(c.message, c.witness)


def decorated_identity(D: DecoratedGroupoid) -> DecoratedSpan:
    return DecoratedSpan(identity_span(D.groupoid), D, D)


def compose_decorated_spans(S1: DecoratedSpan, S2: DecoratedSpan, validate_inputs: bool = True) -> DecoratedSpan:
    """``S2 o S1`` with the composite 1-cochain on the weak pullback.

    On a pullback morphism ``(g1, g2): (x1, f, x2) -> (x1', f', x2')`` the
    value is ``alpha1(g1) alpha2(g2) theta_B(f', t1 g1) / theta_B(s2 g2, f)``;
    both products of ``theta_B`` are evaluated on the two sides of the
    commuting square ``f' o t1(g1) = s2(g2) o f``.
    """
    if not S1.target.same_as(S2.source):
        raise CocycleError("decorated feet do not match")
    if validate_inputs:
        S1.validate()
        S2.validate()
    span = compose_spans(S1.span, S2.span)
    P = span.apex
    t1, s2 = S1.span.right, S2.span.left
    theta_b = S2.source.theta
    m = lcm(S1.alpha.modulus, S2.alpha.modulus, theta_b.modulus)
    a1, a2, tb = S1.alpha.lifted(m), S2.alpha.lifted(m), theta_b.lifted(m)

    def fn(h):
        g1, g2 = P.mor_g1[h], P.mor_g2[h]
        f = P.obj_f[P.src[h]]
        f2 = P.obj_f[P.tgt[h]]
        return (a1.values(g1) + a2.values(g2) + tb.values(f2, t1.mor_map[g1]) - tb.values(s2.mor_map[g2], f))

    out = DecoratedSpan(span, S1.source, S2.target, GroupoidCochain(P, 1, m, fn))
    check = out.check()
    if not check:
        raise InternalError(f"composite decoration fails its condition: {check.message}")
    return out


@dataclass(eq=False)
class DecoratedSpanOfSpans:
    """A 2-morphism ``S1 => S2`` between parallel decorated spans.

    ``sigma: Y -> apex(S1)`` and ``tau: Y -> apex(S2)`` must agree on the feet;
    ``beta`` is a 0-cochain on ``Y`` with ``d(beta) = tau*alpha2 / sigma*alpha1``.
    """

    apex: FiniteGroupoid
    sigma: GroupoidFunctor
    tau: GroupoidFunctor
    source: DecoratedSpan
    target: DecoratedSpan
    beta: GroupoidCochain = None

    def __post_init__(self):
        self.beta = as_cochain(self.apex, self.beta, 0)

    def check(self, strict: bool = False) -> CocycleCheck:
        s1, s2 = self.source.span, self.target.span
        for a, b, side in ((s1.left, s2.left, "source"), (s1.right, s2.right, "target")):
            if not (np.array_equal(a.obj_map[self.sigma.obj_map], b.obj_map[self.tau.obj_map])
                    and np.array_equal(a.mor_map[self.sigma.mor_map], b.mor_map[self.tau.mor_map])):
                return CocycleCheck(False, None, f"2-morphism legs disagree on the {side} foot")
        ratio = pullback(self.target.alpha, self.tau) / pullback(self.source.alpha, self.sigma)
        m = lcm(ratio.modulus, self.beta.modulus)
        f = np.arange(self.apex.n_morphisms)
        r = ratio.lifted(m).values(f)
        db = coboundary(self.beta).lifted(m).values(f)
        if strict:
            bad = np.nonzero(r)[0]
            if len(bad):
                return CocycleCheck(False, (int(bad[0]),), f"sigma*alpha1 != tau*alpha2 on morphism {int(bad[0])}")
            r = np.zeros_like(r)
        bad = np.nonzero((db - r) % m)[0]
        if len(bad):
            return CocycleCheck(False, (int(bad[0]),), f"d(beta) does not match tau*alpha2 / sigma*alpha1 on morphism {int(bad[0])}")
        return CocycleCheck(True)

    def validate(self, strict: bool = False) -> None:
        c = self.check(strict)
        if not c:
            raise CocycleError(c.message, c.witness)


def compose_decorated_2morphisms_vertical(Y1: DecoratedSpanOfSpans, Y2: DecoratedSpanOfSpans) -> DecoratedSpanOfSpans:
    """``Y2 . Y1`` for ``Y1: S1 => S2`` and ``Y2: S2 => S3``.

    The apex is the part of the weak pullback of ``tau1`` and ``sigma2`` whose
    middle isomorphism lies over identities on both feet; its 0-cochain is ``beta1(y) alpha2(f) beta2(y')``.
    """
    if Y1.target is not Y2.source and not Y1.target.span.apex.same_as(Y2.source.span.apex):
        raise CocycleError("2-morphisms are not vertically composable")
    Y1.validate()
    Y2.validate()
    P, p1, p2 = weak_pullback(Y1.tau, Y2.sigma)
    # keep the middle isomorphisms lying over identities on both feet, so the
    # composite legs agree on the feet on the nose
    mid = Y1.target.span
    over_ids = np.ones(P.n_objects, dtype=bool)
    for leg in (mid.left, mid.right):
        foot = leg.target
        img = leg.mor_map[P.obj_f]
        over_ids &= img == foot.identity(foot.src[img])
    sub = FullSubgroupoid(P, over_ids)
    inc = sub.inclusion
    p1, p2 = inc.then(p1), inc.then(p2)
    W = sub
    ox1, of, ox2 = (a[sub.objects] for a in (P.obj_x1, P.obj_f, P.obj_x2))
    a2 = Y1.target.alpha
    m = lcm(Y1.beta.modulus, Y2.beta.modulus, a2.modulus)
    b1, b2, al = Y1.beta.lifted(m), Y2.beta.lifted(m), a2.lifted(m)
    beta = GroupoidCochain(W, 0, m, lambda x: b1.values(ox1[x]) + al.values(of[x]) + b2.values(ox2[x]))
    out = DecoratedSpanOfSpans(W, p1.then(Y1.sigma), p2.then(Y2.tau), Y1.source, Y2.target, beta)
    out.validate()
    return out


def compose_decorated_2morphisms_horizontal(Y: DecoratedSpanOfSpans, Z: DecoratedSpanOfSpans) -> DecoratedSpanOfSpans:
    """``Z * Y`` for ``Y: S => S'`` (A to B) and ``Z: T => T'`` (B to C).

    The apex is the weak pullback of ``Y -> B`` and ``Z -> B`` and the
    0-cochain is ``beta_Y(y) beta_Z(z)``.  The theta_B factors of the two
    composite 1-cochains agree on every morphism of this apex (both legs of
    the 2-morphisms agree on the feet), so they cancel from the condition.
    """
    Y.validate()
    Z.validate()
    src = compose_decorated_spans(Y.source, Z.source)
    tgt = compose_decorated_spans(Y.target, Z.target)
    yb = Y.sigma.then(Y.source.span.right)
    zb = Z.sigma.then(Z.source.span.left)
    W, py, pz = weak_pullback(yb, zb)
    P, Q = src.span.apex, tgt.span.apex

    def leg(ymap, zmap, target):
        obj = target.lookup(ymap.obj_map[W.obj_x1], W.obj_f, zmap.obj_map[W.obj_x2])
        mor = target.morphism(obj[W.mor_obj], ymap.mor_map[W.mor_g1], zmap.mor_map[W.mor_g2])
        return GroupoidFunctor(W, target, obj, mor)

    m = lcm(Y.beta.modulus, Z.beta.modulus)
    by, bz = Y.beta.lifted(m), Z.beta.lifted(m)
    beta = GroupoidCochain(W, 0, m, lambda x: by.values(W.obj_x1[x]) + bz.values(W.obj_x2[x]))
    out = DecoratedSpanOfSpans(W, leg(Y.sigma, Z.sigma, P), leg(Y.tau, Z.tau, Q), src, tgt, beta)
    out.validate()
    return out


# file formats --------------------------------------------------------------------

def parse_omega_selector(text: str) -> GroupCocycle3:
    """``zn:<n>:<p>`` selects the built-in cocycle on Z_n."""
    parts = text.split(":")
    if len(parts) != 3 or parts[0] != "zn":
        raise CocycleError(f"unknown 3-cocycle selector {text!r}; expected zn:<n>:<p>")
    try:
        n, p = int(parts[1]), int(parts[2])
    except ValueError:
        raise CocycleError(f"malformed 3-cocycle selector {text!r}") from None
    return builtin_omega_cyclic(n, p)


def load_group_cocycle(doc: dict, G: FiniteGroup) -> tuple[GroupCocycle3, np.ndarray]:
    """Parse a degree-3 cocycle document; returns the normalized cocycle and the shift."""
    if doc.get("degree") != 3:
        raise CocycleError("expected a degree-3 cocycle document")
    ph = np.vectorize(lambda s: Phase.parse(s).value, otypes=[object])(np.array(doc["entries"], dtype=object))
    if ph.shape != (G.order,) * 3:
        raise CocycleError(f"3-cocycle table must have shape {(G.order,) * 3}, got {ph.shape}")
    m = lcm(*(q.denominator for q in ph.ravel()))
    nums = np.vectorize(lambda q: int(q * m), otypes=[np.int64])(ph)
    w = GroupCocycle3(G, nums, m)
    check = w.check()
    if not check:
        raise CocycleError(f"not a 3-cocycle: identity fails at {check.witness}", check.witness)
    return normalize_group_cocycle(w)


def load_cochain(doc: dict, X: FiniteGroupoid) -> GroupoidCochain:
    degree = doc.get("degree")
    if degree not in (0, 1, 2):
        raise CocycleError("groupoid cochain documents have degree 0, 1 or 2")
    return cochain_from_phases(X, degree, doc["entries"])
