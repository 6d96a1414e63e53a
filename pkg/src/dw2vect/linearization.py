"""The 2-linearization: bases of representation categories and the
multiplicity matrices of spans, plus closed-case amplitudes.

A groupoid ``X`` goes to the category of representations of ``X``; its simple
objects are pairs (isomorphism class, irrep of the automorphism group), so a
2-vector space is recorded by its ordered list of such pairs.  A span
``A <-s X ->t B`` goes to pull-then-push, whose matrix entry at
``((b, phi), (a, rho))`` is the multiplicity

    sum over classes [x] of X over (a, b) of  < rho o s , phi o t >_{Aut(x)}.

Matrices have rows indexed by the target basis and columns by the source.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import cyclotomic as cy
from .characters import DEFAULT_SEED, INTEGRALITY_TOL, character_table
from .cocycles import (
    DecoratedGroupoid,
    DecoratedSpan,
    GroupoidCochain,
    as_cochain,
    is_cocycle,
    pullback,
    trivial_cochain,
)
from .errors import CocycleError, GroupoidError, IntegralityError
from .groupoids import (
    FiniteGroupoid,
    GroupoidSpan,
    PhaseSum,
    ProductGroupoid,
    product_groupoid,
)
from .groups import FiniteGroup
from .twisted import twisted_class_irreps
from .cyclotomic import Phase


@dataclass(eq=False)
class BasisClass:
    """Irreducible (projective) characters of one class's automorphism group.

    ``exact`` holds group-ring values of shape (irreps, |Aut|, conductor) when
    available; ``chars`` always holds complex values (irreps, |Aut|).
    ``cocycle`` is the restricted 2-cocycle on Aut (numerators mod ``modulus``).
    """

    label: str
    group: FiniteGroup
    irrep_labels: list[str]
    dims: list[int]
    chars: np.ndarray
    exact: np.ndarray | None
    cocycle: np.ndarray
    modulus: int

    @property
    def twisted(self) -> bool:
        return bool(np.any(self.cocycle))


@dataclass(eq=False)
class TwoVectorBasis:
    """Ordered basis of simple objects ``(class, irrep)``."""

    groupoid: FiniteGroupoid
    theta: GroupoidCochain
    classes: list[BasisClass]
    order: list[tuple[int, int]]

    def __post_init__(self):
        self._position = {pair: i for i, pair in enumerate(self.order)}

    def __len__(self):
        return len(self.order)

    @property
    def rank(self) -> int:
        return len(self.order)

    def position(self, cls: int, irrep: int) -> int:
        return self._position[(cls, irrep)]

    def has(self, cls: int, irrep: int) -> bool:
        return (cls, irrep) in self._position

    @property
    def labels(self) -> list[str]:
        return [f"{self.classes[c].label}|{self.classes[c].irrep_labels[i]}" for c, i in self.order]

    def entries(self) -> list[tuple[str, str, int]]:
        return [(self.classes[c].label, self.classes[c].irrep_labels[i], self.classes[c].dims[i]) for c, i in self.order]

    def restrict(self, classes) -> "TwoVectorBasis":
        keep = set(int(c) for c in classes)
        return TwoVectorBasis(self.groupoid, self.theta, self.classes, [p for p in self.order if p[0] in keep])


# bases ------------------------------------------------------------------------------

def _basis_class(X: FiniteGroupoid, theta: GroupoidCochain, c: int, seed: int) -> BasisClass:
    sk = X.skeleton
    irr = twisted_class_irreps(theta, sk, c, seed)
    exact = None
    if not np.any(irr.cocycle):
        t = character_table(sk.aut_groups[c], seed)
        if t.exact:
            exact = t.element_values()
    return BasisClass(irr.label, irr.group, irr.labels, irr.dims, irr.characters, exact, irr.cocycle, irr.modulus)


def _product_class(parts: list[BasisClass], label: str, group: FiniteGroup) -> BasisClass:
    chars = np.ones((1, 1), dtype=complex)
    exact = np.ones((1, 1, 1), dtype=np.int64) if all(p.exact is not None for p in parts) else None
    coc = np.zeros((1, 1), dtype=np.int64)
    m = cy.lcm(*(p.modulus for p in parts)) if parts else 1
    labels, dims = [""], [1]
    for p in parts:
        chars = np.einsum("ia,jb->ijab", chars, p.chars).reshape(len(chars) * len(p.chars), -1)
        if exact is not None:
            n = cy.lcm(exact.shape[-1], p.exact.shape[-1])
            e = cy.multiply(cy.lift(exact, n)[:, None, :, None, :], cy.lift(p.exact, n)[None, :, None, :, :])
            exact = e.reshape(e.shape[0] * e.shape[1], e.shape[2] * e.shape[3], n)
        k = m // p.modulus
        coc = (coc[:, None, :, None] + k * p.cocycle[None, :, None, :]).reshape(coc.shape[0] * len(p.cocycle), -1)
        labels = [f"{a},{b}" if a else b for a in labels for b in p.irrep_labels]
        dims = [a * b for a in dims for b in p.dims]
    labels = [f"({s})" for s in labels]
    return BasisClass(label, group, labels, dims, chars, exact, coc % m, m)


def _decoration(X, theta) -> tuple[FiniteGroupoid, GroupoidCochain, list | None]:
    parts = None
    if isinstance(X, DecoratedGroupoid):
        parts = getattr(X, "parts", None)
        X, theta = X.groupoid, X.theta
    return X, as_cochain(X, theta, 2), parts


def lambda_object(X, theta=None, seed: int = DEFAULT_SEED) -> TwoVectorBasis:
    """The basis of simple objects of the (twisted) representation category.

    For a product groupoid the basis is the lexicographic product of the
    factor bases, so ``lambda_object(X x Y) = monoidal_product(...)``.
    """
    X, theta, parts = _decoration(X, theta)
    if isinstance(X, ProductGroupoid) and (parts is not None or theta.modulus == 1):
        factor_thetas = parts or [None] * len(X.factors)
        return monoidal_product(*[lambda_object(F, t, seed) for F, t in zip(X.factors, factor_thetas)],
                                groupoid=X, theta=theta)
    check = is_cocycle(theta)
    if not check:
        raise CocycleError(f"object decoration is not a 2-cocycle: {check.message}", check.witness)
    classes = [_basis_class(X, theta, c, seed) for c in range(len(X.skeleton))]
    order = [(c, i) for c, bc in enumerate(classes) for i in range(len(bc.dims))]
    return TwoVectorBasis(X, theta, classes, order)


def monoidal_product(*items, groupoid: FiniteGroupoid | None = None, theta=None):
    """Product of bases (lexicographic pairs) or of linear maps (Kronecker)."""
    if all(isinstance(b, TwoLinearMap) for b in items):
        src = monoidal_product(*(m.source for m in items))
        tgt = monoidal_product(*(m.target for m in items))
        entries = np.ones((1, 1), dtype=np.int64)
        for m in items:
            entries = np.kron(entries, m.entries)
        return TwoLinearMap(src, tgt, entries)
    bases = list(items)
    if len(bases) == 1:
        return bases[0]
    X = groupoid or product_groupoid(*(b.groupoid for b in bases))
    if theta is None:
        from .cocycles import product_cochain

        theta = product_cochain(X, [b.theta for b in bases])
    sk = X.skeleton
    radix = [len(b.classes) for b in bases]
    classes = []
    for c in range(len(sk)):
        idx, rest = [], c
        for r in reversed(radix):
            idx.append(rest % r)
            rest //= r
        idx.reverse()
        classes.append(_product_class([b.classes[i] for b, i in zip(bases, idx)], sk.labels[c], sk.aut_groups[c]))
    order = []
    for combo in np.ndindex(*(len(b.order) for b in bases)):
        pairs = [b.order[i] for b, i in zip(bases, combo)]
        cls = 0
        irrep = 0
        for (c, i), b, r in zip(pairs, bases, radix):
            cls = cls * r + c
            irrep = irrep * len(b.classes[c].dims) + i
        order.append((cls, irrep))
    return TwoVectorBasis(X, theta, classes, order)


# linear maps ------------------------------------------------------------------------

@dataclass(eq=False)
class TwoLinearMap:
    source: TwoVectorBasis
    target: TwoVectorBasis
    entries: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.entries.shape

    def __matmul__(self, other: "TwoLinearMap") -> np.ndarray:
        return self.entries @ other.entries


def _transported_characters(bc: BasisClass, X: FiniteGroupoid, theta: GroupoidCochain,
                            ks: np.ndarray, classes: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Complex characters of ``bc`` on endomorphisms ``ks`` of objects in its class.

    For ``k`` at ``y`` with transport ``u: rep -> y`` and ``m = u^-1 k u``:
    ``chi_y(k) = theta(u^-1, u) chi(m) / (theta(u, m) theta(u m, u^-1))``.
    """
    chars = bc.chars[:, positions]
    if not bc.twisted:
        return chars
    sk = X.skeleton
    u = sk.transport[X.src[ks]]
    ui = X.inverse(u)
    m = X.compose(ui, X.compose(ks, u))
    um = X.compose(u, m)
    ph = theta.values(ui, u) - theta.values(u, m) - theta.values(um, ui)
    return chars * np.exp(2j * np.pi * ph / theta.modulus)[None, :]


def _span_entries(S: GroupoidSpan, src: TwoVectorBasis, tgt: TwoVectorBasis, alpha: GroupoidCochain | None,
                  src_classes=None, tgt_classes=None, allow_exact: bool = True):
    """Multiplicity matrix and per-entry provenance.

    Untwisted blocks with exact characters on both sides are summed in the
    cyclotomic field; everything else (and every block when ``allow_exact``
    is false) goes through complex projective characters with an
    integrality check.
    """
    X = S.apex
    A, B = S.source, S.target
    if not src.groupoid.same_as(A) or not tgt.groupoid.same_as(B):
        raise GroupoidError("bases do not belong to the span's feet")
    skX, skA, skB = X.skeleton, A.skeleton, B.skeleton
    entries = np.zeros((len(tgt), len(src)), dtype=np.int64)
    prov: dict = {}
    s, t = S.left, S.right
    twisted = (alpha is not None and not alpha.is_trivial()) or any(c.twisted for c in src.classes) or any(
        c.twisted for c in tgt.classes)
    for cx in range(len(skX)):
        members = skX.aut_members[cx]
        ks, kt = s.mor_map[members], t.mor_map[members]
        ca, pa = skA.to_representative(ks)
        cb, pb = skB.to_representative(kt)
        ca, cb = int(ca[0]), int(cb[0])
        if src_classes is not None and ca not in src_classes:
            continue
        if tgt_classes is not None and cb not in tgt_classes:
            continue
        rows = [i for i in range(len(tgt.classes[cb].dims)) if tgt.has(cb, i)]
        cols = [j for j in range(len(src.classes[ca].dims)) if src.has(ca, j)]
        if not rows or not cols:
            continue
        order = len(members)
        bca, bcb = src.classes[ca], tgt.classes[cb]
        if allow_exact and not twisted and bca.exact is not None and bcb.exact is not None:
            n = cy.lcm(bca.exact.shape[-1], bcb.exact.shape[-1])
            a = cy.conj(cy.lift(bca.exact[:, pa], n))
            b = cy.lift(bcb.exact[:, pb], n)
            total = cy.as_rational(cy.pair_sum(b, a))
            if np.any(total % order):
                raise IntegralityError(f"multiplicity at apex class {skX.labels[cx]} is not an integer")
            block = total // order
        else:
            a = _transported_characters(bca, A, src.theta, ks, ca, pa)
            b = _transported_characters(bcb, B, tgt.theta, kt, cb, pb)
            w = np.ones(order, dtype=complex)
            if alpha is not None:
                w = np.exp(2j * np.pi * alpha.values(members) / alpha.modulus)
            raw = (b * w[None, :]) @ a.conj().T / order
            block = np.rint(raw.real).astype(np.int64)
            if np.abs(raw - block).max(initial=0) > INTEGRALITY_TOL:
                raise IntegralityError(
                    f"twisted multiplicity at apex class {skX.labels[cx]} is not an integer "
                    f"(max deviation {np.abs(raw - block).max():.3g})"
                )
        for i in rows:
            r = tgt.position(cb, i)
            for j in cols:
                c = src.position(ca, j)
                entries[r, c] += block[i, j]
                prov.setdefault((r, c), []).append((skX.labels[cx], order, int(block[i, j])))
    if np.any(entries < 0):
        raise IntegralityError("negative multiplicity")
    return entries, prov


def lambda_morphism(S: GroupoidSpan, src: TwoVectorBasis | None = None, tgt: TwoVectorBasis | None = None,
                    seed: int = DEFAULT_SEED) -> TwoLinearMap:
    src = src or lambda_object(S.source, seed=seed)
    tgt = tgt or lambda_object(S.target, seed=seed)
    entries, prov = _span_entries(S, src, tgt, None)
    return TwoLinearMap(src, tgt, entries, prov)


def lambda_twisted_morphism(D: DecoratedSpan, src: TwoVectorBasis | None = None, tgt: TwoVectorBasis | None = None,
                            seed: int = DEFAULT_SEED, strict: bool = False) -> TwoLinearMap:
    """Always evaluated through projective characters, so with trivial
    decorations it is an independent route to ``lambda_morphism``."""
    D.validate(strict=strict)
    src = src or lambda_object(D.source, seed=seed)
    tgt = tgt or lambda_object(D.target, seed=seed)
    entries, prov = _span_entries(D.span, src, tgt, D.alpha, allow_exact=False)
    return TwoLinearMap(src, tgt, entries, prov)


def find_class(X: FiniteGroupoid, label: str) -> int:
    """Skeleton class of the object with the given label (any member of the class)."""
    want = label.replace(" ", "")
    for x in range(X.n_objects):
        if X.object_label(x).replace(" ", "") == want:
            return int(X.skeleton.class_of[x])
    raise GroupoidError(f"no object labelled {label!r}")


def lambda_block(S: GroupoidSpan, src_label: str, tgt_label: str, seed: int = DEFAULT_SEED,
                 src: TwoVectorBasis | None = None, tgt: TwoVectorBasis | None = None) -> TwoLinearMap:
    """The block of ``lambda_morphism(S)`` between two named classes."""
    ca = find_class(S.source, src_label)
    cb = find_class(S.target, tgt_label)
    src = (src or lambda_object(S.source, seed=seed)).restrict([ca])
    tgt = (tgt or lambda_object(S.target, seed=seed)).restrict([cb])
    entries, prov = _span_entries(S, src, tgt, None, {ca}, {cb})
    return TwoLinearMap(src, tgt, entries, prov)


# closed amplitudes -------------------------------------------------------------------

@dataclass(eq=False)
class ClosedAmplitudeMatrix:
    """Rows: classes of the target groupoid; columns: classes of the source."""

    row_labels: list[str]
    col_labels: list[str]
    row_aut: list[int]
    col_aut: list[int]
    entries: list[list[PhaseSum]]

    def value(self, r: int, c: int) -> PhaseSum:
        return self.entries[r][c]

    def as_fractions(self) -> list[list[Fraction]]:
        out = []
        for row in self.entries:
            vals = [e.as_fraction() for e in row]
            if any(v is None for v in vals):
                raise CocycleError("amplitude is not rational")
            out.append(vals)
        return out

    def __eq__(self, other):
        return (isinstance(other, ClosedAmplitudeMatrix) and self.row_aut == other.row_aut
                and self.col_aut == other.col_aut and self.entries == other.entries)


def closed_2morphism(M: GroupoidSpan, beta=None) -> ClosedAmplitudeMatrix:
    """``entry(gamma', gamma) = sum over [A] -> (gamma, gamma') of beta(A) / |Aut A|``."""
    X = M.apex
    b = as_cochain(X, beta, 0)
    check = is_cocycle(b)
    if not check:
        raise CocycleError(f"weight is not iso-invariant: {check.message}", check.witness)
    A, B = M.source, M.target
    skX, skA, skB = X.skeleton, A.skeleton, B.skeleton
    entries = [[PhaseSum(()) for _ in range(len(skA))] for _ in range(len(skB))]
    vals = b.values(skX.reps)
    for cx, r in enumerate(skX.reps):
        ca = int(skA.class_of[M.left.obj_map[r]])
        cb = int(skB.class_of[M.right.obj_map[r]])
        term = PhaseSum.of([(Phase.of(int(vals[cx]), b.modulus), Fraction(1, skX.aut_groups[cx].order))])
        entries[cb][ca] = entries[cb][ca] + term
    return ClosedAmplitudeMatrix(skB.labels, skA.labels, skB.aut_orders, skA.aut_orders, entries)


def compose_closed(Z2: ClosedAmplitudeMatrix, Z1: ClosedAmplitudeMatrix) -> ClosedAmplitudeMatrix:
    """``(Z2 o Z1)(g3, g1) = sum_g2 |Aut g2| Z2(g3, g2) Z1(g2, g1)``."""
    if Z1.row_labels != Z2.col_labels or Z1.row_aut != Z2.col_aut:
        raise GroupoidError("closed amplitude matrices do not compose: middle classes differ")
    out = []
    for r in range(len(Z2.row_labels)):
        row = []
        for c in range(len(Z1.col_labels)):
            acc = PhaseSum(())
            for k, aut in enumerate(Z2.col_aut):
                acc = acc + (Z2.entries[r][k] * Z1.entries[k][c]).scale(aut)
            row.append(acc)
        out.append(row)
    return ClosedAmplitudeMatrix(Z2.row_labels, Z1.col_labels, Z2.row_aut, Z1.col_aut, out)


# fusion ---------------------------------------------------------------------------

def fusion_coefficients(pants: TwoLinearMap) -> np.ndarray:
    """``N[c, a, b]``: multiplicity of ``c`` in ``a * b`` from the pants matrix."""
    r = pants.target.rank
    if pants.source.rank != r * r:
        raise GroupoidError("pants source basis is not the square of the target basis")
    return pants.entries.reshape(r, r, r)


def fusion_check(N: np.ndarray, unit: np.ndarray) -> dict:
    """Associativity and two-sided unit for the ring with structure constants N."""
    assoc_l = np.einsum("eab,dec->abcd", N, N)
    assoc_r = np.einsum("ebc,dae->abcd", N, N)
    bad = np.argwhere(assoc_l != assoc_r)
    r = N.shape[0]
    left_unit = np.einsum("e,cea->ca", unit, N)
    right_unit = np.einsum("e,cae->ca", unit, N)
    return {
        "associative": not len(bad),
        "first_failure": tuple(int(x) for x in bad[0]) if len(bad) else None,
        "left_unit": bool(np.array_equal(left_unit, np.eye(r, dtype=N.dtype))),
        "right_unit": bool(np.array_equal(right_unit, np.eye(r, dtype=N.dtype))),
    }


def trivial_decoration(X: FiniteGroupoid) -> GroupoidCochain:
    return trivial_cochain(X, 2)


__all__ = [
    "BasisClass", "TwoVectorBasis", "TwoLinearMap", "ClosedAmplitudeMatrix", "lambda_object", "lambda_morphism",
    "lambda_twisted_morphism", "lambda_block", "closed_2morphism", "compose_closed", "monoidal_product",
    "fusion_coefficients", "fusion_check", "find_class", "pullback",
]
