"""Acceptance criteria 1-12, each with its runtime budget.

Every criterion records one PASS/FAIL line, printed in the terminal summary.
"""
import functools
import itertools
import json
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from conftest import ACCEPTANCE_RESULTS
from dw2vect.cocycles import (
    Phase,
    builtin_omega_cyclic,
    coboundary,
    find_primitive,
    group_coboundary,
    is_cocycle,
    random_normalized_2cochain,
    transgress_to_loop_groupoid,
    GroupCocycle3,
    GroupoidCochain,
)
from dw2vect.field_theory import (
    builtin_presentation,
    builtin_three_cobordism,
    circle_groupoid,
    decorate,
    dw_closed_invariant,
    fc,
    fc_three,
    mednykh_hom_count,
    surface_presentation,
)
from dw2vect.groupoids import compose_spans, equivalent_skeletons
from dw2vect.groups import cyclic, dihedral, direct_product, solve_relations, symmetric
from dw2vect.linearization import (
    closed_2morphism,
    compose_closed,
    fusion_check,
    fusion_coefficients,
    lambda_block,
    lambda_morphism,
    lambda_object,
    lambda_twisted_morphism,
)
from dw2vect.twisted import TwistedGroupoidAlgebra, twisted_algebra, twisted_irreps

CORPUS = {**{f"Z{n}": (lambda n=n: cyclic(n)) for n in range(1, 13)},
          "Z2xZ2": lambda: direct_product(cyclic(2), cyclic(2)),
          "D4": lambda: dihedral(4), "S3": lambda: symmetric(3), "S4": lambda: symmetric(4)}


def criterion(number: int, budget: float, title: str):
    """Run the body, enforce the runtime budget, and record a PASS/FAIL line."""
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                fn(*args, **kwargs)
                elapsed = time.perf_counter() - start
                assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
            except BaseException as exc:
                elapsed = time.perf_counter() - start
                line = f"criterion {number:2d} FAIL ({elapsed:.2f}s / {budget}s) {title}: {exc}".splitlines()[0]
                ACCEPTANCE_RESULTS[number] = line
                print(line)
                raise
            line = f"criterion {number:2d} PASS ({elapsed:.2f}s / {budget}s) {title}"
            ACCEPTANCE_RESULTS[number] = line
            print(line)
        return run
    return wrap


# 1, 2: pants matrices of cyclic groups ---------------------------------------------------

def cyclic_labels(basis, n):
    """(holonomy, character) integer pair for each basis element of Z_n // Z_n."""
    out = []
    for cls, irrep in basis.order:
        bc = basis.classes[cls]
        a = int(bc.label)
        k = 0 if n == 1 else int(round(np.angle(bc.chars[irrep, 1]) * n / (2 * np.pi))) % n
        out.append((a, k))
    return out


def reference_cyclic_pants(n, M):
    """``M (x) M`` with the first factor on holonomy pairs and the second on
    character pairs, as a function of target (c, k) and source ((a, i), (b, j)).

    Column fixture: the reference layout lists source columns as ((a, b), (i, j)) and its
    first boundary circle carries the opposite orientation, so the relabeling
    is (a, i), (b, j) -> ((-a, b), (-i, j)).
    """
    full = np.kron(M, M)

    def entry(c, k, a, i, b, j):
        row = c * n + k
        col = ((-a) % n * n + b) * n * n + ((-i) % n * n + j)
        return full[row, col]
    return entry


def check_cyclic_pants(n, M):
    L = lambda_morphism(fc(builtin_presentation("pants"), cyclic(n)))
    tgt = cyclic_labels(L.target, n)
    single = cyclic_labels(lambda_object(circle_groupoid(cyclic(n))), n)
    entry = reference_cyclic_pants(n, M)
    expected = np.zeros_like(L.entries)
    for r, (c, k) in enumerate(tgt):
        for col, ((a, i), (b, j)) in enumerate(itertools.product(single, single)):
            expected[r, col] = entry(c, k, a, i, b, j)
    assert np.array_equal(L.entries, expected)
    assert set(np.unique(L.entries)) <= {0, 1}


M_Z2 = np.array([[1, 0, 0, 1], [0, 1, 1, 0]])
M_Z3 = np.array([[1, 0, 0, 0, 1, 0, 0, 0, 1],
                 [0, 1, 0, 0, 0, 1, 1, 0, 0],
                 [0, 0, 1, 1, 0, 0, 0, 1, 0]])


@criterion(1, 1.0, "pants matrix Z2 = M (x) M")
def test_criterion_01_pants_z2():
    check_cyclic_pants(2, M_Z2)


@criterion(2, 1.0, "pants matrix Z3 = M (x) M")
def test_criterion_02_pants_z3():
    check_cyclic_pants(3, M_Z3)


# 3, 4: nonabelian blocks ---------------------------------------------------------------

REFERENCE_S3 = np.array([[0, 1, 1], [1, 1, 0], [1, 1, 0], [0, 1, 1]])
REFERENCE_S4 = np.array([[2, 1, 1, 1, 2, 1, 1, 1, 2],
                     [1, 2, 1, 1, 1, 2, 2, 1, 1],
                     [1, 1, 2, 2, 1, 1, 1, 2, 1]])
# the S3 reference lists rows by source basis element, so it is compared with our transpose


@criterion(3, 1.0, "S3 block (t,t) -> 1 up to row permutation")
def test_criterion_03_s3_block():
    B = lambda_block(fc(builtin_presentation("pants"), symmetric(3)), "(12),(12)", "()")
    assert B.shape == (3, 4)
    ours = B.entries.T
    found = [p for p in itertools.permutations(range(4)) if np.array_equal(ours[list(p)], REFERENCE_S3)]
    assert found, "no row permutation matches"
    assert sorted(map(tuple, ours)) == sorted(map(tuple, REFERENCE_S3))


# our Z3 x Z3 character columns (i, j) map to the reference (i, -j)
def s4_relabel(i, j):
    return i, (-j) % 3


@criterion(4, 10.0, "S4 block (s,s) -> s with provenance")
def test_criterion_04_s4_block():
    B = lambda_block(fc(builtin_presentation("pants"), symmetric(4)), "(123),(123)", "(132)")
    assert B.shape == (3, 9)
    ours = B.entries
    relabelled = np.zeros_like(ours)
    for i, j in itertools.product(range(3), repeat=2):
        pi, pj = s4_relabel(i, j)
        relabelled[:, pi * 3 + pj] = ours[:, i * 3 + j]
    assert np.array_equal(relabelled, REFERENCE_S4)
    # the frozen relabeling is the one a search over factorwise relabelings finds
    hits = []
    for p, q in itertools.product(itertools.permutations(range(3)), repeat=2):
        cols = [p[i] * 3 + q[j] for i in range(3) for j in range(3)]
        cand = np.zeros_like(ours)
        cand[:, cols] = ours
        if np.array_equal(cand, REFERENCE_S4):
            hits.append((p, q))
    assert ((0, 1, 2), (0, 2, 1)) in hits
    contributors = {(label, aut) for entries in B.provenance.values() for label, aut, _ in entries}
    assert sorted(aut for _, aut in contributors) == [1, 3]
    for entries in B.provenance.values():
        assert len(entries) == 2


# 5: skeleton tables ----------------------------------------------------------------------

def element_type(G, g):
    return {1: "1", 2: "t", 3: "s"}[int(G.element_orders[g])]


def pair_type(G, g1, g2):
    a, b = element_type(G, g1), element_type(G, g2)
    if a == b == "t" and g1 != g2:
        b = "t'"
    if a == b == "s" and g1 != g2:
        b = "s2"
    return a, b


PAIR_TABLE = [
    (("1", "1"), 6, "1"), (("1", "t"), 2, "t"), (("1", "s"), 3, "s"), (("t", "1"), 2, "t"),
    (("t", "t"), 2, "1"), (("t", "t'"), 1, "s"), (("t", "s"), 1, "t"), (("s", "1"), 3, "s"),
    (("s", "t"), 1, "t"), (("s", "s"), 3, "s"), (("s", "s2"), 3, "1"),
]


@criterion(5, 1.0, "skeleta of S3//S3 and (S3 x S3)//S3")
def test_criterion_05_skeleton_tables():
    G = symmetric(3)
    sk = circle_groupoid(G).skeleton
    assert [element_type(G, int(r)) for r in sk.reps] == ["1", "t", "s"]
    assert sk.aut_orders == [6, 2, 3]
    X = fc(builtin_presentation("pants"), G).apex
    sk2 = X.skeleton
    assert len(sk2) == 11
    rows = []
    for c, r in enumerate(sk2.reps):
        g1, g2 = (int(v) for v in X.carrier[r])
        rows.append((pair_type(G, g1, g2), sk2.aut_orders[c], element_type(G, int(G.table[g1, g2]))))
    assert rows == PAIR_TABLE


# 6: rank formula -------------------------------------------------------------------------

def centralizer_class_count(G, g):
    T = G.table
    C = np.nonzero(T[g] == T[:, g])[0]
    sub = T[np.ix_(C, C)]
    commuting = int(np.sum(sub == sub.T))
    return Fraction(commuting, len(C))


@criterion(6, 5.0, "circle-basis rank = sum of centralizer class numbers")
def test_criterion_06_rank_formula():
    for name, make in CORPUS.items():
        G = make()
        expected = sum(centralizer_class_count(G, int(cls[0])) for cls in G.classes)
        assert lambda_object(circle_groupoid(G)).rank == expected, name
        if name == "S3":
            assert expected == 8


# 7: Mednykh ------------------------------------------------------------------------------

MEDNYKH_CASES = [(f"Z{n}", g) for n in range(2, 7) for g in (1, 2, 3)] + [("S3", 1), ("S3", 2), ("S4", 1)]


@criterion(7, 60.0, "hom counts agree with the Mednykh formula")
def test_criterion_07_mednykh():
    for name, g in MEDNYKH_CASES:
        G = CORPUS[name]()
        P = surface_presentation(g, 0)
        count = len(solve_relations(G, P.generators, P.relations))
        assert Fraction(count) == mednykh_hom_count(G, g), (name, g)


# 8: functoriality -------------------------------------------------------------------------

@criterion(8, 60.0, "functoriality and pants o pants-dagger ~ twice punctured torus")
def test_criterion_08_functoriality():
    from hypothesis import given, settings, strategies as st

    names = ["annulus", "twice_punctured_torus", "pants_rev_pants"]
    for gname in ["Z2", "Z3", "S3"]:
        G = CORPUS[gname]()
        rev, pants = fc(builtin_presentation("pants_rev"), G), fc(builtin_presentation("pants"), G)
        glued = compose_spans(rev, pants)
        tpt = fc(builtin_presentation("twice_punctured_torus"), G)
        assert equivalent_skeletons(glued.apex, tpt.apex)
        assert np.array_equal(lambda_morphism(glued).entries,
                              lambda_morphism(pants).entries @ lambda_morphism(rev).entries)
        spans = {"annulus": fc(builtin_presentation("annulus"), G), "twice_punctured_torus": tpt,
                 "pants_rev_pants": glued}
        mats = {k: lambda_morphism(v).entries for k, v in spans.items()}
        # over S3 a composite of two glued spans has ~10^9 pullback morphisms
        pool, longest = (names, 3) if G.order < 6 else (names[:2], 2)

        @given(st.lists(st.sampled_from(pool), min_size=2, max_size=longest))
        @settings(max_examples=12, deadline=None, database=None, derandomize=True)
        def chain(seq):
            total, expected = spans[seq[0]], mats[seq[0]]
            for k in seq[1:]:
                total = compose_spans(total, spans[k])
                expected = mats[k] @ expected
            assert np.array_equal(lambda_morphism(total).entries, expected)

        chain()


# 9: fusion ------------------------------------------------------------------------------

@criterion(9, 120.0, "pants product associative with disk unit")
def test_criterion_09_fusion():
    for name in ["Z2", "Z3", "Z4", "Z2xZ2", "S3"]:
        G = CORPUS[name]()
        N = fusion_coefficients(lambda_morphism(fc(builtin_presentation("pants"), G)))
        unit = lambda_morphism(fc(builtin_presentation("disk"), G)).entries[:, 0]
        assert fusion_check(N, unit) == {"associative": True, "first_failure": None,
                                         "left_unit": True, "right_unit": True}, name


# 10: closed 2-morphisms ------------------------------------------------------------------

@criterion(10, 30.0, "closed amplitudes: cylinder delta/|Aut|, idempotent; surfaces |Hom|/|G|")
def test_criterion_10_closed():
    for name in ["Z2", "S3"]:
        G = CORPUS[name]()
        for g in (0, 1, 2):
            Z = closed_2morphism(fc_three(builtin_three_cobordism(f"cylinder:{g}"), G))
            F = Z.as_fractions()
            for r in range(len(F)):
                for c in range(len(F)):
                    assert F[r][c] == (Fraction(1, Z.row_aut[r]) if r == c else 0)
            assert compose_closed(Z, Z) == Z
            P = surface_presentation(g, 0)
            hom = len(solve_relations(G, P.generators, P.relations))
            value = dw_closed_invariant(builtin_three_cobordism(f"surface:{g}"), G).as_fractions()
            assert value == [[Fraction(hom, G.order)]], (name, g)


# 11: twisted sector ---------------------------------------------------------------------

def one_dim_projective_characters(G, cocycle, modulus):
    N = modulus * G.order
    found = []
    for vals in itertools.product(range(N), repeat=G.order):
        v = np.array(vals)
        if np.all((v[:, None] + v[None, :] - cocycle * G.order - v[G.table]) % N == 0):
            found.append(np.exp(2j * np.pi * v / N))
    return found


def rounded(rows):
    return sorted(tuple(np.round(np.asarray(r), 8)) for r in rows)


@criterion(11, 60.0, "twisted sector (a)-(d)")
def test_criterion_11_twisted():
    # (a) associativity iff cocycle, both directions
    for n, p in [(2, 1), (3, 1), (4, 3)]:
        theta = transgress_to_loop_groupoid(builtin_omega_cyclic(n, p))
        X = theta.groupoid
        assert is_cocycle(theta) and TwistedGroupoidAlgebra(X, theta).is_associative()[0]
        f, g = X.composable_pairs()
        broken = 0
        for a, b in zip(f, g):
            bad = GroupoidCochain(X, 2, theta.modulus,
                                  lambda x, y, a=a, b=b: theta.values(x, y) + ((x == a) & (y == b)))
            assert bool(is_cocycle(bad)) == TwistedGroupoidAlgebra(X, bad).is_associative()[0]
            broken += not is_cocycle(bad)
        assert broken > 0
    # (b) trivially decorated linearization equals the plain one on the corpus
    for name, make in CORPUS.items():
        G = make()
        w = GroupCocycle3(G, np.zeros((G.order,) * 3, dtype=np.int64), 1)
        for surface in ["pants", "disk", "annulus"]:
            P = builtin_presentation(surface)
            assert np.array_equal(lambda_twisted_morphism(decorate(P, G, w)).entries,
                                  lambda_morphism(fc(P, G)).entries), (name, surface)
    # (c) the Z2 level-one transgression
    theta = transgress_to_loop_groupoid(builtin_omega_cyclic(2, 1))
    assert is_cocycle(theta)
    odd = 1 * 2 + 1  # morphism (h = 1) at the object x = 1
    assert theta.phase(odd, odd) == Phase.of(1, 2)
    irr = twisted_irreps(twisted_algebra(theta.groupoid, theta))
    assert irr.rank == 4 and irr.dims == [1, 1, 1, 1]
    for cls in irr.classes:
        assert rounded(cls.characters) == rounded(one_dim_projective_characters(cls.group, cls.cocycle, cls.modulus))
    # (d) coboundary 3-cocycles transgress to coboundaries with an exact primitive
    coboundaries = [builtin_omega_cyclic(n, 0) for n in range(1, 13)]
    rng = np.random.default_rng(0xD1C5)
    for G in [symmetric(3), dihedral(4), direct_product(cyclic(2), cyclic(2)), cyclic(8)]:
        coboundaries.append(group_coboundary(G, random_normalized_2cochain(G, 4, rng), 4))
    for w in coboundaries:
        theta = transgress_to_loop_groupoid(w)
        alpha = find_primitive(theta)
        assert alpha is not None
        assert (coboundary(alpha) / theta).is_trivial()


# 12: determinism ------------------------------------------------------------------------

Q8 = json.dumps({"type": "perm", "degree": 8, "name": "Q8",
                 "generators": [[1, 4, 3, 6, 5, 0, 7, 2], [2, 7, 4, 1, 6, 3, 0, 5]]})
CLI_RUNS = [
    ["character-table", "--group", "sym:4"],
    ["character-table", "--group", Q8],
    ["circle-basis", "--group", "dih:4", "--format", "csv"],
    ["circle-basis", "--group", "cyc:3", "--omega", "zn:3:1", "--format", "json"],
    ["pants-matrix", "--group", "cyc:3", "--format", "csv"],
    ["pants-matrix", "--group", "cyc:2", "--omega", "zn:2:1", "--format", "json"],
    ["block", "--group", "sym:4", "--block", "(123),(123)", "(132)", "--provenance"],
    ["surface-dim", "--group", "sym:3", "--genus", "2"],
    ["closed-invariant", "--group", "sym:3", "--presentation", "cylinder:1"],
    ["validate-cocycle", "--group", "cyc:6", "--omega", "zn:6:5"],
    ["transgress", "--group", "cyc:4", "--omega", "zn:4:2"],
    ["fusion-check", "--group", "sym:3", "--format", "json"],
]


@criterion(12, 120.0, "CLI output is byte-identical across runs")
def test_criterion_12_determinism():
    for argv in CLI_RUNS:
        outs = [subprocess.run([sys.executable, "-m", "dw2vect.cli", *argv], capture_output=True, check=True).stdout
                for _ in range(2)]
        assert outs[0] == outs[1], argv
        assert outs[0]
