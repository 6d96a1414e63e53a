from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dw2vect.errors import GroupoidError
from dw2vect.field_theory import builtin_presentation, fc
from dw2vect.groupoids import (
    GroupoidFunctor,
    adjoint_groupoid,
    compose_spans,
    conjugation_groupoid,
    discrete_groupoid,
    dump_groupoid,
    equivalent_skeletons,
    groupoid_cardinality,
    identity_functor,
    identity_span,
    one_object_groupoid,
    product_groupoid,
    weak_pullback,
    weighted_cardinality,
)
from dw2vect.groups import commutator_word, cyclic, direct_product, solve_relations, symmetric


def test_adjoint_skeleton_s3():
    X = adjoint_groupoid(symmetric(3))
    X.validate()
    sk = X.skeleton
    assert sk.aut_orders == [6, 2, 3]
    assert list(sk.sizes) == [1, 3, 2]


def test_pair_conjugation_skeleton_s3():
    G = symmetric(3)
    X = conjugation_groupoid(G, solve_relations(G, 2, []))
    assert (X.n_objects, X.n_morphisms) == (36, 216)
    assert X.skeleton.aut_orders == [6, 2, 3, 2, 2, 1, 1, 3, 1, 3, 3]


def test_cardinality_is_objects_over_group(small_group):
    X = adjoint_groupoid(small_group)
    assert groupoid_cardinality(X) == Fraction(X.n_objects, small_group.order)


@pytest.mark.parametrize("arity", [1, 2])
def test_generic_skeleton_agrees_with_action_skeleton(arity):
    from dw2vect.groupoids import _generic_skeleton

    G = symmetric(3)
    X = conjugation_groupoid(G, solve_relations(G, arity, []))
    fast, generic = X.skeleton, _generic_skeleton(X)
    assert np.array_equal(fast.class_of, generic.class_of)
    assert fast.aut_orders == generic.aut_orders


def test_transport_and_representatives(small_group):
    X = adjoint_groupoid(small_group)
    sk = X.skeleton
    u = sk.transport
    assert np.array_equal(X.src[u], sk.reps[sk.class_of])
    assert np.array_equal(X.tgt[u], np.arange(X.n_objects))
    for c, members in enumerate(sk.aut_members):
        assert X.src[members[0]] == X.tgt[members[0]] == sk.reps[c]
        cls, pos = sk.to_representative(members)
        assert np.all(cls == c) and np.array_equal(pos, np.arange(len(members)))


def test_identity_pullback_z2():
    X = adjoint_groupoid(cyclic(2))
    S = compose_spans(identity_span(X), identity_span(X))
    S.validate()
    assert S.apex.n_objects == 4
    assert S.apex.skeleton.aut_orders == [2, 2]
    assert equivalent_skeletons(S.apex, X)


def test_weak_pullback_cardinality_identity():
    # |F x_Z H| = sum over classes of Z of |F^-1 z| |H^-1 z| |Aut z|, here over fusion spans
    G = symmetric(3)
    pants, rev = fc(builtin_presentation("pants"), G), fc(builtin_presentation("pants_rev"), G)
    P, _, _ = weak_pullback(pants.right, rev.left)
    Z = pants.target.skeleton
    expected = Fraction(0)
    for c, r in enumerate(Z.reps):
        fib1 = sum(Fraction(1, pants.apex.skeleton.aut_groups[k].order)
                   for k, x in enumerate(pants.apex.skeleton.reps) if Z.class_of[pants.right.obj_map[x]] == c)
        fib2 = sum(Fraction(1, rev.apex.skeleton.aut_groups[k].order)
                   for k, x in enumerate(rev.apex.skeleton.reps) if Z.class_of[rev.left.obj_map[x]] == c)
        expected += fib1 * fib2 * Z.aut_groups[c].order
    assert groupoid_cardinality(P) == expected


def test_functor_validation_rejects_bad_maps():
    X = adjoint_groupoid(cyclic(3))
    F = GroupoidFunctor(X, X, np.arange(3), np.zeros(X.n_morphisms))
    with pytest.raises(GroupoidError):
        F.validate()


def test_span_feet_mismatch():
    X, Y = adjoint_groupoid(cyclic(2)), adjoint_groupoid(cyclic(3))
    with pytest.raises(GroupoidError):
        compose_spans(identity_span(X), identity_span(Y))


def test_product_groupoid_laws():
    X, Y = adjoint_groupoid(cyclic(2)), adjoint_groupoid(symmetric(3))
    P = product_groupoid(X, Y)
    P.validate()
    assert P.n_objects == X.n_objects * Y.n_objects
    assert groupoid_cardinality(P) == groupoid_cardinality(X) * groupoid_cardinality(Y)
    assert product_groupoid(X) is X
    assert product_groupoid().n_objects == 1


def test_direct_sum_decomposition_of_loop_groupoid():
    A, B = cyclic(2), cyclic(3)
    lhs = adjoint_groupoid(direct_product(A, B))
    rhs = product_groupoid(adjoint_groupoid(A), adjoint_groupoid(B))
    assert equivalent_skeletons(lhs, rhs)
    assert not equivalent_skeletons(adjoint_groupoid(cyclic(4)), adjoint_groupoid(direct_product(A, A)))


def test_weighted_cardinality_requires_invariance():
    X = adjoint_groupoid(symmetric(3))
    from dw2vect.cocycles import cochain_from_array
    w = cochain_from_array(X, 0, np.arange(6) % 2, 2)
    with pytest.raises(Exception):
        weighted_cardinality(X, w)
    ok = cochain_from_array(X, 0, np.zeros(6, dtype=int), 2)
    assert weighted_cardinality(X, ok).as_fraction() == groupoid_cardinality(X)


def test_dump_groupoid_json():
    import json
    doc = json.loads(dump_groupoid(adjoint_groupoid(cyclic(2))))
    assert doc["objects"] == ["0", "1"]
    assert doc["cardinality"] == "1"


def test_discrete_and_one_object():
    assert groupoid_cardinality(discrete_groupoid(3)) == 3
    assert groupoid_cardinality(one_object_groupoid(symmetric(3))) == Fraction(1, 6)


def test_skeleton_of_torus_connections(small_group):
    G = small_group
    X = conjugation_groupoid(G, solve_relations(G, 2, [commutator_word(0, 1)]))
    # classes of commuting pairs = sum over classes of #classes of the centralizer
    from dw2vect.groups import centralizer
    expected = sum(len(centralizer(G, int(c[0])).as_group().classes) for c in G.classes)
    assert len(X.skeleton) == expected


@given(st.sampled_from(["Z2", "Z3", "S3"]), st.data())
def test_composition_associative_and_inverse(name, data):
    G = {"Z2": cyclic(2), "Z3": cyclic(3), "S3": symmetric(3)}[name]
    X = conjugation_groupoid(G, solve_relations(G, 2, []))
    f = data.draw(st.integers(0, X.n_morphisms - 1))
    y = int(X.tgt[f])
    g = int(X.out_at(y, data.draw(st.integers(0, int(X.out_degree[y]) - 1))))
    z = int(X.tgt[g])
    h = int(X.out_at(z, data.draw(st.integers(0, int(X.out_degree[z]) - 1))))
    assert X.compose(h, X.compose(g, f)) == X.compose(X.compose(h, g), f)
    assert X.compose(X.inverse(f), f) == X.identity(X.src[f])


@given(st.sampled_from(["Z2", "S3"]), st.permutations(range(4)))
def test_skeleton_invariance_under_relabeling(name, perm):
    G = {"Z2": cyclic(2), "S3": symmetric(3)}[name]
    X = adjoint_groupoid(G)
    P = product_groupoid(X, discrete_groupoid(4))
    Q = product_groupoid(X, discrete_groupoid(4, [str(p) for p in perm]))
    assert equivalent_skeletons(P, Q)
    assert identity_functor(P).obj_map.shape == (P.n_objects,)
