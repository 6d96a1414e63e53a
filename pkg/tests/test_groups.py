import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dw2vect.errors import EnumerationCapExceeded, GroupError
from dw2vect.groups import (
    build_group,
    centralizer,
    commutator_word,
    cyclic,
    dihedral,
    direct_product,
    evaluate_word,
    find_isomorphism,
    from_permutations,
    from_table,
    is_isomorphic,
    solve_relations,
    symmetric,
)


@pytest.mark.parametrize("spec,order", [
    ({"type": "cyclic", "n": 3}, 3),
    ({"type": "symmetric", "n": 4}, 24),
    ({"type": "dihedral", "n": 4}, 8),
    ({"type": "perm", "degree": 4, "generators": [[1, 0, 2, 3], [1, 2, 3, 0]]}, 24),
    ({"type": "product", "factors": [{"type": "cyclic", "n": 2}, {"type": "cyclic", "n": 2}]}, 4),
    ({"type": "cayley", "table": [[0, 1], [1, 0]]}, 2),
])
def test_build_group_orders(spec, order):
    G = build_group(spec)
    assert G.order == order
    G.validate()


def test_cyclic_addition():
    G = cyclic(3)
    assert G.mul(1, 2) == 0
    assert [G.label(g) for g in range(3)] == ["0", "1", "2"]


def test_symmetric_labels_and_classes():
    G = symmetric(3)
    assert G.label(0) == "()"
    assert sorted(len(c) for c in G.classes) == [1, 2, 3]
    assert len(symmetric(4).classes) == 5
    assert G.element_index("(12)") != G.element_index("(13)")


def test_dihedral_labels():
    G = dihedral(3)
    assert {G.label(g) for g in range(6)} == {"e", "r", "r2", "s", "rs", "r2s"}
    assert not G.is_abelian


def test_from_table_moves_identity_to_zero():
    # Z3 written with the identity in the middle
    t = [[2, 0, 1], [0, 1, 2], [1, 2, 0]]
    G = from_table(t)
    assert np.array_equal(G.table[0], np.arange(3))


@pytest.mark.parametrize("table", [
    [[0, 1], [0, 1]],
    [[0, 1, 2], [1, 0, 2], [2, 2, 0]],
    [[1, 0], [0, 1], [0, 0]],
])
def test_from_table_rejects_non_groups(table):
    with pytest.raises(GroupError):
        from_table(table)


def test_non_associative_latin_square_rejected():
    # a loop of order 5 that is not a group
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        from_table(t)


def test_invalid_permutation_rejected():
    with pytest.raises(GroupError):
        from_permutations(3, [[0, 0, 1]])


def brute_force_solutions(G, ngens, relations):
    out = []
    for tup in itertools.product(range(G.order), repeat=ngens):
        if all(evaluate_word(G, rel, np.array([tup]))[0] == 0 for rel in relations):
            out.append(tup)
    return out


@pytest.mark.parametrize("name", ["Z2", "Z3", "S3", "D4"])
def test_commuting_pairs_match_brute_force(name):
    G = {"Z2": cyclic(2), "Z3": cyclic(3), "S3": symmetric(3), "D4": dihedral(4)}[name]
    rel = [commutator_word(0, 1)]
    sols = solve_relations(G, 2, rel)
    assert [tuple(r) for r in sols] == brute_force_solutions(G, 2, rel)


def test_commuting_pair_counts():
    # |Hom(Z^2, G)| = |G| * #classes
    for G in (symmetric(3), symmetric(4), dihedral(4)):
        assert len(solve_relations(G, 2, [commutator_word(0, 1)])) == G.order * len(G.classes)
    assert len(solve_relations(symmetric(3), 2, [commutator_word(0, 1)])) == 18


def test_genus_two_s3():
    rel = [commutator_word(0, 1) + commutator_word(2, 3)]
    assert len(solve_relations(symmetric(3), 4, rel)) == 486


def test_enumeration_cap_message():
    with pytest.raises(EnumerationCapExceeded, match="raise --cap"):
        solve_relations(symmetric(4), 6, [], cap=10**6)


def test_centralizer_of_double_transposition():
    G = symmetric(4)
    g = G.element_index("(12)(34)")
    C = centralizer(G, g)
    assert C.order == 8
    assert is_isomorphic(C.as_group(), dihedral(4))


@pytest.mark.parametrize("a,b,iso", [
    (dihedral(3), symmetric(3), True),
    (cyclic(4), direct_product(cyclic(2), cyclic(2)), False),
    (direct_product(cyclic(2), cyclic(3)), cyclic(6), True),
    (dihedral(4), direct_product(cyclic(2), cyclic(4)), False),
])
def test_isomorphism(a, b, iso):
    phi = find_isomorphism(a, b)
    assert (phi is not None) == iso
    if phi is not None:
        assert np.array_equal(phi[a.table], b.table[np.ix_(phi, phi)])


@given(st.sampled_from([cyclic(5), symmetric(3), dihedral(4), direct_product(cyclic(2), cyclic(3))]), st.data())
def test_group_axioms(G, data):
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    T = G.table
    assert T[T[a, b], c] == T[a, T[b, c]]
    assert T[a, G.inv[a]] == 0
    assert G.class_of[G.conj(b, a)] == G.class_of[a]


@given(st.sampled_from([symmetric(3), dihedral(4)]), st.data())
def test_evaluate_word_inverse(G, data):
    word = data.draw(st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=6))
    inverse = [(g, -e) for g, e in reversed(word)]
    assign = np.array([data.draw(st.lists(st.integers(0, G.order - 1), min_size=3, max_size=3))])
    assert evaluate_word(G, word + inverse, assign)[0] == 0
