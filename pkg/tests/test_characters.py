from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dw2vect.characters import (
    character_table,
    dual_character,
    hom_multiplicity,
    induce,
    inner_product,
    murnaghan_nakayama,
    numerical_character_table,
    regular_character,
    restrict,
    tensor_character,
)
from dw2vect.groups import Subgroup, build_group, centralizer, cyclic, dihedral, direct_product, from_permutations, symmetric

# Q8 as the regular permutation representation: i, j acting on {1,i,j,k,-1,-i,-j,-k}
Q8_GENS = [[1, 4, 3, 6, 5, 0, 7, 2], [2, 7, 4, 1, 6, 3, 0, 5]]


def quaternion():
    return from_permutations(8, Q8_GENS, "Q8")


def alternating4():
    return from_permutations(4, [[1, 2, 0, 3], [0, 2, 3, 1]], "A4")


CORPUS = {
    "Z5": cyclic(5), "Z6": cyclic(6), "S3": symmetric(3), "S4": symmetric(4), "S5": symmetric(5),
    "D4": dihedral(4), "D5": dihedral(5), "Z2xS3": direct_product(cyclic(2), symmetric(3)),
    "Q8": quaternion(), "A4": alternating4(),
}


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_orthogonality_and_dimensions(name):
    G = CORPUS[name]
    t = character_table(G)
    t.check()
    assert t.n_irreps == len(G.classes)
    assert sum(d * d for d in t.dims) == G.order
    X = t.complex_values
    sizes = t.class_sizes
    # column orthogonality: sum_chi chi(g) conj(chi(h)) = delta |C_G(g)|
    cols = X.conj().T @ X
    assert np.allclose(cols, np.diag(G.order / sizes), atol=1e-9)


@pytest.mark.parametrize("name,dims", [
    ("S3", [1, 2, 1]), ("S4", [1, 3, 2, 3, 1]), ("S5", [1, 4, 5, 6, 5, 4, 1]),
    ("D4", [1, 1, 1, 1, 2]), ("Q8", [1, 1, 1, 1, 2]), ("A4", [1, 1, 1, 3]),
])
def test_dimension_multisets(name, dims):
    assert sorted(character_table(CORPUS[name]).dims) == sorted(dims)


@pytest.mark.parametrize("name", ["S3", "S4", "D4", "D5", "Z6", "Z2xS3"])
def test_exact_path_for_families(name):
    assert character_table(CORPUS[name]).exact


def test_recognized_centralizer_is_exact():
    G = symmetric(4)
    C = centralizer(G, G.element_index("(12)(34)")).as_group()
    t = character_table(C)
    assert t.exact
    assert sorted(t.dims) == [1, 1, 1, 1, 2]


@pytest.mark.parametrize("name", ["S3", "S4", "D4", "Z6", "Q8"])
def test_numerical_table_agrees_with_exact_up_to_row_order(name):
    G = CORPUS[name]
    exact = character_table(G).complex_values
    num = numerical_character_table(G).complex_values
    key = lambda X: sorted(tuple(np.round(r.real, 6)) + tuple(np.round(r.imag, 6)) for r in X)
    assert key(exact) == key(num)


@pytest.mark.parametrize("shape,cycle_type,value", [
    ((2, 1), (1, 1, 1), 2), ((2, 1), (3,), -1), ((2, 1), (2, 1), 0),
    ((3, 1), (2, 2), -1), ((2, 2), (3, 1), -1), ((3, 2), (5,), 0), ((4, 1), (4, 1), 0),
])
def test_murnaghan_nakayama_values(shape, cycle_type, value):
    assert murnaghan_nakayama(shape, cycle_type) == value


def test_tensor_decomposition_s3():
    t = character_table(symmetric(3))
    std = t.character(t.labels.index("[2,1]"))
    sq = tensor_character(std, std)
    mult = [hom_multiplicity(t.character(i), sq) for i in range(3)]
    assert mult == [1, 1, 1]


def test_regular_character_contains_each_irrep_dim_times():
    G = symmetric(4)
    t = character_table(G)
    reg = regular_character(G)
    assert [hom_multiplicity(t.character(i), reg) for i in range(t.n_irreps)] == t.dims


def test_cyclic_characters_are_phases():
    t = character_table(cyclic(3))
    vals = t.complex_values
    assert np.allclose(np.abs(vals), 1)
    assert np.allclose(vals[1] ** 3, 1)


@given(st.sampled_from(["S3", "S4", "D4", "Z2xS3"]), st.data())
def test_frobenius_reciprocity(name, data):
    G = CORPUS[name]
    g = data.draw(st.integers(0, G.order - 1))
    H = centralizer(G, g)
    K = H.as_group()
    tg, th = character_table(G), character_table(K)
    i = data.draw(st.integers(0, tg.n_irreps - 1))
    j = data.draw(st.integers(0, th.n_irreps - 1))
    lhs = inner_product(induce(th.character(j), H), tg.character(i))
    rhs = inner_product(th.character(j), restrict(tg.character(i), H))
    assert lhs == rhs


@given(st.sampled_from(["S3", "D4", "Z6", "Q8"]), st.data())
def test_dual_and_tensor_inner_products(name, data):
    G = CORPUS[name]
    t = character_table(G)
    i, j = (data.draw(st.integers(0, t.n_irreps - 1)) for _ in range(2))
    a, b = t.character(i), t.character(j)
    expected = 1 if i == j else 0
    val = inner_product(a, b)
    assert (val == expected) if isinstance(val, Fraction) else abs(val - expected) < 1e-9
    # <a (x) dual(b), 1> = <a, b>
    triv = t.character([k for k in range(t.n_irreps) if np.allclose(t.complex_values[k], 1)][0])
    assert hom_multiplicity(triv, tensor_character(a, dual_character(b))) == expected


def test_cayley_table_group_falls_back_or_recognizes():
    G = build_group({"type": "cayley", "table": cyclic(4).table.tolist()})
    t = character_table(G)
    assert sorted(t.dims) == [1, 1, 1, 1]
    Sub = Subgroup(G, (0, 2))
    assert Sub.order == 2
