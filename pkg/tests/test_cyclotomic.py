from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dw2vect import cyclotomic as cy
from dw2vect.cyclotomic import Phase

vectors = st.integers(1, 12).flatmap(
    lambda n: st.lists(st.integers(-5, 5), min_size=n, max_size=n).map(lambda v: np.array(v, dtype=np.int64))
)


@pytest.mark.parametrize("text,expected", [("1/2", Fraction(1, 2)), ("3/2", Fraction(1, 2)), ("-1/3", Fraction(2, 3)), ("0", 0)])
def test_phase_parse_reduces_mod_one(text, expected):
    assert Phase.parse(text).value == expected


def test_phase_group_laws():
    a, b = Phase.of(1, 3), Phase.of(1, 2)
    assert str(a * b) == "5/6"
    assert (a / a).is_trivial
    assert a ** 3 == Phase.of(0)
    assert a * a.inverse() == Phase(0)


@pytest.mark.parametrize("n,coeffs", [(1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1))])
def test_cyclotomic_polynomials(n, coeffs):
    assert tuple(cy.cyclotomic_poly(n)) == coeffs


def test_sum_of_roots_vanishes():
    for n in range(2, 13):
        assert not np.any(cy.reduce(np.ones(n, dtype=np.int64)))


def test_as_rational_rejects_irrational():
    with pytest.raises(ValueError):
        cy.as_rational(cy.root(1, 4))
    assert cy.as_rational(cy.root(2, 4)) == -1


@given(vectors)
def test_reduce_preserves_complex_value(a):
    r = cy.reduce(a)
    assert len(r) == cy.totient(len(a))
    power_basis = np.exp(2j * np.pi * np.arange(len(r)) / len(a))
    assert np.isclose(r @ power_basis, cy.to_complex(a))


@given(vectors, vectors)
def test_multiply_matches_complex_product(a, b):
    n = cy.lcm(len(a), len(b))
    a, b = cy.lift(a, n), cy.lift(b, n)
    assert np.isclose(cy.to_complex(cy.multiply(a, b)), cy.to_complex(a) * cy.to_complex(b))


@given(vectors)
def test_conj_is_complex_conjugate(a):
    assert np.isclose(cy.to_complex(cy.conj(a)), np.conj(cy.to_complex(a)))


@given(st.integers(1, 6), st.integers(1, 5), st.integers(1, 4), st.data())
def test_pair_sum_matches_complex(n, r, m, data):
    draw = lambda: np.array(data.draw(st.lists(st.integers(-3, 3), min_size=r * m * n, max_size=r * m * n)),
                            dtype=np.int64).reshape(r, m, n)
    a, b = draw(), draw()
    out = cy.pair_sum(a, b)
    assert np.allclose(cy.to_complex(out), cy.to_complex(a) @ cy.to_complex(b).T)


def test_equal_across_conductors():
    assert cy.equal(cy.root(1, 2), cy.integer(-1))
    assert cy.equal(cy.root(2, 6), cy.root(1, 3))
    assert not cy.equal(cy.root(1, 3), cy.root(2, 3))


def test_format_phase_sum():
    assert cy.format_phase_sum(cy.root(1, 2)) == "-1"
    assert cy.format_phase_sum(cy.root(1, 4)) == "e(1/4)"
    assert cy.format_phase_sum(np.array([0, 1, 1])) == "-1"
