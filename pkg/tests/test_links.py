from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from templie.diagrams import Diagram, SizeError, TLElement, enumerate_diagrams, generator
from templie.links import (Link, act, enumerate_links, gram_matrix, hamiltonian_matrix,
                           link_from_left_ends, pairing, representation_matrix, standard_dim,
                           verify_gram_adjoint)
from templie.poly import BETA, PolyMatrix, ScalarPoly

b = BETA


def nd_pairs(n_max):
    return [(n, d) for n in range(1, n_max + 1) for d in range(n % 2, n + 1, 2)]


@pytest.mark.parametrize("n,d", nd_pairs(12))
def test_basis_size_matches_dimension_formula(n, d):
    assert len(enumerate_links(n, d)) == standard_dim(n, d)


@pytest.mark.parametrize("n,d", [(6, 1), (3, 5), (0, 0), (4, -2)])
def test_invalid_nd(n, d):
    with pytest.raises(ValueError):
        enumerate_links(n, d)


def test_six_zero_order_and_fractions():
    links = enumerate_links(6, 0)
    assert [str(w) for w in links] == ["()()()", "()(())", "(())()", "(()())", "((()))"]
    assert [w.dyadic() * 32 for w in links] == [21, 22, 25, 26, 28]


def test_six_four_order():
    arcs = [w.arcs for w in enumerate_links(6, 4)]
    assert arcs == [[(5, 6)], [(4, 5)], [(3, 4)], [(2, 3)], [(1, 2)]]


@pytest.mark.parametrize("n,d", nd_pairs(9))
def test_dyadic_order_is_strict_and_left_ends_recover(n, d):
    links = enumerate_links(n, d)
    fr = [w.dyadic() for w in links]
    assert fr == sorted(set(fr))
    for w in links:
        assert link_from_left_ends(n, d, w.left_ends) == w


def test_invalid_links_rejected():
    with pytest.raises(ValueError):
        Link.from_arcs(4, [(1, 3), (2, 4)])
    with pytest.raises(ValueError):
        Link.from_arcs(3, [(1, 3)])  # defect under an arc


def test_action_examples():
    d1 = Diagram.from_pairs(6, [(1, 7), (6, 12), (9, 10), (8, 11), (2, 3), (4, 5)])
    d2 = Diagram.from_pairs(6, [(7, 8), (9, 10), (3, 4), (2, 5), (1, 11), (6, 12)])
    v = Link.from_arcs(6, [(3, 4), (5, 6)])
    res = act(d1, v)
    assert res == (Link.from_arcs(6, [(2, 3), (4, 5)]), 1)
    assert res[0].defects == [1, 6]
    assert act(d2, v) is None


def test_action_size_mismatch():
    with pytest.raises(SizeError):
        act(generator(3, 1), enumerate_links(4, 0)[0])


def test_loop_hamiltonian_six_zero():
    expected = PolyMatrix([
        [3 * b, 2, 2, 0, 2],
        [1, 2 * b, 0, 1, 0],
        [1, 0, 2 * b, 1, 0],
        [0, 1, 1, 2 * b, 2],
        [0, 0, 0, 1, b],
    ]).scale(-1)
    assert hamiltonian_matrix(6, 0) == expected


def test_minus_two_beta_is_an_eigenvalue_of_h60():
    for beta in (-1.3, 0.4, 2.7):
        ev = np.linalg.eigvals(hamiltonian_matrix(6, 0).evaluate(beta))
        assert np.min(np.abs(ev + 2 * beta)) < 1e-10


def test_small_hamiltonians():
    assert hamiltonian_matrix(2, 0) == PolyMatrix([[-b]])
    assert hamiltonian_matrix(1, 1) == PolyMatrix([[0]])
    assert hamiltonian_matrix(3, 3) == PolyMatrix([[0]])


@pytest.mark.parametrize("n,d", [(n, d) for n, d in nd_pairs(7) if n >= 2])
def test_representation_is_a_homomorphism(n, d):
    diags = enumerate_diagrams(n)
    rng = np.random.default_rng(n * 31 + d)
    for _ in range(6):
        x, y = (diags[k] for k in rng.integers(len(diags), size=2))
        lhs = representation_matrix(TLElement.from_diagram(x) * TLElement.from_diagram(y), n, d)
        rhs = representation_matrix(x, n, d) @ representation_matrix(y, n, d)
        assert lhs == rhs


@pytest.mark.parametrize("n", range(1, 13))
def test_top_gram_is_one(n):
    assert gram_matrix(n, n) == PolyMatrix([[1]])


def test_gram_six_zero_diagonal_and_symmetry():
    G = gram_matrix(6, 0)
    assert G.is_symmetric()
    assert all(G[i, i] == ScalarPoly.beta(3) for i in range(G.rows))


@pytest.mark.parametrize("n,d", nd_pairs(8))
def test_gram_self_adjointness(n, d):
    assert verify_gram_adjoint(n, d) == []


@pytest.mark.parametrize("n,d", [(n, d) for n, d in nd_pairs(9) if d < n])
def test_gram_dominant_diagonal_degree(n, d):
    # every off-diagonal pairing has strictly fewer loops than the diagonal one
    G = gram_matrix(n, d)
    top = (n - d) // 2
    for i in range(G.rows):
        assert G[i, i] == ScalarPoly.beta(top)
        for j in range(G.cols):
            if i != j:
                assert G[i, j].degree < top


@given(st.sampled_from(nd_pairs(8)), st.data())
def test_pairing_is_symmetric(nd, data):
    links = enumerate_links(*nd)
    v = data.draw(st.sampled_from(links))
    w = data.draw(st.sampled_from(links))
    assert pairing(v, w) == pairing(w, v)


def test_gram_positive_definite_at_large_beta():
    G = gram_matrix(6, 0).evaluate(10.0)
    assert np.min(np.linalg.eigvalsh(G)) > 0
    assert gram_matrix(6, 0).evaluate(Fraction(10)).dtype == object
