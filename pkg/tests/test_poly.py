from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from templie.poly import (BETA, ONE, ZERO, PolyMatrix, ScalarPoly, beta_from_q, exact_rank,
                          poly_eval, poly_matrix_from_numbers, q_from_beta)

coeffs = st.lists(st.integers(-50, 50), max_size=6)
polys = coeffs.map(ScalarPoly)


def test_trimming_and_zero():
    assert ScalarPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert ScalarPoly([0, 0]) == ZERO
    assert not ZERO
    assert ZERO.degree == -1


def test_str_form():
    assert str(BETA * BETA + 4) == "b^2 + 4"
    assert str(-BETA) == "-b"
    assert str(ZERO) == "0"


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert a * ONE == a


@given(polys, polys, st.fractions(max_denominator=20))
def test_evaluation_is_a_homomorphism(a, b, x):
    assert poly_eval(a * b, x) == poly_eval(a, x) * poly_eval(b, x)
    assert poly_eval(a + b, x) == poly_eval(a, x) + poly_eval(b, x)


monic = st.tuples(coeffs, st.sampled_from([1, -1])).map(lambda t: ScalarPoly(t[0] + [t[1]]))


@given(polys, monic)
def test_division_by_monic(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys, polys.filter(bool))
def test_exact_div_roundtrip(a, b):
    assert (a * b).exact_div(b) == a


def test_non_integral_quotient_raises():
    with pytest.raises(ArithmeticError):
        ScalarPoly([0, 1]).divmod(ScalarPoly([0, 2]))
    with pytest.raises(ArithmeticError):
        (BETA + 1).exact_div(BETA)
    with pytest.raises(ZeroDivisionError):
        BETA.divmod(ZERO)


def test_pow_and_hash():
    assert (BETA + 1) ** 3 == ScalarPoly([1, 3, 3, 1])
    assert hash(ScalarPoly([1, 2])) == hash(ScalarPoly([1, 2, 0]))
    assert len({ScalarPoly([1]), ONE, ScalarPoly.const(1)}) == 1


def test_exact_evaluation_types():
    p = ScalarPoly([1, -3, 2])
    assert poly_eval(p, Fraction(1, 2)) == 0
    assert isinstance(poly_eval(p, 3), int)
    assert poly_eval(p, 0.5) == pytest.approx(0.0)
    assert poly_eval(p, 1j) == pytest.approx(1 - 3j - 2)


@pytest.mark.parametrize("beta", [-2.5, -2.0, -1.0, 0.0, 0.5, 1.99, 2.0, 3.0])
def test_q_from_beta_roundtrip(beta):
    qv = q_from_beta(beta)
    assert qv.q.imag >= 0
    assert beta_from_q(qv.q) == pytest.approx(beta, abs=1e-12)


def test_q_special_points():
    assert q_from_beta(0).q == pytest.approx(1j)
    assert q_from_beta(2).q == pytest.approx(1)
    assert q_from_beta(0, upper=False).q == pytest.approx(-1j)


mats = st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(polys, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)).map(PolyMatrix)


@given(mats)
def test_matrix_identity_and_transpose(m):
    I = PolyMatrix.identity(m.rows)
    assert I @ m == m
    assert m @ I == m
    assert m.T.T == m
    assert (m + m.T).is_symmetric()


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(*[
    st.lists(st.lists(polys, min_size=n, max_size=n), min_size=n, max_size=n).map(PolyMatrix)
    for _ in range(3)])))
def test_matrix_associativity(abc):
    a, b, c = abc
    assert (a @ b) @ c == a @ (b @ c)
    assert (a @ b).T == b.T @ a.T


@given(mats, st.fractions(max_denominator=10))
def test_matrix_evaluation_bridge(m, x):
    exact = m.evaluate(x)
    approx = m.evaluate(float(x))
    assert np.allclose(exact.astype(float), approx, rtol=1e-9, atol=1e-9)
    sq = (m @ m).evaluate(x)
    assert (sq == exact.dot(exact)).all()


def test_evaluate_shapes_and_dtypes():
    m = PolyMatrix([[BETA, ONE], [ZERO, BETA * BETA]])
    assert m.evaluate(2).tolist() == [[2, 1], [0, 4]]
    assert m.evaluate(0.5).dtype == float
    assert m.evaluate(1j).dtype == complex
    assert m.max_degree() == 2
    assert m.nonzero_entries() == [(0, 0, BETA), (0, 1, ONE), (1, 1, BETA * BETA)]


@pytest.mark.parametrize("rows,rank", [
    ([[1, 2], [2, 4]], 1),
    ([[1, 0], [0, 1]], 2),
    ([[0, 0], [0, 0]], 0),
    ([[1, 2, 3], [4, 5, 6], [7, 8, 9]], 2),
])
def test_exact_rank(rows, rank):
    assert exact_rank(poly_matrix_from_numbers(rows).evaluate(1)) == rank
