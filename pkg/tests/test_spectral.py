import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from templie.intertwiner import s_matrix
from templie.links import hamiltonian_matrix
from templie.poly import PolyMatrix, ScalarPoly, q_from_beta
from templie.spectral import (BETA_GRID, FAIL, INCONCLUSIVE, PASS, check_positive_definite,
                              check_reality, cluster, gram_positivity_scan, jordan_detect,
                              loop_reality, poly_det, squarefree_part, spectral_inclusion, xxz_reality)
from templie.spins import h_xxz_matrix
from templie.structure import GENERIC, ell_from_beta


def test_grid_contains_degenerate_points():
    assert 0 in BETA_GRID and 2 in BETA_GRID


def test_cluster_and_ambiguity():
    groups, amb = cluster([0, 1e-9, 1.0], 1e-7)
    assert sorted(len(g) for g in groups) == [1, 2]
    assert not amb
    _, amb = cluster([0, 1.5e-7], 1e-7)
    assert amb


@pytest.mark.parametrize("m,sizes", [
    (np.array([[1.0, 1.0], [0.0, 1.0]]), [[2]]),
    (np.diag([1.0, 2.0]), [[1], [1]]),
    (np.eye(3, k=1), [[3]]),
    (np.array([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]], dtype=float), [[2, 2]]),
    (np.diag([5.0, 5.0, 5.0]), [[1, 1, 1]]),
])
def test_jordan_known_forms(m, sizes):
    entries, status = jordan_detect(m)
    assert status == PASS
    assert sorted(e.block_sizes for e in entries) == sorted(sizes)


@given(st.integers(2, 6), st.integers(0, 10 ** 6))
def test_jordan_under_similarity(n, seed):
    rng = np.random.default_rng(seed)
    # one 2x2 block at 0, simple eigenvalues 2, 3, ... elsewhere
    J = np.diag([0.0, 0.0] + [float(k) for k in range(2, n)]) + np.diag([1.0] + [0.0] * (n - 2), k=1)
    P = rng.normal(size=(n, n)) + n * np.eye(n)
    if np.linalg.cond(P) > 50:
        return
    entries, status = jordan_detect(P @ J @ np.linalg.inv(P))
    if status == PASS:
        sizes = sorted(k for e in entries for k in e.block_sizes)
        assert sizes == [1] * (n - 2) + [2]


def test_close_eigenvalues_are_inconclusive():
    _, status = jordan_detect(np.diag([1.0, 1.0 + 1.5e-7]))
    assert status == INCONCLUSIVE


def test_xxz_two_sites_at_i():
    entries, status = jordan_detect(h_xxz_matrix(2, 1j))
    assert status == PASS
    blocks = [(e, k) for e in entries for k in e.block_sizes if k > 1]
    assert len(blocks) == 1
    e, k = blocks[0]
    assert k == 2 and abs(e.eigenvalue) < 1e-7


def test_reality_report_json():
    rep = check_reality(np.array([[0.0, -1.0], [1.0, 0.0]]), matrix_id={"x": 1})
    assert rep.status == FAIL
    doc = json.loads(json.dumps(rep.to_json()))
    assert doc["matrix_id"] == {"x": 1}


@pytest.mark.parametrize("n,d", [(n, d) for n in range(1, 8) for d in range(n % 2, n + 1, 2)])
@pytest.mark.parametrize("beta", BETA_GRID)
def test_loop_reality(n, d, beta):
    rep = loop_reality(n, d, beta)
    assert rep.status == PASS
    assert rep.max_imag < 1e-8
    assert rep.diagonalisable


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("beta", BETA_GRID)
def test_xxz_reality(n, beta):
    assert xxz_reality(n, beta).max_imag < 1e-7


def test_complex_beta_breaks_reality():
    # -2 beta is an eigenvalue of H_{6,0}
    H = hamiltonian_matrix(6, 0).evaluate(0.3 + 0.4j)
    assert check_reality(H).status == FAIL


@pytest.mark.parametrize("n,d", [(6, 0), (7, 1), (8, 2)])
def test_positive_definite(n, d):
    rep = check_positive_definite(s_matrix(n, d), BETA_GRID, n=n, d=d)
    assert rep.ok
    assert min(rep.min_pivots) > 0


def test_positivity_detects_indefinite():
    m = PolyMatrix([[ScalarPoly([0, 1])]])  # [[beta]]
    rep = check_positive_definite(m, [-1.0, 1.0])
    assert rep.failures == [-1.0]
    with pytest.raises(ValueError):
        check_positive_definite(PolyMatrix([[1, 2], [0, 1]]), [0.0])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("beta", [-1.0, 0.7, 1.7])
def test_inclusion(n, beta):
    rep = spectral_inclusion(n, beta)
    assert rep.equal and rep.included
    assert rep.status == PASS


def test_strict_inclusion_exists():
    assert any(spectral_inclusion(n, b).strict for n in (3, 4, 5) for b in (-1.0, 0.7, 1.7))


def test_poly_det():
    m = PolyMatrix([[ScalarPoly([0, 1]), 1], [1, ScalarPoly([0, 1])]])
    assert poly_det(m) == ScalarPoly([-1, 0, 1])


def test_gram_scan_four_zero():
    scan = gram_positivity_scan(4, 0)
    assert scan.det_real_roots == [-1.0, 0.0, 1.0]
    assert scan.beta_c_estimate == 1.0
    assert all(ell_from_beta(r) != GENERIC for r in scan.det_real_roots)
    assert scan.positive_from == pytest.approx(1.01)


def test_gram_scan_repeated_roots():
    # det G_{6,0} = beta^5 (beta^2 - 1)^4 (beta^2 - 2), factored by hand
    scan = gram_positivity_scan(6, 0)
    x2 = ScalarPoly([0, 0, 1])
    assert scan.det == ScalarPoly([0, 1]) ** 5 * (x2 - 1) ** 4 * (x2 - 2)
    assert scan.det_real_roots == pytest.approx([-2 ** 0.5, -1.0, 0.0, 1.0, 2 ** 0.5])
    assert scan.beta_c_estimate == pytest.approx(2 ** 0.5)
    assert [ell_from_beta(r) for r in scan.det_real_roots] == [4, 3, 2, 3, 4]


def test_squarefree_part():
    p = ScalarPoly([1, -1]) ** 3 * ScalarPoly([2, 1])
    sf = squarefree_part(p)
    assert [c / sf[-1] for c in sf] == [-2, 1, 1]  # (1 - b)(2 + b) up to scale


def test_gram_scan_window_validation():
    with pytest.raises(ValueError):
        gram_positivity_scan(4, 0, (1.0, -1.0))


def test_q_from_beta_is_used_for_xxz():
    q = q_from_beta(1.0).q
    assert np.allclose(h_xxz_matrix(3, q), h_xxz_matrix(3, q_from_beta(1.0)))
