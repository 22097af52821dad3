"""Floating-point certification: real spectra, positive-definiteness of the
inner products, spectral inclusion between the three Hamiltonians, Jordan
block detection and Gram positivity scans.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .intertwiner import ExactCheck, s_matrix, verify_pseudo_hermitian
from .links import check_nd, gram_matrix, hamiltonian_matrix
from .poly import PolyMatrix, ScalarPoly, q_from_beta
from .spins import h_spin_sector, h_xxz_sector

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

DEFAULT_TOL = 1e-7
BETA_GRID = (-2.5, -2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 1.99, 2.0, 3.0)


@dataclass
class SpectralReport:
    matrix_id: dict
    eigenvalues: list[complex]
    max_imag: float
    diagonalisable: bool | None
    tolerance: float
    status: str
    evidence: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        d = asdict(self)
        d["eigenvalues"] = [[float(z.real), float(z.imag)] for z in self.eigenvalues]
        return d


def _eval(m: PolyMatrix, beta: float) -> np.ndarray:
    return m.evaluate(float(beta))


# clustering and Jordan structure ----------------------------------------------------


def cluster(values: Sequence[complex], tol: float) -> tuple[list[list[complex]], bool]:
    """Single-linkage clusters of eigenvalues; the flag is True when two
    clusters come within 2*tol of each other (ambiguous split)."""
    vals = sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag))
    clusters: list[list[complex]] = []
    for z in vals:
        for c in clusters:
            if min(abs(z - w) for w in c) < tol:
                c.append(z)
                break
        else:
            clusters.append([z])
    # merge transitively
    merged = True
    while merged:
        merged = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                if min(abs(a - b) for a in clusters[i] for b in clusters[j]) < tol:
                    clusters[i].extend(clusters.pop(j))
                    merged = True
                    break
            if merged:
                break
    ambiguous = any(min(abs(a - b) for a in clusters[i] for b in clusters[j]) < 2 * tol
                    for i in range(len(clusters)) for j in range(i + 1, len(clusters)))
    return clusters, ambiguous


@dataclass
class JordanEntry:
    eigenvalue: complex
    algebraic: int
    geometric: int
    block_sizes: list[int]
    borderline: bool

    @property
    def defective(self) -> bool:
        return self.geometric < self.algebraic


def _numeric_rank(a: np.ndarray, threshold: float) -> tuple[int, bool]:
    sv = np.linalg.svd(a, compute_uv=False)
    rank = int(np.sum(sv >= threshold))
    borderline = bool(np.any((sv >= threshold / 2) & (sv < 2 * threshold)))
    return rank, borderline


def jordan_detect(m: np.ndarray, tol: float = DEFAULT_TOL) -> tuple[list[JordanEntry], str]:
    """Algebraic/geometric multiplicities per eigenvalue cluster, with block
    sizes from the ranks of powers of (M - lambda I)."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if n == 0:
        return [], PASS
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    eig = np.linalg.eigvals(m)
    clusters, ambiguous = cluster(eig, tol * scale)
    out = []
    status = INCONCLUSIVE if ambiguous else PASS
    eye = np.eye(n)
    for c in clusters:
        lam = complex(np.mean(c))
        a = m - lam * eye
        alg = len(c)
        ranks = [n]
        borderline = False
        power = eye.astype(complex)
        for _ in range(alg):
            power = power @ a
            r, b = _numeric_rank(power, tol * scale ** (len(ranks)))
            borderline |= b and len(ranks) == 1
            ranks.append(r)
            if ranks[-1] == ranks[-2] or ranks[-1] == n - alg:
                break
        geo = n - ranks[1]
        # number of blocks of size >= k is ranks[k-1] - ranks[k]
        counts = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
        sizes = []
        for k in range(len(counts), 0, -1):
            exact_k = counts[k - 1] - (counts[k] if k < len(counts) else 0)
            sizes.extend([k] * exact_k)
        if sum(sizes) != alg:
            borderline = True
        if borderline:
            status = INCONCLUSIVE
        out.append(JordanEntry(lam, alg, geo, sorted(sizes, reverse=True), borderline))
    return out, status


# reality ----------------------------------------------------------------------------------


def check_reality(m: np.ndarray, tol: float = 1e-9, matrix_id: dict | None = None,
                  jordan_tol: float | None = None) -> SpectralReport:
    """Eigenvalues of a general square matrix; passes iff max |Im| < tol."""
    m = np.asarray(m)
    mid = matrix_id or {}
    try:
        eig = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        return SpectralReport(mid, [], float("nan"), None, tol, INCONCLUSIVE, {"error": str(exc)})
    max_imag = float(np.max(np.abs(eig.imag))) if len(eig) else 0.0
    evidence = {}
    diag = None
    if jordan_tol is not None:
        blocks, jstatus = jordan_detect(m, jordan_tol)
        diag = not any(b.defective for b in blocks) if jstatus == PASS else None
        evidence["jordan_status"] = jstatus
        evidence["defective"] = [(b.eigenvalue.real, b.algebraic, b.geometric)
                                 for b in blocks if b.defective]
    status = PASS if max_imag < tol else FAIL
    if diag is False:
        status = FAIL
    elif diag is None and jordan_tol is not None and status == PASS:
        status = INCONCLUSIVE
    return SpectralReport(mid, list(eig), max_imag, diag, tol, status, evidence)


def loop_reality(n: int, d: int, beta: float, tol: float = 1e-8,
                 jordan_tol: float = DEFAULT_TOL) -> SpectralReport:
    """Reality of H_{n,d} at beta, certified through the inner product S.

    With S = R^T R (Cholesky), S H = H^T S makes R H R^{-1} symmetric, so its
    eigenvalues are real and H is diagonalisable.  The raw matrix is also run
    through the general eigensolver and the Jordan detector as a cross-check.
    """
    H = _eval(hamiltonian_matrix(n, d), beta)
    S = _eval(s_matrix(n, d), beta)
    mid = {"kind": "loop", "n": n, "d": d, "beta": beta}
    evidence: dict = {}
    try:
        R = np.linalg.cholesky(S).T
        sym = R @ H @ np.linalg.inv(R)
        asym = float(np.max(np.abs(sym - sym.T))) if sym.size else 0.0
        evidence["similarity_asymmetry"] = asym
        eig_sym = np.linalg.eigvalsh((sym + sym.T) / 2)
        evidence["route"] = "similarity"
    except np.linalg.LinAlgError:
        eig_sym = None
        evidence["route"] = "general"
    raw = check_reality(H, tol, mid, jordan_tol)
    evidence.update(raw.evidence)
    evidence["raw_max_imag"] = raw.max_imag
    if eig_sym is not None:
        eigs = [complex(x) for x in eig_sym]
        return SpectralReport(mid, eigs, raw.max_imag, raw.diagonalisable, tol, raw.status, evidence)
    return SpectralReport(mid, raw.eigenvalues, raw.max_imag, raw.diagonalisable, tol, raw.status,
                          evidence)


def xxz_spectrum(n: int, beta: float) -> np.ndarray:
    """Eigenvalues of H_XXZ at q = q(beta), sector by sector."""
    q = q_from_beta(beta)
    out = []
    for k in range(n + 1):
        s = Fraction(n - 2 * k, 2)
        out.extend(np.linalg.eigvals(h_xxz_sector(n, q, s)))
    return np.array(out)


def xxz_reality(n: int, beta: float, tol: float = DEFAULT_TOL) -> SpectralReport:
    eig = xxz_spectrum(n, beta)
    max_imag = float(np.max(np.abs(eig.imag)))
    mid = {"kind": "xxz", "n": n, "beta": beta, "q": [q_from_beta(beta).q.real, q_from_beta(beta).q.imag]}
    return SpectralReport(mid, list(eig), max_imag, None, tol, PASS if max_imag < tol else FAIL)


def hspin_spectrum(L: int, beta: float) -> np.ndarray:
    out = []
    for k in range(L + 1):
        s = Fraction(L - 2 * k, 2)
        out.extend(np.linalg.eigvalsh(_eval(h_spin_sector(L, s), beta)))
    return np.array(out)


# positive-definiteness ------------------------------------------------------------------


@dataclass
class PositivityReport:
    n: int | None
    d: int | None
    samples: list[float]
    min_pivots: list[float]
    failures: list[float]
    tolerance: float

    @property
    def ok(self) -> bool:
        return not self.failures


def check_positive_definite(S: PolyMatrix, beta_samples: Iterable[float], tol: float = 1e-12,
                            n: int | None = None, d: int | None = None) -> PositivityReport:
    if not S.is_symmetric():
        raise ValueError("S must be symmetric")
    samples = [float(b) for b in beta_samples]
    pivots, failures = [], []
    for b in samples:
        m = _eval(S, b)
        try:
            L = np.linalg.cholesky(m)
            piv = float(np.min(np.diag(L) ** 2)) if m.size else float("inf")
        except np.linalg.LinAlgError:
            piv = float("-inf")
        pivots.append(piv)
        if not piv > tol:
            failures.append(b)
    return PositivityReport(n, d, samples, pivots, failures, tol)


def check_pseudo_hermitian(n: int, d: int) -> ExactCheck:
    return verify_pseudo_hermitian(n, d)


# spectral inclusion -------------------------------------------------------------------------


@dataclass
class InclusionReport:
    n: int
    beta: float
    tol: float
    xxz: list[float]
    loop_union: list[float]
    hspin: list[float]
    equal: bool
    included: bool
    strict: bool
    status: str
    extra_hspin: list[float] = field(default_factory=list)


def _distinct(values, tol) -> tuple[list[complex], bool]:
    clusters, amb = cluster(values, tol)
    return [complex(np.mean(c)) for c in clusters], amb


def _match(a: list[complex], b: list[complex], tol: float) -> tuple[bool, bool]:
    """Every element of a is within tol of b; second flag marks near misses."""
    ok, near = True, False
    for z in a:
        dist = min((abs(z - w) for w in b), default=float("inf"))
        if dist >= tol:
            ok = False
            if dist < 2 * tol:
                near = True
    return ok, near


def spectral_inclusion(n: int, beta: float, tol: float = DEFAULT_TOL) -> InclusionReport:
    xxz, amb1 = _distinct(xxz_spectrum(n, beta), tol)
    loop_vals = []
    for d in range(n % 2, n + 1, 2):
        loop_vals.extend(loop_reality(n, d, beta).eigenvalues)
    loop, amb2 = _distinct(loop_vals, tol)
    hs, amb3 = _distinct(hspin_spectrum(n - 1, beta), tol)
    eq1, near1 = _match(xxz, loop, tol)
    eq2, near2 = _match(loop, xxz, tol)
    inc1, near3 = _match(loop, hs, tol)
    inc2, near4 = _match(xxz, hs, tol)
    extra = [z.real for z in hs if min((abs(z - w) for w in loop), default=float("inf")) >= tol]
    equal = eq1 and eq2
    included = inc1 and inc2
    ambiguous = amb1 or amb2 or amb3 or near1 or near2 or near3 or near4
    if equal and included and not ambiguous:
        status = PASS
    elif ambiguous:
        status = INCONCLUSIVE
    else:
        status = FAIL
    return InclusionReport(n, beta, tol, [z.real for z in xxz], [z.real for z in loop],
                           [z.real for z in hs], equal, included, bool(extra), status, extra)


# Gram positivity ----------------------------------------------------------------------------


def poly_det(m: PolyMatrix) -> ScalarPoly:
    """Exact determinant over Z[beta] by fraction-free (Bareiss) elimination."""
    n = m.rows
    if n == 0:
        return ScalarPoly.const(1)
    a = [list(r) for r in m.data]
    sign = 1
    prev = ScalarPoly.const(1)
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ScalarPoly()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


@dataclass
class GramScan:
    n: int
    d: int
    window: tuple[float, float]
    step: float
    det: ScalarPoly
    grid: list[float]
    min_eigs: list[float]
    positive_from: float | None
    det_sign_changes: list[float]
    det_real_roots: list[float]
    beta_c_estimate: float | None


def _qpoly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = a[:]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        k = len(a) - len(b)
        c = a[-1] / b[-1]
        q[k] = c
        for i, x in enumerate(b):
            a[i + k] -= c * x
        while a and a[-1] == 0:
            a.pop()
    return q, a


def squarefree_part(p: ScalarPoly) -> list[Fraction]:
    """p / gcd(p, p') over Q, lowest degree first; its roots are simple."""
    a = [Fraction(c) for c in p.coeffs]
    if len(a) < 2:
        return a
    g, h = a, [k * c for k, c in enumerate(a)][1:]
    while h and any(h):
        _, r = _qpoly_divmod(g, h)
        g, h = h, r
    quot, _ = _qpoly_divmod(a, g)
    while quot and quot[-1] == 0:
        quot.pop()
    return quot


def _bisect(p: ScalarPoly, a: float, b: float, iters: int = 80) -> float:
    fa = p(a)
    for _ in range(iters):
        mid = (a + b) / 2
        fm = p(mid)
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return (a + b) / 2


def gram_positivity_scan(n: int, d: int, beta_window: tuple[float, float] = (-3.0, 3.0),
                         step: float = 0.01) -> GramScan:
    check_nd(n, d)
    lo, hi = map(float, beta_window)
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi or step <= 0:
        raise ValueError("invalid scan window")
    G = gram_matrix(n, d)
    det = poly_det(G)
    count = int(round((hi - lo) / step))
    grid = [round(lo + k * step, 12) for k in range(count + 1)]
    mins = [float(np.min(np.linalg.eigvalsh(_eval(G, b)))) for b in grid]
    positive_from = None
    for b, m in zip(reversed(grid), reversed(mins)):
        if m > 0:
            positive_from = b
        else:
            break
    changes = []
    vals = [det(b) for b in grid]
    for k in range(len(grid) - 1):
        if vals[k] == 0:
            changes.append(grid[k])
        elif vals[k] * vals[k + 1] < 0:
            changes.append(_bisect(det, grid[k], grid[k + 1]))
    roots = []
    if det.degree > 0:
        # root the square-free part: repeated roots would come back smeared off the axis
        sf = squarefree_part(det)
        for r in np.roots([float(c) for c in reversed(sf)]):
            if abs(r.imag) < 1e-9 and lo <= r.real <= hi:
                roots.append(float(r.real))
    roots = sorted(set(round(r, 12) for r in roots))
    return GramScan(n, d, (lo, hi), step, det, grid, mins, positive_from, changes, roots,
                    max(roots) if roots else None)
