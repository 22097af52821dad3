"""Spin bases and the three spin-chain Hamiltonians.

A state on L spins is an int whose bit L-k holds spin k (spin 1 is the most
significant bit); a set bit means spin down.  With this packing the dyadic
fraction of a state is index / 2^L, so sorting by index is the dyadic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .poly import BETA, PolyMatrix, QValue, ScalarPoly, q_from_beta

# states ---------------------------------------------------------------------


def is_down(state: int, k: int, L: int) -> bool:
    """Spin k (1-based) is down."""
    return bool(state >> (L - k) & 1)


def spin_value(state: int, k: int, L: int) -> int:
    return -1 if is_down(state, k, L) else 1


def state_from_string(s: str) -> int:
    """'+-+' style (also accepts 'u'/'d')."""
    out = 0
    for ch in s:
        out = (out << 1) | (1 if ch in "-d" else 0)
    return out


def state_to_string(state: int, L: int) -> str:
    return "".join("-" if is_down(state, k, L) else "+" for k in range(1, L + 1))


def state_from_spins(spins) -> int:
    out = 0
    for v in spins:
        out = (out << 1) | (1 if v == -1 else 0)
    return out


def dyadic_spin(state: int, L: int) -> Fraction:
    return Fraction(state, 2 ** L)


def magnetisation(state: int, L: int) -> Fraction:
    downs = bin(state).count("1")
    return Fraction(L - 2 * downs, 2)


@dataclass(frozen=True)
class SpinSector:
    L: int
    s: Fraction
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def labels(self) -> list[str]:
        return [state_to_string(x, self.L) for x in self.basis]


def sector_downs(L: int, s) -> int:
    s = Fraction(s)
    twice = 2 * s
    if twice.denominator != 1 or abs(twice) > L or (L - int(twice)) % 2:
        raise ValueError(f"no magnetisation-{s} sector on {L} spins")
    return (L - int(twice)) // 2


@lru_cache(maxsize=None)
def _sector_cached(L: int, downs: int) -> tuple[int, ...]:
    states = [sum(1 << (L - k) for k in c) for c in combinations(range(1, L + 1), downs)]
    return tuple(sorted(states))


def enumerate_sector(L: int, s) -> SpinSector:
    downs = sector_downs(L, s)
    return SpinSector(L, Fraction(s), _sector_cached(L, downs))


def sector_by_downs(L: int, downs: int) -> SpinSector:
    return SpinSector(L, Fraction(L - 2 * downs, 2), _sector_cached(L, downs))


def all_sectors(L: int) -> list[SpinSector]:
    return [sector_by_downs(L, k) for k in range(L + 1)]


# the hermitian Hamiltonian --------------------------------------------------


def _hspin_column(state: int, L: int) -> dict[int, ScalarPoly]:
    """Image of a basis state under the exact hermitian Hamiltonian on L spins."""
    out: dict[int, ScalarPoly] = {}
    downs = [is_down(state, k, L) for k in range(1, L + 1)]
    diag = sum(downs[j] and downs[j + 1] for j in range(L - 1)) - sum(downs)
    if diag:
        out[state] = BETA * diag
    for j in range(L - 1):
        if downs[j] != downs[j + 1]:
            flipped = state ^ (1 << (L - 1 - j)) ^ (1 << (L - 2 - j))
            out[flipped] = ScalarPoly.const(-1)
    return out


def h_spin_matrix(L: int) -> PolyMatrix:
    """Full 2^L x 2^L matrix of the hermitian Hamiltonian on L spins."""
    m = PolyMatrix.zeros(2 ** L, 2 ** L)
    for x in range(2 ** L):
        for y, c in _hspin_column(x, L).items():
            m.data[y][x] = c
    return m


@lru_cache(maxsize=None)
def h_spin_sector(L: int, s) -> PolyMatrix:
    """Restriction to magnetisation s, rows and columns in dyadic order."""
    sec = enumerate_sector(L, s)
    index = {x: k for k, x in enumerate(sec.basis)}
    m = PolyMatrix.zeros(sec.dim, sec.dim)
    for j, x in enumerate(sec.basis):
        for y, c in _hspin_column(x, L).items():
            m.data[index[y]][j] = c
    return m


def h_spin_for_link_sector(n: int, d: int) -> PolyMatrix:
    """The sector of the (n-1)-spin Hamiltonian paired with V_{n,d}: s = (d-1)/2."""
    return h_spin_sector(n - 1, Fraction(d - 1, 2))


def sz_total(L: int) -> np.ndarray:
    return np.diag([float(magnetisation(x, L)) for x in range(2 ** L)])


def sz_total_exact(L: int) -> PolyMatrix:
    m = PolyMatrix.zeros(2 ** L, 2 ** L)
    for x in range(2 ** L):
        v = magnetisation(x, L) * 2  # 2 S^z keeps entries integral
        m.data[x][x] = ScalarPoly.const(int(v))
    return m


# local Pauli operators as numpy arrays ----------------------------------------

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
# basis order (+, -): sigma^+ raises - to +
SPLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SMINUS = np.array([[0, 0], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def site_operator(ops: dict[int, np.ndarray], L: int) -> np.ndarray:
    """Kronecker product with ``ops[k]`` on site k (1-based), identity elsewhere."""
    out = np.ones((1, 1), dtype=complex)
    for k in range(1, L + 1):
        out = np.kron(out, ops.get(k, I2))
    return out


def chi_e(n: int, i: int, q: complex) -> np.ndarray:
    """Spin-chain image of the generator e_i on n sites."""
    if not 1 <= i <= n - 1:
        raise IndexError(f"generator index {i} out of range for n={n}")
    q = complex(q)
    beta = q + 1 / q
    eye = np.eye(2 ** n, dtype=complex)
    xx = site_operator({i: SX, i + 1: SX}, n)
    yy = site_operator({i: SY, i + 1: SY}, n)
    zz = site_operator({i: SZ, i + 1: SZ}, n)
    zi = site_operator({i: SZ}, n)
    zj = site_operator({i + 1: SZ}, n)
    return 0.5 * (xx + yy - 0.5 * beta * (zz - eye) + 0.5 * (q - 1 / q) * (zi - zj))


def _as_q(q) -> complex:
    if isinstance(q, QValue):
        return q.q
    return complex(q)


def h_xxz_matrix(n: int, q) -> np.ndarray:
    """-sum_i chi(e_i) on (C^2)^n."""
    q = _as_q(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    out = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i in range(1, n):
        out -= chi_e(n, i, q)
    return out


def restrict_to_sector(m: np.ndarray, L: int, s) -> np.ndarray:
    idx = list(enumerate_sector(L, s).basis)
    return m[np.ix_(idx, idx)]


def h_xxz_sector(n: int, q, s) -> np.ndarray:
    return restrict_to_sector(h_xxz_matrix(n, q), n, s)


def h_xxz_for_beta(n: int, beta: float) -> np.ndarray:
    return h_xxz_matrix(n, q_from_beta(beta))


# the beta = 0 representation on n-1 spins -----------------------------------


def tau_matrix(n: int, i: int) -> PolyMatrix:
    """tau(e_i) = s^-_{i-1} s^+_i + s^+_i s^-_{i+1} on n-1 spins (boundary terms dropped)."""
    if not 1 <= i <= n - 1:
        raise IndexError(f"generator index {i} out of range for n={n}")
    L = n - 1
    m = PolyMatrix.zeros(2 ** L, 2 ** L)
    one = ScalarPoly.const(1)
    for x in range(2 ** L):
        # sigma^+_i needs spin i down; then the neighbour goes from up to down
        if not is_down(x, i, L):
            continue
        raised = x ^ (1 << (L - i))
        for nb in (i - 1, i + 1):
            if 1 <= nb <= L and not is_down(raised, nb, L):
                y = raised ^ (1 << (L - nb))
                m.data[y][x] = m.data[y][x] + one
    return m


# the general open XXZ chain and the parameter correspondence ------------------


@dataclass(frozen=True)
class ChainParameters:
    L: int
    delta: complex
    p: complex
    p_prime: complex
    alpha: complex


def hbar_matrix(params: ChainParameters) -> np.ndarray:
    """-1/2 (sum XX + YY + Delta ZZ + p Z_1 + p' Z_L) - alpha I."""
    L = params.L
    out = np.zeros((2 ** L, 2 ** L), dtype=complex)
    for i in range(1, L):
        out += site_operator({i: SX, i + 1: SX}, L)
        out += site_operator({i: SY, i + 1: SY}, L)
        out += params.delta * site_operator({i: SZ, i + 1: SZ}, L)
    out += params.p * site_operator({1: SZ}, L)
    out += params.p_prime * site_operator({L: SZ}, L)
    return -0.5 * out - params.alpha * np.eye(2 ** L)


@dataclass(frozen=True)
class ParameterMap:
    xxz: ChainParameters
    hermitian: ChainParameters
    xxz_residual: float
    hermitian_residual: float


def bethe_parameter_map(n: int, beta: float, q=None) -> ParameterMap:
    """Parameters putting both Hamiltonians in the general open-chain form.

    ``q`` defaults to the upper-half-plane root of q + 1/q = beta.  The
    residuals are max-abs differences between each Hamiltonian and the
    general form evaluated at its parameters.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    qv = q_from_beta(beta).q if q is None else _as_q(q)
    b = qv + 1 / qv
    xxz = ChainParameters(n, -b / 2, (qv - 1 / qv) / 2, -(qv - 1 / qv) / 2, (n - 1) * b / 4)
    herm = ChainParameters(n - 1, -beta / 2, -beta / 2, -beta / 2, n * beta / 4)
    r1 = float(np.max(np.abs(h_xxz_matrix(n, qv) - hbar_matrix(xxz))))
    hs = h_spin_matrix(n - 1).evaluate(float(beta), dtype=complex)
    r2 = float(np.max(np.abs(hs - hbar_matrix(herm))))
    return ParameterMap(xxz, herm, r1, r2)
