"""Modified q-numbers, the maps f_{n,d} from links to spin sectors, the
induced inner products S = f^T f, and exact checks of the intertwining and
injectivity properties.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .links import Link, check_nd, enumerate_links, hamiltonian_matrix
from .poly import BETA, ONE, ZERO, PolyMatrix, ScalarPoly
from .spins import enumerate_sector, h_spin_for_link_sector, spin_value, state_to_string


class ArcDepthError(ArithmeticError):
    """A coefficient needed a negative arc depth with no vanishing factor."""


# q-numbers --------------------------------------------------------------------


@lru_cache(maxsize=None)
def qnum(m: int) -> ScalarPoly:
    """{m} with {0}=0, {1}=1, {m+1} = -beta{m} - {m-1}; odd in m."""
    if m < 0:
        return -qnum(-m)
    if m < 2:
        return ScalarPoly.const(m)
    return -BETA * qnum(m - 1) - qnum(m - 2)


@lru_cache(maxsize=None)
def qfactorial(p: int) -> ScalarPoly:
    if p < 0:
        raise ValueError("factorial of a negative integer")
    out = ONE
    for k in range(1, p + 1):
        out = out * qnum(k)
    return out


def qnum_closed_form(m: int, q: complex) -> complex:
    """(-1)^(m-1) (q^m - q^-m) / (q - q^-1), for comparison with the recursion."""
    return (-1) ** (m - 1) * (q ** m - q ** (-m)) / (q - 1 / q)


@dataclass(frozen=True)
class QNumTable:
    values: tuple[ScalarPoly, ...]
    factorials: tuple[ScalarPoly, ...]

    @classmethod
    def build(cls, m_max: int) -> "QNumTable":
        return cls(tuple(qnum(m) for m in range(m_max + 1)),
                   tuple(qfactorial(p) for p in range(m_max + 1)))


# coefficients ------------------------------------------------------------------


def arc_depth(w: Link, arc: tuple[int, int], s: int) -> int:
    """m_s^{i,j} = (1 - sum_{k=i}^{j-1} s_k) / 2 for a state s on n-1 spins."""
    i, j = arc
    if arc not in w.arcs:
        raise ValueError(f"{arc} is not an arc of {w}")
    L = w.n - 1
    total = sum(spin_value(s, k, L) for k in range(i, j))
    return (1 - total) // 2


def coefficient(w: Link, s: int) -> ScalarPoly:
    """c_s(w) = prod over arcs of {m_s^{i,j}}.

    Zero as soon as one depth vanishes.  A negative depth with no vanishing
    factor cannot occur in the right sector and raises ``ArcDepthError``.
    """
    depths = [arc_depth(w, a, s) for a in w.arcs]
    if 0 in depths:
        return ZERO
    if any(m < 0 for m in depths):
        raise ArcDepthError(f"negative arc depth for {w} and {state_to_string(s, w.n - 1)}")
    out = ONE
    for m in depths:
        out = out * qnum(m)
    return out


def _column(w: Link, basis) -> list[ScalarPoly]:
    # arcs and spins have a simple incremental structure: prefix sums of spins
    L = w.n - 1
    arcs = w.arcs
    col = []
    for s in basis:
        prefix = [0]
        for k in range(1, L + 1):
            prefix.append(prefix[-1] + spin_value(s, k, L))
        depths = [(1 - (prefix[j - 1] - prefix[i - 1])) // 2 for i, j in arcs]
        if 0 in depths:
            col.append(ZERO)
            continue
        if any(m < 0 for m in depths):
            raise ArcDepthError(f"negative arc depth for {w} and {state_to_string(s, L)}")
        c = ONE
        for m in depths:
            c = c * qnum(m)
        col.append(c)
    return col


def f_image(w: Link) -> dict[int, ScalarPoly]:
    """f_{n,d}(w) as a map state -> coefficient (zeros omitted)."""
    sec = enumerate_sector(w.n - 1, Fraction(w.d - 1, 2))
    return {s: c for s, c in zip(sec.basis, _column(w, sec.basis)) if c}


@dataclass(frozen=True)
class IntertwinerSet:
    n: int
    d: int
    f: PolyMatrix
    S: PolyMatrix
    links: tuple[Link, ...] = field(repr=False)
    states: tuple[int, ...] = field(repr=False)


@lru_cache(maxsize=None)
def f_only(n: int, d: int) -> PolyMatrix:
    check_nd(n, d)
    links = enumerate_links(n, d)
    sec = enumerate_sector(n - 1, Fraction(d - 1, 2))
    cols = [_column(w, sec.basis) for w in links]
    return PolyMatrix([[cols[j][i] for j in range(len(links))] for i in range(sec.dim)],
                      cols=len(links))


@lru_cache(maxsize=None)
def f_matrix(n: int, d: int) -> IntertwinerSet:
    f = f_only(n, d)
    sec = enumerate_sector(n - 1, Fraction(d - 1, 2))
    return IntertwinerSet(n, d, f, f.T @ f, tuple(enumerate_links(n, d)), sec.basis)


def s_matrix(n: int, d: int) -> PolyMatrix:
    return f_matrix(n, d).S


# verification --------------------------------------------------------------------


@dataclass
class ExactCheck:
    """Outcome of an exact identity check; ``residual`` lists nonzero entries."""

    name: str
    ok: bool
    residual: list[tuple] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_intertwining(n: int, d: int) -> ExactCheck:
    """f H_{n,d} - H_spin f == 0 as a polynomial matrix."""
    f = f_only(n, d)
    res = f @ hamiltonian_matrix(n, d) - h_spin_for_link_sector(n, d) @ f
    bad = res.nonzero_entries()
    return ExactCheck(f"intertwine({n},{d})", not bad, bad)


def verify_pseudo_hermitian(n: int, d: int) -> ExactCheck:
    """S H - H^T S == 0."""
    S = s_matrix(n, d)
    H = hamiltonian_matrix(n, d)
    bad = (S @ H - H.T @ S).nonzero_entries()
    return ExactCheck(f"pseudo({n},{d})", not bad, bad)


@dataclass
class InjectivityCertificate:
    n: int
    d: int
    pivots: list[int]            # pivot row (sector index) per column
    pivot_states: list[str]
    dim_gap: int
    expected_gap: int
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self):
        return self.ok


def expected_dim_gap(n: int, d: int) -> int:
    k = (n - d - 4) // 2
    return comb(n - 1, k) if k >= 0 else 0


def verify_injectivity(n: int, d: int) -> InjectivityCertificate:
    """Pivot certificate: column w has entry 1 at the state whose down spins sit
    exactly at L(w), and every other nonzero entry at a smaller dyadic state."""
    inter = f_matrix(n, d)
    f, states = inter.f, inter.states
    L = n - 1
    row_of = {s: k for k, s in enumerate(states)}
    problems = []
    pivots = []
    for j, w in enumerate(inter.links):
        s_w = sum(1 << (L - i) for i in w.left_ends)
        if s_w not in row_of:
            problems.append(f"column {j}: pivot state not in sector")
            pivots.append(-1)
            continue
        r = row_of[s_w]
        pivots.append(r)
        if f[r, j] != ONE:
            problems.append(f"column {j}: pivot entry {f[r, j]} != 1")
        for i in range(r + 1, f.rows):
            if f[i, j]:
                problems.append(f"column {j}: nonzero entry below the pivot at row {i}")
    if len(set(pivots)) != len(pivots):
        problems.append("pivot rows are not distinct")
    gap = f.rows - f.cols
    want = expected_dim_gap(n, d)
    if gap != want:
        problems.append(f"dimension gap {gap} != {want}")
    return InjectivityCertificate(n, d, pivots,
                                  [state_to_string(states[r], L) if r >= 0 else "?" for r in pivots],
                                  gap, want, problems)


def depth_consistency(n: int, d: int) -> ExactCheck:
    """c_s is nonzero exactly when every arc depth is positive (all sector states)."""
    sec = enumerate_sector(n - 1, Fraction(d - 1, 2))
    bad = []
    for w in enumerate_links(n, d):
        for s in sec.basis:
            depths = [arc_depth(w, a, s) for a in w.arcs]
            try:
                c = coefficient(w, s)
            except ArcDepthError:
                bad.append((str(w), state_to_string(s, n - 1), "negative depth"))
                continue
            if bool(c) != all(m > 0 for m in depths):
                bad.append((str(w), state_to_string(s, n - 1), depths))
    return ExactCheck(f"depths({n},{d})", not bad, bad)

