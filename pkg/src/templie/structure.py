"""Root-of-unity bookkeeping for standard modules: critical values of d,
reflection orbits, the pairing rule decomposing a spin-chain sector into
projective and standard modules, and dimension audits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from math import comb

import numpy as np

from .links import gram_matrix, standard_dim
from .poly import exact_rank

GENERIC = "generic"
GENERIC_BETA = Fraction(7, 3)


def _d_values(n: int) -> list[int]:
    return list(range(n % 2, n + 1, 2))


def is_critical(d: int, ell: int) -> bool:
    return d % ell == ell - 1


@dataclass(frozen=True)
class OrbitPartition:
    n: int
    ell: int
    critical: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]

    def orbit_of(self, d: int) -> tuple[int, ...] | None:
        for o in self.orbits:
            if d in o:
                return o
        return None


def orbit_partition(n: int, ell: int) -> OrbitPartition:
    """Critical d (d = ell-1 mod ell) and the orbits of the others under
    reflection through the critical lines."""
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    ds = _d_values(n)
    critical = tuple(d for d in ds if is_critical(d, ell))
    orbits = []
    placed = set(critical)
    for d in ds:
        if d in placed:
            continue
        m = 2 * ell
        orbit = tuple(x for x in ds if x not in critical
                      and (x % m == d % m or x % m == (-d - 2) % m))
        placed.update(orbit)
        orbits.append(orbit)
    return OrbitPartition(n, ell, critical, tuple(orbits))


def is_semisimple(n: int, ell) -> bool:
    if ell == GENERIC:
        return True
    return ell == 1 or (ell == 2 and n % 2 == 1) or (ell >= 3 and n < ell)


def ell_from_beta(beta: float, max_ell: int = 64, tol: float = 1e-9):
    """Smallest ell with q^(2 ell) = 1 for q + 1/q = beta, or GENERIC."""
    if abs(beta) > 2 + tol:
        return GENERIC
    theta = cmath.phase((beta + cmath.sqrt(complex(beta * beta - 4))) / 2) / math.pi
    for ell in range(1, max_ell + 1):
        x = ell * theta
        if abs(x - round(x)) < tol:
            return ell
    return GENERIC


@dataclass(frozen=True)
class Entry:
    kind: str          # "P" projective, "V" standard, "I" irreducible (generic)
    d: int
    multiplicity: int = 1
    d_minus: int | None = None

    def __str__(self):
        return f"{self.kind}_{{n,{self.d}}}" if self.d_minus is None else f"P_{{n,{self.d}}}"


@dataclass
class Decomposition:
    n: int
    s: Fraction
    ell: object
    entries: list[Entry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def label(self) -> str:
        return " + ".join(f"{e.kind}_{self.n},{e.d}" for e in self.entries)

    def as_tuples(self) -> list[tuple[str, int]]:
        return [(e.kind, e.d) for e in self.entries]


def _check_sector(n: int, s) -> Fraction:
    s = Fraction(s)
    if (2 * s).denominator != 1 or abs(2 * s) > n or (n - int(2 * s)) % 2:
        raise ValueError(f"no magnetisation-{s} sector for n={n}")
    return s


def sector_decomposition(n: int, s, ell) -> Decomposition:
    """Decompose the magnetisation-s sector of (C^2)^n over TL_n.

    Non-semisimple cases follow the pairing rule: keep d >= 2|s|; critical d
    give standard modules; each truncated orbit is paired left to right into
    projectives P_{n,d} (d the right member) and an unpaired rightmost member
    gives a standard module.
    """
    s = _check_sector(n, s)
    lo = abs(2 * s)
    dec = Decomposition(n, s, ell)
    if is_semisimple(n, ell):
        dec.entries = [Entry("I", d) for d in _d_values(n) if d >= lo]
        if ell != GENERIC:
            dec.notes.append("semisimple at this root of unity; generic decomposition used")
        return dec
    part = orbit_partition(n, ell)
    entries = [Entry("V", d) for d in part.critical if d >= lo]
    for orbit in part.orbits:
        kept = [d for d in orbit if d >= lo]
        for k in range(0, len(kept) - 1, 2):
            entries.append(Entry("P", kept[k + 1], d_minus=kept[k]))
        if len(kept) % 2:
            entries.append(Entry("V", kept[-1]))
    entries.sort(key=lambda e: e.d)
    dec.entries = entries
    if ell == 2 and n % 2 == 0:
        dec.notes.append("beta=0: V_{n,0} is isomorphic to I_{n,2}; labels are not identified")
    return dec


# generic irreducible dimensions ---------------------------------------------------

_PRIME = 2_147_483_629  # below 2^31, so products fit in int64


def _rank_mod_p(m: np.ndarray, p: int = _PRIME) -> int:
    a = m.copy() % p
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if not len(nz):
            continue
        r = rank + nz[0]
        a[[rank, r]] = a[[r, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        col = a[:, c].copy()
        col[rank] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - (col[mask, None] * a[rank][None, :]) % p) % p
        rank += 1
    return rank


@lru_cache(maxsize=None)
def gram_rank(n: int, d: int, beta: Fraction = GENERIC_BETA) -> int:
    """Exact rank over Q of the Gram matrix at a rational beta.

    A full rank modulo a prime certifies full rank over Q; otherwise the rank
    is computed by exact rational elimination.
    """
    G = gram_matrix(n, d)
    beta = Fraction(beta)
    num, den = beta.numerator, beta.denominator
    D = max(G.max_degree(), 0)
    # clear denominators: entry beta^k -> num^k den^(D-k)
    ints = np.array([[sum(c * num ** k * den ** (D - k) for k, c in enumerate(x.coeffs)) % _PRIME
                      for x in row] for row in G.data], dtype=np.int64).reshape(G.rows, G.cols)
    r = _rank_mod_p(ints)
    if r == G.rows:
        return r
    return exact_rank(G.evaluate(beta))


def irreducible_dim(n: int, d: int, beta: Fraction = GENERIC_BETA) -> int:
    return gram_rank(n, d, beta)


@dataclass
class AuditResult:
    n: int
    s: Fraction
    ell: object
    total: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.total == self.expected

    def __bool__(self):
        return self.ok


def sector_dim(n: int, s) -> int:
    s = _check_sector(n, s)
    return comb(n, (n - int(2 * s)) // 2)


def dimension_audit(n: int, s, ell) -> AuditResult:
    dec = sector_decomposition(n, s, ell)
    total = 0
    for e in dec.entries:
        if e.kind == "P":
            total += standard_dim(n, e.d_minus) + standard_dim(n, e.d)
        elif e.kind == "V":
            total += standard_dim(n, e.d)
        else:
            total += irreducible_dim(n, e.d)
    return AuditResult(n, dec.s, ell, total, sector_dim(n, s))


def all_sectors(n: int) -> list[Fraction]:
    return [Fraction(n - 2 * k, 2) for k in range(n + 1)]
