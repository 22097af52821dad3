"""The overarched maps g^p on V_{n,0} and exact checks of the identities they
satisfy: the two definitions agree, the g^p version of the intertwining
relation, the three local sufficient conditions on small tensor powers, and
six closed forms for special link shapes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .intertwiner import ExactCheck, coefficient, qfactorial, qnum
from .links import Link, enumerate_links, hamiltonian_matrix, link_index
from .poly import ONE, ZERO, ScalarPoly
from .spins import _hspin_column, is_down, sector_by_downs, spin_value, state_to_string


class SpinVector:
    """Sparse vector on L spins: state bitmask -> ScalarPoly (zeros dropped)."""

    __slots__ = ("L", "terms")

    def __init__(self, L: int, terms: Mapping[int, ScalarPoly] | None = None):
        self.L = L
        self.terms = {s: c for s, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, L: int, state: int, coeff=ONE) -> "SpinVector":
        return cls(L, {state: ScalarPoly.coerce(coeff)})

    @classmethod
    def from_string(cls, s: str, coeff=ONE) -> "SpinVector":
        state = 0
        for ch in s:
            state = (state << 1) | (ch == "-")
        return cls.basis(len(s), state, coeff)

    @classmethod
    def omega(cls, L: int) -> "SpinVector":
        """Sum of all 2^L basis states."""
        return cls(L, {s: ONE for s in range(2 ** L)})

    def __add__(self, other: "SpinVector") -> "SpinVector":
        if self.L != other.L:
            raise ValueError(f"length mismatch {self.L} vs {other.L}")
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, ZERO) + c
        return SpinVector(self.L, out)

    def __neg__(self):
        return SpinVector(self.L, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SpinVector":
        c = ScalarPoly.coerce(c)
        return SpinVector(self.L, {s: x * c for s, x in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SpinVector):
            return NotImplemented
        return self.L == other.L and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def lower(self, k: int) -> "SpinVector":
        """sigma^-_k: spin k goes from up to down, down states are killed."""
        if not 1 <= k <= self.L:
            raise IndexError(k)
        bit = 1 << (self.L - k)
        return SpinVector(self.L, {s | bit: c for s, c in self.terms.items() if not s & bit})

    def diagonal(self, f: Callable[[int], ScalarPoly]) -> "SpinVector":
        return SpinVector(self.L, {s: c * f(s) for s, c in self.terms.items()})

    def sz(self, s: int, k: int) -> int:
        return spin_value(s, k, self.L)

    def __repr__(self):
        body = " + ".join(f"({c})|{state_to_string(s, self.L)}>" for s, c in sorted(self.terms.items()))
        return f"SpinVector({body or '0'})"


def tensor(*parts: SpinVector) -> SpinVector:
    out = SpinVector(0, {0: ONE})
    for v in parts:
        terms: dict[int, ScalarPoly] = {}
        for s1, c1 in out.terms.items():
            for s2, c2 in v.terms.items():
                terms[(s1 << v.L) | s2] = c1 * c2
        out = SpinVector(out.L + v.L, terms)
    return out


def single(spin: int) -> SpinVector:
    """One-spin state |+> (spin=+1) or |-> (spin=-1)."""
    return SpinVector(1, {1 if spin == -1 else 0: ONE})


def apply_hspin(v: SpinVector) -> SpinVector:
    out: dict[int, ScalarPoly] = {}
    for s, c in v.terms.items():
        for t, h in _hspin_column(s, v.L).items():
            out[t] = out.get(t, ZERO) + h * c
    return SpinVector(v.L, out)


def apply_local_h(v: SpinVector, i: int) -> SpinVector:
    """The local operator collecting the terms of the hermitian Hamiltonian that
    touch spin i, with overall sign flipped; neighbours outside 1..L are dropped."""
    L = v.L
    two = qnum(2)
    out: dict[int, ScalarPoly] = {}

    def add(t, c):
        out[t] = out.get(t, ZERO) + c

    nbrs = [k for k in (i - 1, i + 1) if 1 <= k <= L]
    for s, c in v.terms.items():
        di = is_down(s, i, L)
        for k in nbrs:
            if is_down(s, k, L) != di:
                add(s ^ (1 << (L - i)) ^ (1 << (L - k)), c)
        diag = (sum(1 for k in nbrs if is_down(s, k, L)) - 1) if di else 0
        if diag:
            add(s, c * two * diag)
    return SpinVector(L, out)


# g^p by its direct definition ------------------------------------------------------


def _check_w(w: Link) -> None:
    if w.d != 0 or w.n < 2:
        raise ValueError("g^p is defined on links without defects")


def overarch(w: Link, p: int) -> Link:
    """w placed under p nested arcs."""
    n = w.n
    arcs = [(k, n + 2 * p + 1 - k) for k in range(1, p + 1)]
    arcs += [(i + p, j + p) for i, j in w.arcs]
    return Link.from_arcs(n + 2 * p, arcs)


@lru_cache(maxsize=None)
def g_direct(w: Link, p: int) -> SpinVector:
    """g^p(w): restriction of f(w under p arcs) to up spins outside w, divided by {p}!."""
    _check_w(w)
    n = w.n
    L = n - 1
    if p < 0 or 2 * p >= n:
        return SpinVector(L)
    big = overarch(w, p)
    fact = qfactorial(p)
    out = {}
    for mid in sector_by_downs(L, n // 2 + p).basis:
        full = mid << p  # p up spins on each side
        c = coefficient(big, full)
        if c:
            out[mid] = c.exact_div(fact)
    return SpinVector(L, out)


# g^p by recursion on the link shape ---------------------------------------------------


def outer_blocks(w: Link) -> list[tuple[int, int]]:
    """Node ranges (1-based, inclusive) of the outermost arcs of a defect-free link."""
    blocks = []
    i = 1
    while i <= w.n:
        j = w.partner[i - 1] + 1
        blocks.append((i, j))
        i = j + 1
    return blocks


def sublink(w: Link, lo: int, hi: int) -> Link:
    """The part of w on nodes lo..hi, relabelled from 1."""
    arcs = [(i - lo + 1, j - lo + 1) for i, j in w.arcs if lo <= i and j <= hi]
    return Link.from_arcs(hi - lo + 1, arcs)


@lru_cache(maxsize=None)
def g_recursive(w: Link, p: int) -> SpinVector:
    _check_w(w)
    n = w.n
    if p < 0 or 2 * p >= n:
        return SpinVector(n - 1)
    if n == 2:
        return single(-1) if p == 0 else SpinVector(1)
    blocks = outer_blocks(w)
    if len(blocks) == 1:
        inner = sublink(w, 2, n - 1)
        out = SpinVector(n - 1)
        for l, r in itertools.product((1, -1), repeat=2):
            g = g_recursive(inner, p + (l + r) // 2)
            if g:
                out = out + tensor(single(l), g, single(r))
        return out.scale(qnum(p + 1))
    k = blocks[0][1]
    w1, w2 = sublink(w, 1, k), sublink(w, k + 1, n)
    out = SpinVector(n - 1)
    for a in range(p + 1):
        g1 = g_recursive(w1, a)
        if not g1:
            continue
        for s in (1, -1):
            g2 = g_recursive(w2, p - a + (s - 1) // 2)
            if g2:
                out = out + tensor(g1, single(s), g2)
    return out


@dataclass
class GPImage:
    n: int
    p: int
    columns: dict[Link, SpinVector] = field(default_factory=dict)


def g_p_direct(n: int, p: int) -> GPImage:
    img = GPImage(n, p)
    for w in enumerate_links(n, 0):
        v = g_direct(w, p)
        if v:
            img.columns[w] = v
    return img


def g_p_recursive(n: int, p: int, w: Link) -> SpinVector:
    if w.n != n:
        raise ValueError("link size does not match n")
    return g_recursive(w, p)


def compare_definitions(n: int) -> ExactCheck:
    bad = []
    for w in enumerate_links(n, 0):
        for p in range(-1, n // 2 + 1):
            if g_direct(w, p) != g_recursive(w, p):
                bad.append((str(w), p))
    return ExactCheck(f"g-definitions(n={n})", not bad, bad)


def verify_gp_identity(n: int, p: int) -> ExactCheck:
    """H g^p(w) - g^p(h w) == (s^-_1 + s^-_{n-1}) g^{p-1}(w) for every w."""
    links = enumerate_links(n, 0)
    H = hamiltonian_matrix(n, 0)
    index = link_index(n, 0)
    bad = []
    for w in links:
        j = index[w]
        lhs = apply_hspin(g_direct(w, p))
        for i, v in enumerate(links):
            if H[i, j]:
                lhs = lhs - g_direct(v, p).scale(H[i, j])
        prev = g_direct(w, p - 1)
        rhs = prev.lower(1) + prev.lower(n - 1)
        if lhs != rhs:
            bad.append((str(w), p))
    return ExactCheck(f"gp-identity(n={n},p={p})", not bad, bad)


# sufficient conditions ------------------------------------------------------------------


def bracket(shift: int, sites: Iterable[int], sign: int = 1, const_half: int = 0):
    """Diagonal operator {shift + sign*(sum_k sz_k - const_half)/2} as a function of the state."""
    sites = tuple(sites)

    def f(v: SpinVector):
        def value(s: int) -> ScalarPoly:
            total = sum(spin_value(s, k, v.L) for k in sites) - const_half
            if total % 2:
                raise ValueError("bracket argument is not an integer")
            return qnum(shift + sign * total // 2)
        return value

    return f


def _diag(v: SpinVector, *brackets) -> SpinVector:
    for b in brackets:
        v = v.diagonal(b(v))
    return v


def suf1(p: int) -> SpinVector:
    om = SpinVector.omega(4)
    b1 = _diag(om, bracket(p, (1, 4)))
    b2 = _diag(om, bracket(p + 1, (1, 4)))
    out = b1.lower(2).scale(qnum(p + 1)) - b1.lower(1).scale(qnum(p))
    out = out - apply_local_h(b2, 1).scale(qnum(p + 1))
    return out + om.lower(4).lower(1)


def suf2(p: int, a: int) -> SpinVector:
    om = SpinVector.omega(5)
    b1 = _diag(om, bracket(a + 1, (2, 3), sign=-1))
    b2 = _diag(om, bracket(p - a, (2, 3)))
    out = (b1.lower(2) - apply_local_h(b1, 1)).scale(qnum(p + 1)) - b1.lower(1).scale(qnum(p))
    return out + b2.lower(1)


def suf3(a: int, b: int) -> SpinVector:
    om = SpinVector.omega(6)
    b1 = _diag(om, bracket(a + 1, (1, 2), sign=-1), bracket(b + 1, (4, 5), sign=-1))
    b2 = _diag(om, bracket(a + b, (1, 2, 4, 5), sign=-1, const_half=4))
    out = b1.lower(2) + b1.lower(4) - apply_local_h(b1, 3)
    return out + b2.lower(3)


@dataclass
class SufficientReport:
    suf1: ExactCheck
    suf2: ExactCheck
    suf3: ExactCheck

    @property
    def ok(self) -> bool:
        return self.suf1.ok and self.suf2.ok and self.suf3.ok


def verify_sufficient_conditions(p_max: int, a_max: int, b_max: int) -> SufficientReport:
    bad1 = [(p,) for p in range(p_max + 1) if suf1(p)]
    bad2 = [(p, a) for p in range(p_max + 1) for a in range(a_max + 1) if suf2(p, a)]
    bad3 = [(a, b) for a in range(a_max + 1) for b in range(b_max + 1) if suf3(a, b)]
    return SufficientReport(ExactCheck("suf1", not bad1, bad1),
                            ExactCheck("suf2", not bad2, bad2),
                            ExactCheck("suf3", not bad3, bad3))


# six closed forms ---------------------------------------------------------------------


def _g(v: Link, lam: int) -> SpinVector:
    return g_direct(v, lam)


def _shifted(v: Link, offset: int) -> list[tuple[int, int]]:
    return [(i + offset, j + offset) for i, j in v.arcs]


SPINS = (1, -1)


def _accumulate(terms):
    out = None
    for vec in terms:
        if vec is None:
            continue
        out = vec if out is None else out + vec
    return out


def formula1(v: Link, p: int) -> tuple[Link, SpinVector]:
    """(1,n)(2,n-1) around v."""
    m = v.n
    n = m + 4
    w = Link.from_arcs(n, [(1, n), (2, n - 1)] + _shifted(v, 2))
    out = SpinVector(n - 1)
    for r, s, t, u in itertools.product(SPINS, repeat=4):
        g = _g(v, p + (r + s + t + u) // 2)
        if g:
            out = out + tensor(single(r), single(s), g, single(t), single(u))
    out = _diag(out, bracket(p + 1, (1, n - 1))).scale(qnum(p + 1))
    return w, out


def formula2(v: Link, p: int) -> tuple[Link, SpinVector]:
    """(1,2) v (n-1,n)."""
    m = v.n
    n = m + 4
    w = Link.from_arcs(n, [(1, 2), (n - 1, n)] + _shifted(v, 2))
    out = SpinVector(n - 1)
    for r, s, t, u in itertools.product(SPINS, repeat=4):
        g = _g(v, p + (r + s + t + u) // 2 - 2)
        if g:
            out = out + tensor(single(r), single(s), g, single(t), single(u))
    return w, out.lower(1).lower(n - 1)


def _index_range(v: Link) -> range:
    # every a with g^a(v) possibly nonzero; the sums in the closed forms are
    # not cut at p (see the decisions ledger)
    return range((v.n + 1) // 2)


def _layout2(v1: Link, v2: Link, p: int, lam_shift: int, br: Callable[[int, int], Callable]):
    """Shared spin layout l, r, g(v1), s, t, g(v2), u of formulas 3 and 4."""
    n1, n2 = v1.n, v2.n
    n = n1 + n2 + 4
    i = n1 + 3
    out = SpinVector(n - 1)
    for a in _index_range(v1):
        g1 = _g(v1, a)
        if not g1:
            continue
        part = SpinVector(n - 1)
        for l, r, s, t, u in itertools.product(SPINS, repeat=5):
            lam = p + (l + r + s + t + u - 1) // 2
            g2 = _g(v2, lam - a + lam_shift)
            if g2:
                part = part + tensor(single(l), single(r), g1, single(s), single(t), g2, single(u))
        out = out + _diag(part, br(a, i))
    return n, i, out


def formula3(v1: Link, v2: Link, p: int) -> tuple[Link, SpinVector]:
    """(1,n) around [(2,i) over v1] and v2."""
    n, i, out = _layout2(v1, v2, p, 0,
                         lambda a, i: bracket(a + 1, (2, i - 1), sign=-1))
    w = Link.from_arcs(n, [(1, n), (2, i)] + _shifted(v1, 2) + _shifted(v2, i))
    return w, out.scale(qnum(p + 1))


def formula4(v1: Link, v2: Link, p: int) -> tuple[Link, SpinVector]:
    """(1,2), v1, then (i,n) over v2."""
    n, i, out = _layout2(v1, v2, p, -1,
                         lambda a, i: bracket(p - a, (2, i - 1)))
    w = Link.from_arcs(n, [(1, 2), (i, n)] + _shifted(v1, 2) + _shifted(v2, i))
    return w, out.lower(1)


def _layout3(v1: Link, v2: Link, v3: Link, p: int, lam_shift: int, br):
    """Spin layout k, g(v1), l, r, s, g(v2), t, u, g(v3) of formulas 5 and 6."""
    n1, n2, n3 = v1.n, v2.n, v3.n
    i = n1 + 2
    j = i + n2 + 2
    n = j + n3
    out = SpinVector(n - 1)
    for a in _index_range(v1):
        g1 = _g(v1, a)
        if not g1:
            continue
        for b in _index_range(v2):
            g2 = _g(v2, b)
            if not g2:
                continue
            part = SpinVector(n - 1)
            for k, l, r, s, t, u in itertools.product(SPINS, repeat=6):
                lam = p + (k + l + r + s + t + u - 2) // 2
                g3 = _g(v3, lam - a - b + lam_shift)
                if g3:
                    part = part + tensor(single(k), g1, single(l), single(r), single(s), g2,
                                         single(t), single(u), g3)
            out = out + _diag(part, *br(a, b, i, j))
    return n, i, j, out


def formula5(v1: Link, v2: Link, v3: Link, p: int) -> tuple[Link, SpinVector]:
    """[(1,i) over v1][(i+1,j) over v2] v3."""
    n, i, j, out = _layout3(v1, v2, v3, p, 0, lambda a, b, i, j: (
        bracket(a, (1, i - 1), sign=-1, const_half=2),
        bracket(b, (i + 1, j - 1), sign=-1, const_half=2)))
    w = Link.from_arcs(n, [(1, i), (i + 1, j)] + _shifted(v1, 1) + _shifted(v2, i + 1)
                       + _shifted(v3, j))
    return w, out


def formula6(v1: Link, v2: Link, v3: Link, p: int) -> tuple[Link, SpinVector]:
    """(1,j) around [v1, (i,i+1), v2], then v3."""
    n, i, j, out = _layout3(v1, v2, v3, p, -1, lambda a, b, i, j: (
        bracket(a + b, (1, i - 1, i + 1, j - 1), sign=-1, const_half=4),))
    w = Link.from_arcs(n, [(1, j), (i, i + 1)] + _shifted(v1, 1) + _shifted(v2, i + 1)
                       + _shifted(v3, j))
    return w, out.lower(i)


def fixture_links(max_nodes: int = 4) -> list[Link]:
    out = []
    for m in range(2, max_nodes + 1, 2):
        out.extend(enumerate_links(m, 0))
    return out


def special_link_formulas_check(n_max: int, p_max: int, max_sub: int = 4) -> dict[str, ExactCheck]:
    """Compare the six closed forms with g_direct on every fixture instance with
    total size at most n_max and every p <= p_max."""
    fx = fixture_links(max_sub)
    cases: dict[str, list] = {f"F{k}": [] for k in range(1, 7)}
    for p in range(p_max + 1):
        for v in fx:
            if v.n + 4 <= n_max:
                cases["F1"].append((formula1, (v, p)))
                cases["F2"].append((formula2, (v, p)))
        for v1, v2 in itertools.product(fx, repeat=2):
            if v1.n + v2.n + 4 <= n_max:
                cases["F3"].append((formula3, (v1, v2, p)))
                cases["F4"].append((formula4, (v1, v2, p)))
        for v1, v2, v3 in itertools.product(fx, repeat=3):
            if v1.n + v2.n + v3.n + 4 <= n_max:
                cases["F5"].append((formula5, (v1, v2, v3, p)))
                cases["F6"].append((formula6, (v1, v2, v3, p)))
    out = {}
    for name, items in cases.items():
        bad = []
        for fn, args in items:
            w, rhs = fn(*args)
            if g_direct(w, args[-1]) != rhs:
                bad.append((str(w), args[-1]))
        out[name] = ExactCheck(f"{name}(n<={n_max},p<={p_max})", bool(items) and not bad, bad)
    return out
