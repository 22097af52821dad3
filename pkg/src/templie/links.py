"""(n,d)-links, the diagrammatic action of n-diagrams on them, and the
matrices built from it: loop Hamiltonians, representation matrices and the
Gram form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .diagrams import Diagram, SizeError, TLElement, generator, hamiltonian_element
from .poly import PolyMatrix, ScalarPoly


def check_nd(n: int, d: int) -> None:
    if n < 1 or not 0 <= d <= n or (n - d) % 2:
        raise ValueError(f"invalid (n,d)=({n},{d}): need 0 <= d <= n and d = n mod 2")


def standard_dim(n: int, d: int) -> int:
    check_nd(n, d)
    k = (n - d) // 2
    return comb(n, k) - (comb(n, k - 1) if k >= 1 else 0)


@dataclass(frozen=True)
class Link:
    """Arcs are 1-based pairs (i, j), i < j.  ``partner[k]`` is 0-based, -1 for a defect."""

    n: int
    partner: tuple[int, ...]
    d: int = field(init=False, compare=False)
    left_mask: int = field(init=False, compare=False)

    def __post_init__(self):
        p = self.partner
        if len(p) != self.n:
            raise ValueError("partner tuple has the wrong length")
        depth = 0
        mask = 0
        for i, j in enumerate(p):
            if j == -1:
                if depth:
                    raise ValueError("defect lies under an arc")
                continue
            if not 0 <= j < self.n or j == i or p[j] != i:
                raise ValueError("invalid arc structure")
            if j > i:
                depth += 1
                mask |= 1 << i
            else:
                depth -= 1
        if not is_link_noncrossing(p):
            raise ValueError("arcs cross")
        object.__setattr__(self, "d", p.count(-1))
        object.__setattr__(self, "left_mask", mask)

    @classmethod
    def from_arcs(cls, n: int, arcs) -> "Link":
        partner = [-1] * n
        for i, j in arcs:
            if partner[i - 1] != -1 or partner[j - 1] != -1:
                raise ValueError("node used twice")
            partner[i - 1], partner[j - 1] = j - 1, i - 1
        return cls(n, tuple(partner))

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [(i + 1, j + 1) for i, j in enumerate(self.partner) if j > i]

    @property
    def defects(self) -> list[int]:
        return [i + 1 for i, j in enumerate(self.partner) if j == -1]

    @property
    def left_ends(self) -> list[int]:
        return [i + 1 for i, j in enumerate(self.partner) if j > i]

    def dyadic(self) -> Fraction:
        return sum((Fraction(1, 2 ** i) for i in self.left_ends), Fraction(0))

    def __str__(self):
        marks = []
        for i, j in enumerate(self.partner):
            marks.append("|" if j == -1 else ("(" if j > i else ")"))
        return "".join(marks)

    def label(self) -> list:
        return [list(a) for a in self.arcs]


def is_link_noncrossing(partner) -> bool:
    stack = []
    for i, j in enumerate(partner):
        if j == -1:
            continue
        if j > i:
            stack.append(i)
        elif not stack or stack.pop() != j:
            return False
    return not stack


def link_from_left_ends(n: int, d: int, left_ends) -> Link:
    """Rebuild a link from L(w): each left end closes at the first free node to its right
    once all later left ends are placed, scanning right to left."""
    check_nd(n, d)
    starts = sorted(left_ends)
    partner = [-1] * n
    used = [False] * n
    for i in sorted((s - 1 for s in starts), reverse=True):
        used[i] = True
        j = i + 1
        while j < n and used[j]:
            j += 1
        if j >= n:
            raise ValueError("left ends do not describe a link")
        used[j] = True
        partner[i], partner[j] = j, i
    link = Link(n, tuple(partner))
    if link.d != d:
        raise ValueError("left ends give the wrong defect count")
    return link


@lru_cache(maxsize=None)
def _links_cached(n: int, d: int) -> tuple[Link, ...]:
    arcs_total = (n - d) // 2
    out = []

    def rec(pos, partner, stack, arcs_opened):
        if pos == n:
            if not stack and arcs_opened == arcs_total:
                out.append(Link(n, tuple(partner)))
            return
        remaining = n - pos
        # open an arc
        if arcs_opened < arcs_total and len(stack) + 1 <= remaining - 1:
            stack.append(pos)
            rec(pos + 1, partner, stack, arcs_opened + 1)
            stack.pop()
        # close an arc
        if stack:
            i = stack.pop()
            partner[i], partner[pos] = pos, i
            rec(pos + 1, partner, stack, arcs_opened)
            partner[i], partner[pos] = -1, -1
            stack.append(i)
        # defect
        if not stack:
            rec(pos + 1, partner, stack, arcs_opened)

    rec(0, [-1] * n, [], 0)
    out.sort(key=lambda w: w.dyadic())
    return tuple(out)


def enumerate_links(n: int, d: int) -> list[Link]:
    """All (n,d)-links ordered by increasing dyadic fraction."""
    check_nd(n, d)
    return list(_links_cached(n, d))


@lru_cache(maxsize=None)
def link_index(n: int, d: int) -> dict[Link, int]:
    return {w: k for k, w in enumerate(_links_cached(n, d))}


def act(a: Diagram, w: Link) -> tuple[Link, int] | None:
    """a·w: the link is drawn atop the diagram.  None means zero."""
    if a.n != w.n:
        raise SizeError(f"diagram size {a.n} does not match link size {w.n}")
    n = a.n
    pa, pw = a.partner, w.partner
    partner = [-1] * n
    seen = [False] * n  # middle nodes: top of a = nodes of w
    done = [False] * n
    for i in range(n):
        if done[i]:
            continue
        done[i] = True
        node = pa[i]
        while True:
            if node < n:  # reached another bottom node
                partner[i], partner[node] = node, i
                done[node] = True
                break
            k = node - n
            seen[k] = True
            if pw[k] == -1:  # free end: i becomes a defect
                break
            seen[pw[k]] = True
            node = pa[pw[k] + n]
    if partner.count(-1) != w.d:
        return None
    loops = 0
    for k in range(n):
        if seen[k]:
            continue
        loops += 1
        node = k
        while not seen[node]:
            seen[node] = True
            seen[pw[node]] = True
            node = pa[pw[node] + n] - n
    return Link(n, tuple(partner)), loops


def representation_matrix(x: TLElement | Diagram, n: int, d: int) -> PolyMatrix:
    """Matrix of x on V_{n,d}; column j is x applied to basis[j]."""
    if isinstance(x, Diagram):
        x = TLElement.from_diagram(x)
    if x.n != n:
        raise SizeError(f"element of TL_{x.n} cannot act on V_({n},{d})")
    basis = enumerate_links(n, d)
    index = link_index(n, d)
    m = PolyMatrix.zeros(len(basis), len(basis))
    for j, w in enumerate(basis):
        for diag, c in x.terms.items():
            res = act(diag, w)
            if res is None:
                continue
            v, loops = res
            i = index[v]
            m.data[i][j] = m.data[i][j] + c * ScalarPoly.beta(loops)
    return m


def generator_matrix(n: int, d: int, i: int) -> PolyMatrix:
    return representation_matrix(generator(n, i), n, d)


@lru_cache(maxsize=None)
def hamiltonian_matrix(n: int, d: int) -> PolyMatrix:
    """Loop Hamiltonian H_{n,d}, the matrix of h = -sum e_i."""
    check_nd(n, d)
    if n == 1:
        return PolyMatrix.zeros(1, 1)
    return representation_matrix(hamiltonian_element(n), n, d)


def pairing(v: Link, w: Link) -> ScalarPoly:
    """Gram form <v|w>: beta^loops if every defect of v meets a defect of w, else 0."""
    if v.n != w.n or v.d != w.d:
        raise SizeError("links must share n and d")
    n = v.n
    seen = [False] * n
    pv, pw = v.partner, w.partner
    for start in range(n):
        if pv[start] != -1 or seen[start]:
            continue
        # path starting at a defect of v: alternate w-arc, v-arc
        node = start
        seen[node] = True
        while True:
            nxt = pw[node]
            if nxt == -1:
                break  # reached a defect of w: good through-line
            seen[nxt] = True
            node = pv[nxt]
            if node == -1:
                return ScalarPoly()  # two defects of v joined
            seen[node] = True
    loops = 0
    for k in range(n):
        if seen[k]:
            continue
        loops += 1
        node = k
        while not seen[node]:
            seen[node] = True
            seen[pw[node]] = True
            node = pv[pw[node]]
    return ScalarPoly.beta(loops)


@lru_cache(maxsize=None)
def gram_matrix(n: int, d: int) -> PolyMatrix:
    basis = enumerate_links(n, d)
    return PolyMatrix([[pairing(v, w) for w in basis] for v in basis])


@dataclass(frozen=True)
class StandardMatrixSet:
    n: int
    d: int
    basis: tuple[Link, ...]
    hamiltonian: PolyMatrix
    gram: PolyMatrix


def standard_matrices(n: int, d: int) -> StandardMatrixSet:
    return StandardMatrixSet(n, d, tuple(enumerate_links(n, d)),
                             hamiltonian_matrix(n, d), gram_matrix(n, d))


def verify_gram_adjoint(n: int, d: int) -> list[int]:
    """Generators j for which G rho(e_j) != rho(e_j)^T G (empty when all hold)."""
    G = gram_matrix(n, d)
    bad = []
    for j in range(1, n):
        E = generator_matrix(n, d, j)
        if G @ E != E.T @ G:
            bad.append(j)
    return bad
