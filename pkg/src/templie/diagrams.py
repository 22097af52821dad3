"""Planar n-diagrams and the diagrammatic Temperley-Lieb algebra.

Node labels are 1..n on the bottom edge and n+1..2n on the top edge, both
read left to right.  Internally a diagram stores a 0-based partner tuple.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .poly import ONE, ScalarPoly


class SizeError(ValueError):
    """Raised when a size cap or a size compatibility requirement fails."""


DEFAULT_DIAGRAM_CAP = 10


def diagram_cap() -> int:
    env = os.environ.get("TEMPLIE_MAX_N")
    return int(env) if env else DEFAULT_DIAGRAM_CAP


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _boundary_position(label: int, n: int) -> int:
    # cyclic order around the rectangle: bottom left-to-right, top right-to-left
    return label - 1 if label <= n else 3 * n - label


def is_noncrossing(pairs: Iterable[tuple[int, int]], n: int) -> bool:
    chords = []
    for a, b in pairs:
        x, y = sorted((_boundary_position(a, n), _boundary_position(b, n)))
        chords.append((x, y))
    for i, (a, b) in enumerate(chords):
        for c, d in chords[i + 1:]:
            if a < c < b < d or c < a < d < b:
                return False
    return True


@dataclass(frozen=True)
class Diagram:
    n: int
    partner: tuple[int, ...]

    def __post_init__(self):
        p = self.partner
        if len(p) != 2 * self.n:
            raise ValueError("partner tuple must have 2n entries")
        for i, j in enumerate(p):
            if not 0 <= j < 2 * self.n or j == i or p[j] != i:
                raise ValueError("partner tuple is not a fixed-point-free involution")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Diagram":
        """Build from 1-based label pairs, checking planarity."""
        pairs = list(pairs)
        partner = [-1] * (2 * n)
        for a, b in pairs:
            if partner[a - 1] != -1 or partner[b - 1] != -1:
                raise ValueError(f"node used twice in {pairs}")
            partner[a - 1], partner[b - 1] = b - 1, a - 1
        if -1 in partner:
            raise ValueError("every node must be paired")
        if not is_noncrossing(pairs, n):
            raise ValueError(f"pairs {pairs} cross")
        return cls(n, tuple(partner))

    @classmethod
    def identity(cls, n: int) -> "Diagram":
        return cls(n, tuple(list(range(n, 2 * n)) + list(range(n))))

    def pairs(self) -> list[tuple[int, int]]:
        return [(i + 1, j + 1) for i, j in enumerate(self.partner) if i < j]

    def through_lines(self) -> int:
        return sum(1 for i in range(self.n) if self.partner[i] >= self.n)

    def flip(self) -> "Diagram":
        """Top-bottom reflection; the anti-involution reversing products."""
        n = self.n
        swap = lambda k: k + n if k < n else k - n
        return Diagram(n, tuple(swap(self.partner[swap(k)]) for k in range(2 * n)))

    def sort_key(self):
        return tuple(self.pairs())

    def __lt__(self, other: "Diagram"):
        return (self.n, self.sort_key()) < (other.n, other.sort_key())

    def __str__(self):
        return " ".join(f"({a},{b})" for a, b in self.pairs())


def _noncrossing_matchings(points: Sequence[int]):
    if not points:
        yield []
        return
    first = points[0]
    for k in range(1, len(points), 2):
        inside, outside = points[1:k], points[k + 1:]
        for m1 in _noncrossing_matchings(inside):
            for m2 in _noncrossing_matchings(outside):
                yield [(first, points[k])] + m1 + m2


@lru_cache(maxsize=None)
def _enumerate_cached(n: int) -> tuple[Diagram, ...]:
    cyclic = list(range(1, n + 1)) + list(range(2 * n, n, -1))
    out = []
    for m in _noncrossing_matchings(cyclic):
        partner = [0] * (2 * n)
        for a, b in m:
            partner[a - 1], partner[b - 1] = b - 1, a - 1
        out.append(Diagram(n, tuple(partner)))
    out.sort()
    return tuple(out)


def enumerate_diagrams(n: int, cap: int | None = None) -> list[Diagram]:
    """All n-diagrams, sorted lexicographically by their pair lists."""
    if n < 1:
        raise ValueError("n must be positive")
    cap = diagram_cap() if cap is None else cap
    if n > cap:
        raise SizeError(f"n={n} exceeds the diagram cap {cap}")
    return list(_enumerate_cached(n))


def concat(a1: Diagram, a2: Diagram) -> tuple[Diagram, int]:
    """Stack ``a2`` on top of ``a1``; return the new diagram and the loop count."""
    if a1.n != a2.n:
        raise SizeError(f"cannot concatenate {a1.n}-diagram with {a2.n}-diagram")
    n = a1.n
    p1, p2 = a1.partner, a2.partner
    partner = [-1] * (2 * n)
    seen_middle = [False] * n

    def trace(layer: int, node: int) -> int:
        # walk from an outer node until another outer node is reached;
        # returns that node as a label of the result (bottom of a1 or top of a2)
        while True:
            if layer == 1:
                nxt = p1[node]
                if nxt < n:
                    return nxt
                k = nxt - n
                seen_middle[k] = True
                layer, node = 2, k
            else:
                nxt = p2[node]
                if nxt >= n:
                    return nxt
                seen_middle[nxt] = True
                layer, node = 1, nxt + n

    for i in range(n):
        if partner[i] == -1:
            j = trace(1, i)
            partner[i], partner[j] = j, i
    for i in range(n, 2 * n):
        if partner[i] == -1:
            j = trace(2, i)
            partner[i], partner[j] = j, i

    loops = 0
    for k in range(n):
        if seen_middle[k]:
            continue
        loops += 1
        # follow the closed loop through the middle row
        node = k
        while not seen_middle[node]:
            seen_middle[node] = True
            nxt = p2[node]  # a2 bottom-bottom arc
            seen_middle[nxt] = True
            node = p1[nxt + n] - n  # a1 top-top arc
    return Diagram(n, tuple(partner)), loops


def generator(n: int, i: int) -> Diagram:
    if not 1 <= i <= n - 1:
        raise IndexError(f"generator index {i} out of range for n={n}")
    pairs = [(i, i + 1), (n + i, n + i + 1)]
    pairs += [(k, n + k) for k in range(1, n + 1) if k not in (i, i + 1)]
    return Diagram.from_pairs(n, pairs)


class TLElement:
    """Finite linear combination of n-diagrams with ScalarPoly coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Diagram, ScalarPoly] | None = None):
        self.n = n
        self.terms: dict[Diagram, ScalarPoly] = {}
        for d, c in (terms or {}).items():
            if d.n != n:
                raise SizeError("diagram size does not match element")
            c = ScalarPoly.coerce(c)
            if c:
                self.terms[d] = c

    @classmethod
    def from_diagram(cls, d: Diagram, coeff=ONE) -> "TLElement":
        return cls(d.n, {d: coeff})

    @classmethod
    def identity(cls, n: int) -> "TLElement":
        return cls.from_diagram(Diagram.identity(n))

    def __add__(self, other: "TLElement") -> "TLElement":
        if self.n != other.n:
            raise SizeError("size mismatch")
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, ScalarPoly()) + c
        return TLElement(self.n, out)

    def __neg__(self):
        return TLElement(self.n, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TLElement":
        c = ScalarPoly.coerce(c)
        return TLElement(self.n, {d: x * c for d, x in self.terms.items()})

    def __mul__(self, other: "TLElement") -> "TLElement":
        if self.n != other.n:
            raise SizeError("size mismatch")
        out: dict[Diagram, ScalarPoly] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                d, loops = concat(d1, d2)
                out[d] = out.get(d, ScalarPoly()) + c1 * c2 * ScalarPoly.beta(loops)
        return TLElement(self.n, out)

    def __eq__(self, other):
        if not isinstance(other, TLElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None

    def dagger(self) -> "TLElement":
        return TLElement(self.n, {d.flip(): c for d, c in self.terms.items()})

    def __repr__(self):
        body = " + ".join(f"({c})*[{d}]" for d, c in sorted(self.terms.items()))
        return f"TLElement(n={self.n}: {body or '0'})"


def word_to_element(n: int, word: Sequence[int], coeff=ONE) -> TLElement:
    """The product e_{w1} e_{w2} ... as a single weighted diagram."""
    d = Diagram.identity(n)
    loops = 0
    for i in word:
        d, k = concat(d, generator(n, i))
        loops += k
    return TLElement.from_diagram(d, ScalarPoly.coerce(coeff) * ScalarPoly.beta(loops))


def hamiltonian_element(n: int) -> TLElement:
    """h = -(e_1 + ... + e_{n-1})."""
    out = TLElement(n)
    for i in range(1, n):
        out = out + TLElement.from_diagram(generator(n, i), ScalarPoly.const(-1))
    return out
