"""Exact polynomials in the loop weight beta and dense matrices over them.

Coefficients are Python ints, lowest degree first, with trailing zeros
stripped.  Every matrix entry the package builds exactly (loop
Hamiltonians, the spin Hamiltonian, intertwiners, inner products, Gram
matrices) lives in Z[beta], so equality is plain structural equality.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterable, Sequence

import numpy as np


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class ScalarPoly:
    """Polynomial in beta with integer coefficients.  Immutable."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim(int(c) for c in coeffs)
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "ScalarPoly":
        return cls((c,))

    @classmethod
    def beta(cls, power: int = 1) -> "ScalarPoly":
        return cls((0,) * power + (1,))

    @staticmethod
    def coerce(x) -> "ScalarPoly":
        if isinstance(x, ScalarPoly):
            return x
        if isinstance(x, int):
            return ScalarPoly((x,))
        raise TypeError(f"cannot convert {type(x).__name__} to ScalarPoly")

    # ring structure -------------------------------------------------------

    def __add__(self, other):
        try:
            other = ScalarPoly.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return ScalarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ScalarPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        try:
            other = ScalarPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return ScalarPoly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = ScalarPoly.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        if len(b) == 1:
            k = b[0]
            return ScalarPoly(c * k for c in a)
        if len(a) == 1:
            k = a[0]
            return ScalarPoly(c * k for c in b)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return ScalarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, ScalarPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim((other,))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def divmod(self, other: "ScalarPoly") -> tuple["ScalarPoly", "ScalarPoly"]:
        """Long division over Q, returned only when the quotient is integral.

        Raises ``ArithmeticError`` if a quotient coefficient is not an
        integer (the divisor is then not monic up to sign where it matters).
        """
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd, lead = other.degree, other.leading()
        quot = [0] * max(len(rem) - dd, 0)
        for k in range(len(rem) - dd - 1, -1, -1):
            c = rem[k + dd]
            if c == 0:
                continue
            q, r = divmod(c, lead)
            if r:
                raise ArithmeticError(f"non-integral quotient dividing {self} by {other}")
            quot[k] = q
            for i, oc in enumerate(other.coeffs):
                rem[k + i] -= q * oc
        return ScalarPoly(quot), ScalarPoly(rem)

    def exact_div(self, other: "ScalarPoly") -> "ScalarPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{self} is not divisible by {other} (remainder {r})")
        return q

    def __call__(self, beta):
        return poly_eval(self, beta)

    def __repr__(self):
        return f"ScalarPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                mono = str(abs(c))
            else:
                mono = "b" if k == 1 else f"b^{k}"
                if abs(c) != 1:
                    mono = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, mono in parts[1:]:
            out += f" {sign} {mono}"
        return out


ZERO = ScalarPoly()
ONE = ScalarPoly((1,))
BETA = ScalarPoly((0, 1))


def poly_eval(p: ScalarPoly, beta):
    """Horner evaluation.  Exact for int/Fraction input, float/complex otherwise."""
    acc = 0 if isinstance(beta, (Rational, int)) else 0.0 * beta
    for c in reversed(p.coeffs):
        acc = acc * beta + c
    return acc


@dataclass(frozen=True)
class QValue:
    q: complex
    beta: float


def q_from_beta(beta: float, upper: bool = True) -> QValue:
    """Root of q + 1/q = beta with Im(q) >= 0 (or <= 0 when ``upper`` is false)."""
    beta = float(beta)
    q = (beta + cmath.sqrt(complex(beta * beta - 4.0))) / 2.0
    if (q.imag < 0) == upper and q.imag != 0:
        q = q.conjugate()
    return QValue(q=q, beta=beta)


def beta_from_q(q: complex) -> complex:
    return q + 1 / q


class PolyMatrix:
    """Dense matrix of ScalarPoly entries.

    Products skip zero entries, which keeps the spin-chain matrices (mostly
    zeros) cheap.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence], cols: int | None = None):
        self.data = [[ScalarPoly.coerce(x) for x in row] for row in data]
        self.rows = len(self.data)
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        self.cols = cols
        if any(len(r) != cols for r in self.data):
            raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "PolyMatrix":
        m = cls.__new__(cls)
        m.rows, m.cols = rows, cols
        m.data = [[ZERO] * cols for _ in range(rows)]
        return m

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.data[i][i] = ONE
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.data[i][j] = ScalarPoly.coerce(value)

    @property
    def T(self) -> "PolyMatrix":
        m = PolyMatrix.zeros(self.cols, self.rows)
        for i, row in enumerate(self.data):
            for j, x in enumerate(row):
                m.data[j][i] = x
        return m

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_same(other)
        m = PolyMatrix.zeros(self.rows, self.cols)
        m.data = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        return m

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_same(other)
        m = PolyMatrix.zeros(self.rows, self.cols)
        m.data = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        return m

    def __neg__(self):
        m = PolyMatrix.zeros(self.rows, self.cols)
        m.data = [[-a for a in r] for r in self.data]
        return m

    def scale(self, c) -> "PolyMatrix":
        c = ScalarPoly.coerce(c)
        m = PolyMatrix.zeros(self.rows, self.cols)
        m.data = [[a * c for a in r] for r in self.data]
        return m

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        sparse_rows = [[(k, x) for k, x in enumerate(row) if x] for row in other.data]
        out = PolyMatrix.zeros(self.rows, other.cols)
        for i, row in enumerate(self.data):
            acc = [ZERO] * other.cols
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in sparse_rows[k]:
                    acc[j] = acc[j] + a * b
            out.data[i] = acc
        return out

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(x for row in self.data for x in row)

    def nonzero_entries(self) -> list[tuple[int, int, ScalarPoly]]:
        return [(i, j, x) for i, row in enumerate(self.data) for j, x in enumerate(row) if x]

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.T

    def evaluate(self, beta, dtype=None) -> np.ndarray:
        """Numeric matrix at ``beta`` (float/complex array, or object array of Fractions)."""
        if isinstance(beta, (Fraction, int)) and dtype is None:
            return np.array([[poly_eval(x, Fraction(beta)) for x in row] for row in self.data],
                            dtype=object).reshape(self.rows, self.cols)
        if dtype is None:
            dtype = complex if isinstance(beta, complex) else float
        out = np.zeros((self.rows, self.cols), dtype=dtype)
        for i, row in enumerate(self.data):
            for j, x in enumerate(row):
                if x:
                    out[i, j] = poly_eval(x, beta)
        return out

    def max_degree(self) -> int:
        return max((x.degree for row in self.data for x in row), default=-1)

    def to_lists(self) -> list[list[list[int]]]:
        return [[list(x.coeffs) for x in row] for row in self.data]

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"

    def pretty(self) -> str:
        cells = [[str(x) for x in row] for row in self.data]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def poly_matrix_from_numbers(rows: Sequence[Sequence[Number]]) -> PolyMatrix:
    return PolyMatrix([[ScalarPoly.const(int(x)) for x in r] for r in rows])


def exact_rank(mat) -> int:
    """Rank over Q of a matrix of ints/Fractions (fraction-free elimination)."""
    m = [[Fraction(x) for x in row] for row in mat]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    rank, col = 0, 0
    while rank < rows and col < cols:
        pivot = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for r in range(rank + 1, rows):
            if m[r][col] != 0:
                f = m[r][col] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank
