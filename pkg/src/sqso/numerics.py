"""Exact rational scalars and matrices.

Rationals are :class:`fractions.Fraction`, which already keeps the
canonical form (positive denominator, coprime parts).  Matrices are small
immutable row-major tuples; determinant and rank use fraction-free
(Bareiss) elimination on integer-scaled rows.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError, RationalParseError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIO_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")


def rat_parse(text: RationalLike) -> Fraction:
    """Parse ``"p/q"``, a decimal literal or an integer into an exact Fraction.

    Decimals are converted exactly (``"0.1"`` is 1/10, not the nearest
    binary double).  Ints and Fractions pass through unchanged.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise RationalParseError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise RationalParseError(f"not a rational literal: {text!r}")
    s = text.strip()
    if not (_RATIO_RE.match(s) or _DECIMAL_RE.match(s)):
        raise RationalParseError(f"malformed rational literal: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise RationalParseError(f"zero denominator in {text!r}") from None


def rat_format(q: Fraction) -> str:
    """Inverse of :func:`rat_parse`: ``"p/q"`` or ``"p"`` for integers."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def primitive(vec: Iterable[Union[int, Fraction]]) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray.

    The zero vector maps to itself.  Direction is preserved (no sign flip).
    """
    vec = [Fraction(v) for v in vec]
    lcm = 1
    for v in vec:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix of Fractions."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.entries:
            width = len(self.entries[0])
            if any(len(r) != width for r in self.entries):
                raise DimensionError("ragged matrix rows")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RationalLike]]) -> "RationalMatrix":
        return cls(tuple(tuple(rat_parse(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def ones(cls, n: int, k: int | None = None) -> "RationalMatrix":
        k = n if k is None else k
        return cls(tuple(tuple(Fraction(1) for _ in range(k)) for _ in range(n)))

    @classmethod
    def zeros(cls, n: int, k: int | None = None) -> "RationalMatrix":
        k = n if k is None else k
        return cls(tuple(tuple(Fraction(0) for _ in range(k)) for _ in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries)))

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose().entries
        return RationalMatrix(
            tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
                  for r in self.entries)
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return RationalMatrix(tuple(tuple(a + b for a, b in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(-1)

    def scale(self, t: RationalLike) -> "RationalMatrix":
        t = rat_parse(t)
        return RationalMatrix(tuple(tuple(t * a for a in r) for r in self.entries))

    def apply(self, vec: Sequence[RationalLike]) -> tuple[Fraction, ...]:
        """Exact matrix-vector product ``M @ vec``."""
        vec = [rat_parse(v) for v in vec]
        if len(vec) != self.cols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        return tuple(sum((a * v for a, v in zip(r, vec)), Fraction(0)) for r in self.entries)

    def to_float(self) -> np.ndarray:
        """Round-to-nearest float64 copy."""
        return np.array([[float(a) for a in r] for r in self.entries], dtype=np.float64)

    def to_strings(self) -> list[list[str]]:
        return [[rat_format(a) for a in r] for r in self.entries]

    def __repr__(self) -> str:
        return f"RationalMatrix({self.to_strings()})"


def _integer_rows(M: RationalMatrix) -> list[list[int]]:
    """Rows scaled by their denominator lcm; returns the integer rows."""
    out = []
    for r in M.entries:
        lcm = 1
        for a in r:
            lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
        out.append([int(a * lcm) for a in r])
    return out


def _row_scales(M: RationalMatrix) -> list[int]:
    scales = []
    for r in M.entries:
        lcm = 1
        for a in r:
            lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
        scales.append(lcm)
    return scales


def _bareiss(rows: list[list[int]]) -> tuple[list[list[int]], int, int]:
    """In-place fraction-free elimination to row echelon form.

    Returns ``(rows, rank, sign)`` where ``sign`` tracks row swaps.  For a
    square full-rank input the last pivot is the determinant (times sign).
    """
    n = len(rows)
    k = len(rows[0]) if rows else 0
    sign = 1
    prev = 1
    r = 0
    for c in range(k):
        if r == n:
            break
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, n):
            f = rows[i][c]
            for j in range(c, k):
                # exact division is guaranteed by Sylvester's identity
                rows[i][j] = (p * rows[i][j] - f * rows[r][j]) // prev
        prev = p
        r += 1
    return rows, r, sign


def mat_det(M: RationalMatrix) -> Fraction:
    """Exact determinant via Bareiss elimination on integer-scaled rows."""
    if not M.is_square:
        raise DimensionError(f"determinant of non-square {M.shape} matrix")
    n = M.rows
    if n == 0:
        return Fraction(1)
    scales = _row_scales(M)
    rows, rank, sign = _bareiss(_integer_rows(M))
    if rank < n:
        return Fraction(0)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(sign * rows[n - 1][n - 1], denom)


def mat_rank(M: RationalMatrix) -> int:
    """Exact rank over the rationals."""
    if M.rows == 0 or M.cols == 0:
        return 0
    _, rank, _ = _bareiss(_integer_rows(M))
    return rank


def rows_identical(M: RationalMatrix) -> bool:
    """True iff every row equals the first row exactly."""
    if M.rows == 0:
        return True
    first = M.entries[0]
    return all(r == first for r in M.entries[1:])


def mat_solve(M: RationalMatrix, rhs: Sequence[RationalLike]) -> tuple[Fraction, ...]:
    """Solve the square nonsingular system ``M x = rhs`` exactly (Gauss-Jordan)."""
    if not M.is_square:
        raise DimensionError(f"solve with non-square {M.shape} matrix")
    n = M.rows
    rhs = [rat_parse(v) for v in rhs]
    if len(rhs) != n:
        raise DimensionError("right-hand side length mismatch")
    aug = [list(r) + [b] for r, b in zip(M.entries, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [a / p for a in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return tuple(r[n] for r in aug)


def mat_inverse(M: RationalMatrix) -> RationalMatrix:
    """Exact inverse; raises ZeroDivisionError when singular."""
    n = M.rows
    cols = [mat_solve(M, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return RationalMatrix(tuple(zip(*cols)))
