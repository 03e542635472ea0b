"""Quadratic stochastic operators: tensors, separable pairs, classification.

Indices are 0-based throughout.  A separable pair ``(A, B)`` acts through
the *columns* of its matrices::

    x'_k = (sum_i a_ik x_i) * (sum_j b_jk x_j)

Validation and classification are exact (Fractions); application is
float64 through the kernel backend.  The quadratic maps are evaluated in
their degree-0 homogeneous form ``V(x) / (sum x)**2``, which coincides
with the map on the simplex but keeps the coordinate sum from compounding
rounding error (without it the sum error doubles at every step).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ._backend import kernels
from .errors import (AdmissibilityError, DimensionError, InternalInconsistencyError,
                     NotVolterraError, SimplexError)
from .numerics import RationalMatrix, mat_det, rat_parse, rows_identical

NEG_SLACK = 1e-15
SUM_SLACK = 1e-12

_NO_MATRIX = np.zeros((1, 1))
_NO_TENSOR = np.zeros((1, 1, 1))


def check_simplex(x, m: Optional[int] = None) -> np.ndarray:
    """Validate a point of the simplex and return it as a float64 array.

    Coordinates may dip to -1e-15 (rounding); the sum must be within 1e-12
    of one.  Nothing is renormalized.
    """
    arr = np.ascontiguousarray(np.asarray(x, dtype=np.float64).reshape(-1))
    if m is not None and arr.shape[0] != m:
        raise DimensionError(f"point of dimension {arr.shape[0]}, expected {m}")
    if arr.shape[0] == 0:
        raise SimplexError("empty point")
    if not np.all(np.isfinite(arr)):
        raise SimplexError(f"non-finite coordinates in {arr}")
    if arr.min() < -NEG_SLACK:
        raise SimplexError(f"negative coordinate {arr.min()!r}")
    total = 0.0
    for v in arr:
        total += v
    if abs(total - 1.0) > SUM_SLACK:
        raise SimplexError(f"coordinates sum to {total!r}")
    return arr


def _as_matrix(M) -> RationalMatrix:
    return M if isinstance(M, RationalMatrix) else RationalMatrix.from_rows(M)


class Admissibility(str, Enum):
    STRICT = "Strict"
    WEAK = "Weak"
    INVALID = "Invalid"


@dataclass(frozen=True)
class SqsoPair:
    """A matrix pair ``(A, B)`` with its exactly computed admissibility.

    Build instances with :func:`validate_pair`.
    """

    A: RationalMatrix
    B: RationalMatrix
    admissibility: Admissibility
    det_a: Fraction
    det_b: Fraction
    a_rows_identical: bool
    b_rows_identical: bool

    @property
    def m(self) -> int:
        return self.A.rows

    @property
    def is_strict(self) -> bool:
        return self.admissibility is Admissibility.STRICT

    @property
    def in_script_a(self) -> bool:
        """Membership in the nonlinear family: strict, both determinants zero,
        neither matrix with all-identical rows."""
        return (self.is_strict and self.det_a == 0 and self.det_b == 0
                and not self.a_rows_identical and not self.b_rows_identical)

    @cached_property
    def a_float(self) -> np.ndarray:
        return np.ascontiguousarray(self.A.to_float())

    @cached_property
    def b_float(self) -> np.ndarray:
        return np.ascontiguousarray(self.B.to_float())


def validate_pair(A, B) -> SqsoPair:
    """Compute the admissibility of ``(A, B)`` exactly.

    Strict: every ``a_ik b_jk >= 0`` and ``A B^T`` is the all-ones matrix.
    Weak: the symmetrized versions of both conditions hold but not the
    strict ones.  Invalid otherwise.
    """
    A, B = _as_matrix(A), _as_matrix(B)
    if not (A.is_square and B.is_square) or A.shape != B.shape:
        raise DimensionError(f"A {A.shape} and B {B.shape} must be square of equal size")
    m = A.rows
    gram = A @ B.T
    strict_sign = all(A[i, k] * B[j, k] >= 0 for i, j, k in product(range(m), repeat=3))
    strict_ones = all(gram[i, j] == 1 for i in range(m) for j in range(m))
    if strict_sign and strict_ones:
        adm = Admissibility.STRICT
    else:
        weak_sign = all(A[i, k] * B[j, k] + A[j, k] * B[i, k] >= 0
                        for i, j, k in product(range(m), repeat=3))
        weak_ones = all(gram[i, j] + gram[j, i] == 2 for i in range(m) for j in range(m))
        adm = Admissibility.WEAK if weak_sign and weak_ones else Admissibility.INVALID
    return SqsoPair(A, B, adm, mat_det(A), mat_det(B), rows_identical(A), rows_identical(B))


@dataclass(frozen=True)
class CubicTensor:
    """Heredity coefficients ``P[i][j][k]``, validated on construction."""

    entries: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        m = len(self.entries)
        for i, j in product(range(m), repeat=2):
            fiber = self.entries[i][j]
            if len(self.entries[i]) != m or len(fiber) != m:
                raise DimensionError("tensor must be m x m x m")
            if any(p < 0 for p in fiber):
                raise ValueError(f"negative coefficient in P[{i}][{j}]")
            if sum(fiber) != 1:
                raise ValueError(f"P[{i}][{j}] sums to {sum(fiber)}, not 1")

    @classmethod
    def from_nested(cls, nested) -> "CubicTensor":
        return cls(tuple(tuple(tuple(rat_parse(v) for v in fiber) for fiber in plane)
                         for plane in nested))

    @classmethod
    def from_entries(cls, m: int, entries: Mapping[tuple[int, int, int], object]) -> "CubicTensor":
        """Sparse constructor: ``{(i, j, k): value}``, zero elsewhere."""
        P = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
        for (i, j, k), v in entries.items():
            P[i][j][k] = rat_parse(v)
        return cls.from_nested(P)

    @property
    def m(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx: tuple[int, int, int]) -> Fraction:
        i, j, k = idx
        return self.entries[i][j][k]

    def symmetrized(self) -> "CubicTensor":
        m = self.m
        return CubicTensor(tuple(tuple(tuple((self[i, j, k] + self[j, i, k]) / 2 for k in range(m))
                                       for j in range(m)) for i in range(m)))

    @cached_property
    def as_float(self) -> np.ndarray:
        return np.ascontiguousarray(
            np.array([[[float(v) for v in f] for f in plane] for plane in self.entries],
                     dtype=np.float64))


def build_tensor(pair: SqsoPair) -> CubicTensor:
    """Entrywise tensor ``P[i][j][k] = a_ik * b_jk`` of a strict pair."""
    if not pair.is_strict:
        raise AdmissibilityError(f"build_tensor needs a Strict pair, got {pair.admissibility.value}")
    A, B, m = pair.A, pair.B, pair.m
    return CubicTensor(tuple(tuple(tuple(A[i, k] * B[j, k] for k in range(m))
                                   for j in range(m)) for i in range(m)))


def pair_matches_tensor(pair: SqsoPair, T: CubicTensor) -> bool:
    """Symmetrized factorization test ``P_ijk + P_jik == a_ik b_jk + a_jk b_ik``."""
    if pair.m != T.m:
        raise DimensionError(f"pair of size {pair.m} vs tensor of size {T.m}")
    A, B = pair.A, pair.B
    return all(T[i, j, k] + T[j, i, k] == A[i, k] * B[j, k] + A[j, k] * B[i, k]
               for i, j, k in product(range(pair.m), repeat=3))


class Case(str, Enum):
    CONSTANT = "Constant"
    LINEAR = "Linear"
    NONLINEAR = "Nonlinear"


@dataclass(frozen=True)
class Classification:
    """Result of :func:`classify`.

    ``point`` is the exact output of a constant operator; ``matrix`` is the
    row-stochastic matrix ``L`` of a linear one, acting as ``x'_k =
    sum_i L[i][k] x_i``; ``via`` names the matrix with identical rows.
    """

    case: Case
    point: Optional[tuple[Fraction, ...]] = None
    matrix: Optional[RationalMatrix] = None
    via: Optional[str] = None

    @property
    def point_float(self) -> Optional[np.ndarray]:
        return None if self.point is None else np.array([float(v) for v in self.point])


def classify(pair: SqsoPair) -> Classification:
    """Split a strict pair into the constant, linear and nonlinear cases.

    A matrix with all-identical rows turns its factor into a multiple of
    ``sum x``, so: both identical gives a constant map; exactly one
    identical gives a linear map (this is forced when the other matrix is
    nonsingular); neither gives the genuinely quadratic case.
    """
    if not pair.is_strict:
        raise AdmissibilityError(f"classify needs a Strict pair, got {pair.admissibility.value}")
    A, B, m = pair.A, pair.B, pair.m
    if pair.det_a != 0 and not pair.b_rows_identical:
        raise InternalInconsistencyError("det A != 0 but rows of B differ")
    if pair.det_b != 0 and not pair.a_rows_identical:
        raise InternalInconsistencyError("det B != 0 but rows of A differ")
    if pair.a_rows_identical and pair.b_rows_identical:
        return Classification(Case.CONSTANT, point=tuple(A[0, k] * B[0, k] for k in range(m)))
    if pair.b_rows_identical:
        L = RationalMatrix(tuple(tuple(B[0, k] * A[i, k] for k in range(m)) for i in range(m)))
        return Classification(Case.LINEAR, matrix=L, via="B")
    if pair.a_rows_identical:
        L = RationalMatrix(tuple(tuple(A[0, k] * B[j, k] for k in range(m)) for j in range(m)))
        return Classification(Case.LINEAR, matrix=L, via="A")
    return Classification(Case.NONLINEAR)


def _step(kind: int, M1, M2, P, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    kernels.step(kind, M1, M2, P, x, out)
    return out


def apply_sqso(pair: SqsoPair, x) -> np.ndarray:
    """One generation of the separable operator at ``x``."""
    if pair.admissibility is Admissibility.INVALID:
        raise AdmissibilityError("cannot apply an Invalid pair")
    x = check_simplex(x, pair.m)
    return _step(kernels.KIND_SQSO, pair.a_float, pair.b_float, _NO_TENSOR, x)


def apply_tensor(T: CubicTensor, x) -> np.ndarray:
    """``x'_k = sum_ij P[i][j][k] x_i x_j``."""
    x = check_simplex(x, T.m)
    return _step(kernels.KIND_TENSOR, _NO_MATRIX, _NO_MATRIX, T.as_float, x)


def apply_linear(L, x) -> np.ndarray:
    """Action ``x'_k = sum_i L[i][k] x_i`` of a row-stochastic matrix."""
    Lf = np.ascontiguousarray(L.to_float() if isinstance(L, RationalMatrix)
                              else np.asarray(L, dtype=np.float64))
    x = check_simplex(x, Lf.shape[0])
    return _step(kernels.KIND_LINEAR, Lf, _NO_MATRIX, _NO_TENSOR, x)


@dataclass(frozen=True, eq=False)
class VolterraOperator:
    """Normal form ``x'_k = x_k (1 + sum_i a[k][i] x_i)``; ``a`` skew, ``|a| <= 1``."""

    a: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(np.asarray(self.a, dtype=np.float64))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError("Volterra matrix must be square")
        if np.any(np.diag(a) != 0):
            raise ValueError("Volterra matrix needs a zero diagonal")
        if np.any(a != -a.T):
            raise ValueError("Volterra matrix must be skew-symmetric")
        if np.any(np.abs(a) > 1):
            raise ValueError("Volterra entries must lie in [-1, 1]")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def m(self) -> int:
        return self.a.shape[0]


def is_volterra(T: CubicTensor) -> bool:
    """True iff ``P[i][j][k] == 0`` whenever ``k`` is neither ``i`` nor ``j``."""
    m = T.m
    return all(T[i, j, k] == 0 for i, j, k in product(range(m), repeat=3) if k != i and k != j)


def volterra_from_tensor(T: CubicTensor) -> VolterraOperator:
    """Skew matrix ``a_ki = 2 P_ik,k - 1`` of a Volterra tensor.

    The coefficient is taken from the symmetrized tensor, i.e.
    ``P[i][k][k] + P[k][i][k] - 1``, which is the textbook value for
    symmetric ``P`` and the correct one otherwise.
    """
    if not is_volterra(T):
        raise NotVolterraError("tensor has offspring outside the parental types")
    m = T.m
    a = [[0.0] * m for _ in range(m)]
    for k, i in product(range(m), repeat=2):
        if i != k:
            a[k][i] = float(T[i, k, k] + T[k, i, k] - 1)
    return VolterraOperator(np.array(a))


def apply_volterra(V: VolterraOperator, x) -> np.ndarray:
    x = check_simplex(x, V.m)
    return _step(kernels.KIND_VOLTERRA, V.a, _NO_MATRIX, _NO_TENSOR, x)


def random_skew(m: int, rng: np.random.Generator) -> VolterraOperator:
    """Random Volterra operator with entries uniform in [-1, 1]."""
    upper = np.triu(rng.uniform(-1.0, 1.0, size=(m, m)), 1)
    return VolterraOperator(upper - upper.T)


def tensor_from_linear(L: RationalMatrix) -> CubicTensor:
    """Quadratic tensor of a linear map on the simplex (``P[i][j][k] = L[i][k]``)."""
    m = L.rows
    return CubicTensor(tuple(tuple(tuple(L[i, k] for k in range(m)) for _ in range(m))
                             for i in range(m)))


def simplex_points(m: int, n: int, rng: np.random.Generator) -> Iterable[np.ndarray]:
    """``n`` uniform points of the simplex, nudged to sum to one within 1e-15."""
    for _ in range(n):
        x = rng.dirichlet(np.ones(m))
        x[-1] = max(0.0, 1.0 - float(np.sum(x[:-1])))
        yield x


def vec(values: Sequence) -> tuple[Fraction, ...]:
    """Exact vector from literals."""
    return tuple(rat_parse(v) for v in values)
