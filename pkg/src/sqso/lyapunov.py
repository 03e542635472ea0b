"""Linear Lyapunov certificates and the cones they live in.

For a matrix ``M`` (either factor of a pair) the certificate cone is

    {c : c >= 0, M c <= c}

and every nonzero ``c`` in it gives the Lyapunov function
``psi_c(x) = sum_k c_k x_k`` of a nonlinear pair with entries in [0, 1].
Cones are enumerated exactly by their extreme rays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .cone import extreme_rays
from .dynamics import TrajectoryRecord
from .errors import DimensionError
from .numerics import RationalMatrix, rat_parse
from .operators import SqsoPair, check_simplex


class Side(str, Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class RayBasis:
    """Extreme rays ``Q_1 .. Q_q`` of one side's cone; ``c = Q v`` with ``v >= 0``."""

    m: int
    source: Side
    rays: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.rays)

    @property
    def is_trivial(self) -> bool:
        return not self.rays

    def combine(self, weights: Sequence) -> tuple[Fraction, ...]:
        """The cone element ``sum_i weights[i] * Q_i``."""
        if len(weights) != len(self.rays):
            raise DimensionError("one weight per ray expected")
        w = [rat_parse(v) if not isinstance(v, Fraction) else v for v in weights]
        return tuple(sum((wi * r[k] for wi, r in zip(w, self.rays)), Fraction(0))
                     for k in range(self.m))


def _cone_rows(M: RationalMatrix) -> list[list[Fraction]]:
    m = M.rows
    rows = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    # (I - M) c >= 0; all-zero rows (e.g. a unit row of M) are dropped as redundant
    rows += [[Fraction(int(i == j)) - M[i, j] for j in range(m)] for i in range(m)]
    return rows


def cone_extreme_rays(M: RationalMatrix, source: Union[Side, str] = Side.A) -> RayBasis:
    """All extreme rays of ``{c >= 0 : M c <= c}`` as primitive integer vectors."""
    if not M.is_square:
        raise DimensionError(f"cone of non-square {M.shape} matrix")
    rays = extreme_rays(_cone_rows(M), M.rows)
    return RayBasis(M.rows, Side(source), tuple(rays))


def cone_membership(M: RationalMatrix, c: Sequence) -> bool:
    """Exact test of ``c >= 0`` and ``M c <= c``."""
    c = [rat_parse(v) for v in c]
    if len(c) != M.cols:
        raise DimensionError(f"vector of length {len(c)} for {M.shape} matrix")
    if any(v < 0 for v in c):
        return False
    return all(mc <= ci for mc, ci in zip(M.apply(c), c))


def rowsum_candidate(A: RationalMatrix) -> Optional[tuple[Fraction, ...]]:
    """Row sums of a nonnegative ``A`` whose rows all sum to at most one.

    Such a vector always lies in the cone.  ``None`` when the hypothesis
    fails, which says nothing about whether the cone is trivial.
    """
    sums = tuple(sum(row, Fraction(0)) for row in A.entries)
    if any(a < 0 for row in A.entries for a in row) or any(s > 1 for s in sums):
        return None
    return sums


@dataclass(frozen=True)
class PreconditionReport:
    """Hypotheses under which the cone rays certify Lyapunov functions."""

    a_in_unit_box: bool
    b_in_unit_box: bool
    strict: bool
    det_a_zero: bool
    det_b_zero: bool
    a_rows_identical: bool
    b_rows_identical: bool

    @property
    def in_script_a(self) -> bool:
        return (self.strict and self.det_a_zero and self.det_b_zero
                and not self.a_rows_identical and not self.b_rows_identical)

    @property
    def certified(self) -> bool:
        return self.a_in_unit_box and self.b_in_unit_box and self.in_script_a

    def as_dict(self) -> dict:
        return {
            "entries_in_unit_interval_A": self.a_in_unit_box,
            "entries_in_unit_interval_B": self.b_in_unit_box,
            "strict": self.strict,
            "det_A_zero": self.det_a_zero,
            "det_B_zero": self.det_b_zero,
            "rows_identical_A": self.a_rows_identical,
            "rows_identical_B": self.b_rows_identical,
            "in_script_A": self.in_script_a,
            "certified": self.certified,
        }


def _unit_box(M: RationalMatrix) -> bool:
    return all(0 <= a <= 1 for row in M.entries for a in row)


def check_certificate_preconditions(pair: SqsoPair) -> PreconditionReport:
    return PreconditionReport(
        a_in_unit_box=_unit_box(pair.A),
        b_in_unit_box=_unit_box(pair.B),
        strict=pair.is_strict,
        det_a_zero=pair.det_a == 0,
        det_b_zero=pair.det_b == 0,
        a_rows_identical=pair.a_rows_identical,
        b_rows_identical=pair.b_rows_identical,
    )


@dataclass(frozen=True)
class LinearForm:
    """``psi_c(x) = sum_k c_k x_k`` with ``c >= 0`` and ``sum c > 0``."""

    c: tuple[Fraction, ...]
    source: Optional[Side] = None

    def __post_init__(self):
        c = tuple(rat_parse(v) if not isinstance(v, Fraction) else v for v in self.c)
        if any(v < 0 for v in c) or sum(c) <= 0:
            raise ValueError("a linear certificate needs c >= 0 with positive sum")
        object.__setattr__(self, "c", c)

    @property
    def lower(self) -> Fraction:
        return min(self.c)

    @property
    def upper(self) -> Fraction:
        return max(self.c)

    def values(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=np.float64) @ np.array([float(v) for v in self.c])


@dataclass(frozen=True)
class ProductForm:
    """``phi(x) = prod_k (sum_i c_k[i] x_i) ** p_k`` with ``c_k >= 0``, ``p_k >= 0``."""

    forms: tuple[tuple[Fraction, ...], ...]
    exponents: tuple[float, ...]

    def __post_init__(self):
        forms = tuple(tuple(rat_parse(v) if not isinstance(v, Fraction) else v for v in f)
                      for f in self.forms)
        if len(forms) != len(self.exponents):
            raise ValueError("one exponent per form expected")
        if any(v < 0 for f in forms for v in f):
            raise ValueError("product certificate forms must be nonnegative")
        if any(not p >= 0 for p in self.exponents):
            raise ValueError("product certificate exponents must be nonnegative")
        object.__setattr__(self, "forms", forms)
        object.__setattr__(self, "exponents", tuple(float(p) for p in self.exponents))

    def values(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        out = np.ones(pts.shape[0])
        for f, p in zip(self.forms, self.exponents):
            if p == 0:
                continue  # 0 ** 0 == 1
            inner = pts @ np.array([float(v) for v in f])
            out = out * np.where(inner > 0, np.abs(inner) ** p, 0.0)
        return out


LyapunovCertificate = Union[LinearForm, ProductForm]


def lyapunov_value(cert: LyapunovCertificate, x) -> float:
    x = check_simplex(x)
    return float(cert.values(x[None, :])[0])


def lyapunov_series(cert: LyapunovCertificate, traj: TrajectoryRecord) -> np.ndarray:
    return cert.values(traj.points)


@dataclass(frozen=True)
class MonotoneReport:
    monotone: bool
    max_increase: float
    first_violation: Optional[int]
    min_value: float
    max_value: float
    within_bounds: Optional[bool] = None
    values: np.ndarray = field(default=None, repr=False, compare=False)


def verify_monotone(cert: LyapunovCertificate, traj: TrajectoryRecord,
                    slack: float = 1e-12) -> MonotoneReport:
    """Check ``psi(x(n+1)) <= psi(x(n)) + slack`` along a trajectory.

    The slack is absolute for linear forms and relative (to the larger of
    the two values) for product forms.  Linear forms additionally report
    whether every value lies in ``[min c, max c]``.
    """
    vals = lyapunov_series(cert, traj)
    inc = np.diff(vals)
    if isinstance(cert, ProductForm):
        allowed = slack * np.maximum(np.abs(vals[:-1]), np.abs(vals[1:]))
    else:
        allowed = np.full(inc.shape, slack)
    bad = np.nonzero(inc > allowed)[0]
    bounds = None
    if isinstance(cert, LinearForm):
        lo, hi = float(cert.lower), float(cert.upper)
        bounds = bool(np.all(vals >= lo - slack) and np.all(vals <= hi + slack))
    return MonotoneReport(
        monotone=bad.size == 0,
        max_increase=float(inc.max()) if inc.size else 0.0,
        first_violation=int(bad[0]) if bad.size else None,
        min_value=float(vals.min()),
        max_value=float(vals.max()),
        within_bounds=bounds,
        values=vals,
    )


def certificates(pair: SqsoPair, side: Union[Side, str] = "both") -> list[LinearForm]:
    """One linear certificate per extreme ray of the requested side(s), tagged by source."""
    sides = [Side.A, Side.B] if side == "both" else [Side(side)]
    out = []
    for s in sides:
        basis = cone_extreme_rays(pair.A if s is Side.A else pair.B, s)
        out.extend(LinearForm(tuple(Fraction(v) for v in r), s) for r in basis.rays)
    return out
