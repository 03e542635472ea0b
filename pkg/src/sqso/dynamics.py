"""Trajectories of quadratic stochastic operators.

:func:`iterate` runs the compiled (or fallback) orbit kernel and wraps the
result in an immutable :class:`TrajectoryRecord`.  Stop rules:

* ``Converged``: ten consecutive steps with l1 displacement below ``conv_tol``.
* ``PeriodDetected(p)``: for some lag ``2 <= p <= 50`` the point returns
  within ``conv_tol`` of the point ``p`` steps back, for ``3p`` steps in a
  row, while individual steps stay at least ``conv_tol`` long.
* ``MaxStepsReached`` otherwise.

Iterates are never renormalized; leaving the simplex raises.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Union

import numpy as np

from ._backend import kernels
from .errors import AdmissibilityError, SimplexError
from .numerics import RationalMatrix
from .operators import (Admissibility, Case, Classification, CubicTensor, SqsoPair,
                        VolterraOperator, check_simplex, _NO_MATRIX, _NO_TENSOR)

DEFAULT_MAX_STEPS = 10_000
DEFAULT_CONV_TOL = 1e-12
DEFAULT_FP_TOL = 1e-9
CONV_RUN = 10
MAX_LAG = 50


@dataclass(frozen=True, eq=False)
class OperatorHandle:
    """Uniform handle over the supported operator kinds."""

    kind: int
    m: int
    m1: np.ndarray = field(default=_NO_MATRIX, repr=False)
    m2: np.ndarray = field(default=_NO_MATRIX, repr=False)
    tensor: np.ndarray = field(default=_NO_TENSOR, repr=False)
    label: str = ""

    def __call__(self, x) -> np.ndarray:
        x = check_simplex(x, self.m)
        out = np.empty_like(x)
        kernels.step(self.kind, self.m1, self.m2, self.tensor, x, out)
        return out


OperatorLike = Union[OperatorHandle, SqsoPair, CubicTensor, Classification,
                     VolterraOperator, RationalMatrix]


def as_operator(op: OperatorLike) -> OperatorHandle:
    """Wrap a pair, tensor, linear classification/matrix or Volterra operator."""
    if isinstance(op, OperatorHandle):
        return op
    if isinstance(op, SqsoPair):
        if op.admissibility is Admissibility.INVALID:
            raise AdmissibilityError("cannot iterate an Invalid pair")
        return OperatorHandle(kernels.KIND_SQSO, op.m, op.a_float, op.b_float, label="sqso")
    if isinstance(op, CubicTensor):
        return OperatorHandle(kernels.KIND_TENSOR, op.m, tensor=op.as_float, label="tensor")
    if isinstance(op, VolterraOperator):
        return OperatorHandle(kernels.KIND_VOLTERRA, op.m, op.a, label="volterra")
    if isinstance(op, Classification):
        if op.case is not Case.LINEAR:
            raise TypeError(f"only Linear classifications carry a matrix, got {op.case.value}")
        op = op.matrix
    if isinstance(op, RationalMatrix):
        L = np.ascontiguousarray(op.to_float())
        return OperatorHandle(kernels.KIND_LINEAR, op.rows, L, label="linear")
    raise TypeError(f"unsupported operator {type(op).__name__}")


class StopReason(str, Enum):
    CONVERGED = "Converged"
    PERIOD_DETECTED = "PeriodDetected"
    MAX_STEPS = "MaxStepsReached"


_STOP_CODES = {
    kernels.STOP_CONVERGED: StopReason.CONVERGED,
    kernels.STOP_PERIOD: StopReason.PERIOD_DETECTED,
    kernels.STOP_MAX_STEPS: StopReason.MAX_STEPS,
}


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Iterates ``x(0) .. x(N)`` (rows of ``points``) and step displacements."""

    points: np.ndarray
    step_deltas: np.ndarray
    stop_reason: StopReason
    period: Optional[int] = None
    lyapunov_traces: Mapping[str, np.ndarray] = field(default_factory=dict)

    @property
    def n_steps(self) -> int:
        return self.points.shape[0] - 1

    @property
    def final(self) -> np.ndarray:
        return self.points[-1]

    def with_traces(self, traces: Mapping[str, np.ndarray]) -> "TrajectoryRecord":
        merged = dict(self.lyapunov_traces)
        for name, series in traces.items():
            series = np.asarray(series, dtype=np.float64)
            series.setflags(write=False)
            merged[name] = series
        return TrajectoryRecord(self.points, self.step_deltas, self.stop_reason,
                                self.period, merged)


def iterate(op: OperatorLike, x0, max_steps: int = DEFAULT_MAX_STEPS,
            conv_tol: float = DEFAULT_CONV_TOL) -> TrajectoryRecord:
    """Run ``x(n+1) = V(x(n))`` from ``x0`` until a stop rule fires."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if not conv_tol > 0:
        raise ValueError("conv_tol must be positive")
    h = as_operator(op)
    x0 = check_simplex(x0, h.m)
    points = np.empty((max_steps + 1, h.m), dtype=np.float64)
    deltas = np.empty(max_steps, dtype=np.float64)
    n, code, period = kernels.orbit(h.kind, h.m1, h.m2, h.tensor, x0, max_steps,
                                    float(conv_tol), CONV_RUN, MAX_LAG, points, deltas)
    if code == kernels.STOP_OFF_SIMPLEX:
        raise SimplexError(f"iterate {n - 1} left the simplex: {points[n - 1]!r}")
    points = points[:n].copy()
    deltas = deltas[:n - 1].copy()
    points.setflags(write=False)
    deltas.setflags(write=False)
    reason = _STOP_CODES[code]
    return TrajectoryRecord(points, deltas, reason,
                            period if reason is StopReason.PERIOD_DETECTED else None)


class LimitKind(str, Enum):
    FIXED_POINT = "FixedPoint"
    CYCLE = "Cycle"
    UNDECIDED = "Undecided"


@dataclass(frozen=True, eq=False)
class LimitReport:
    kind: LimitKind
    point: Optional[np.ndarray] = None
    residual: Optional[float] = None
    period: Optional[int] = None
    representatives: Optional[np.ndarray] = None


def detect_limit(traj: TrajectoryRecord, op: OperatorLike,
                 fp_tol: float = DEFAULT_FP_TOL) -> LimitReport:
    """Read the apparent limit behaviour off a trajectory.

    A converged trajectory whose final point moves by more than ``fp_tol``
    under one more application is reported as undecided.
    """
    if traj.stop_reason is StopReason.CONVERGED:
        x = traj.final
        residual = float(np.abs(as_operator(op)(x) - x).sum())
        if residual <= fp_tol:
            return LimitReport(LimitKind.FIXED_POINT, point=x.copy(), residual=residual)
    elif traj.stop_reason is StopReason.PERIOD_DETECTED:
        p = traj.period
        return LimitReport(LimitKind.CYCLE, period=p, representatives=traj.points[-p:].copy())
    return LimitReport(LimitKind.UNDECIDED)
