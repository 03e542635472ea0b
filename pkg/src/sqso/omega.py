"""Upper estimates of omega-limit sets from linear Lyapunov functions.

Along any trajectory each certified ``psi_c`` decreases to a limit
``lambda_c(x0)``, so the omega-limit set lies in the intersection of the
level sets ``{psi_c = lambda_c}`` with the simplex.  The limits have no
closed form; they are estimated from one shared trajectory as the value
at which ``psi_c`` stops moving.  Because ``psi_c`` is non-increasing the
estimate is an upper bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .dynamics import TrajectoryRecord, iterate
from .errors import InfeasibleLevelSetError, UncertifiedError
from .lyapunov import (LinearForm, LyapunovCertificate, RayBasis, Side,
                       check_certificate_preconditions, cone_membership)
from .numerics import RationalMatrix, mat_rank
from .operators import SqsoPair, check_simplex

LEVEL_TOL = 1e-8


@dataclass(frozen=True)
class StopConfig:
    """Stopping rule for lambda estimation.

    The trajectory runs with l1 tolerance ``conv_tol``; ``lambda_c`` is read
    at the first step closing ``run`` consecutive decrements below
    ``decrement_tol``.
    """

    max_steps: int = 10_000
    conv_tol: float = 1e-13
    decrement_tol: float = 1e-13
    run: int = 10


@dataclass(frozen=True)
class LambdaEstimate:
    value: float
    step: int
    last_decrement: float
    criterion_met: bool
    certified: bool


def _cone_side(pair: SqsoPair, c: Sequence[Fraction], source: Optional[Side]) -> bool:
    sides = [source] if source is not None else [Side.A, Side.B]
    return any(cone_membership(pair.A if s is Side.A else pair.B, c) for s in sides)


def is_certified(pair: SqsoPair, cert: LyapunovCertificate) -> bool:
    """Pair satisfies the unit-box/nonlinear hypotheses and every form lies in a cone."""
    if not check_certificate_preconditions(pair).certified:
        return False
    if isinstance(cert, LinearForm):
        return _cone_side(pair, cert.c, cert.source)
    return all(_cone_side(pair, f, None) for f, p in zip(cert.forms, cert.exponents)
               if p > 0)


def lambda_from_trajectory(cert: LyapunovCertificate, traj: TrajectoryRecord,
                           stop: StopConfig = StopConfig(), certified: bool = True) -> LambdaEstimate:
    vals = cert.values(traj.points)
    dec = np.abs(np.diff(vals))
    step = len(vals) - 1
    met = False
    count = 0
    for n, d in enumerate(dec):
        count = count + 1 if d < stop.decrement_tol else 0
        if count >= stop.run:
            step, met = n + 1, True
            break
    last = float(dec[step - 1]) if step > 0 else 0.0
    return LambdaEstimate(float(vals[step]), step, last, met, certified)


def estimate_lambda(pair: SqsoPair, cert: LyapunovCertificate, x0,
                    stop: StopConfig = StopConfig(),
                    require_certified: bool = True) -> LambdaEstimate:
    """Estimate ``lim psi(x(n))`` from ``x0``.

    Raises :class:`UncertifiedError` unless the certificate is backed by the
    hypotheses above; pass ``require_certified=False`` for exploratory runs
    (the result then carries ``certified=False``).
    """
    ok = is_certified(pair, cert)
    if require_certified and not ok:
        raise UncertifiedError("certificate is not backed by the pair's hypotheses")
    traj = iterate(pair, x0, max_steps=stop.max_steps, conv_tol=stop.conv_tol)
    return lambda_from_trajectory(cert, traj, stop, certified=ok)


@dataclass(frozen=True, eq=False)
class OmegaEstimate:
    """Level-set upper bound of an omega-limit set.

    ``ray_matrix_rank`` is the rank of the ray rows stacked with the simplex
    row ``(1, .., 1)``; ``ray_rank`` is the rank of the ray rows alone.
    """

    m: int
    rays: tuple[tuple[Fraction, ...], ...]
    sources: tuple[Optional[Side], ...]
    lambdas: tuple[LambdaEstimate, ...]
    ray_rank: int
    ray_matrix_rank: int
    resolved_point: Optional[np.ndarray]
    solve_residual: Optional[float]
    level_set: tuple[tuple[tuple[Fraction, ...], float], ...]
    empirical_points: np.ndarray
    trajectory: TrajectoryRecord = field(repr=False)
    note: str = ""

    @property
    def resolved(self) -> bool:
        return self.resolved_point is not None


def empirical_omega(traj: TrajectoryRecord, tail: Optional[int] = None,
                    radius: float = 1e-6) -> np.ndarray:
    """Greedy l1 clustering of the last ``tail`` points.

    Each point joins the first cluster whose representative lies within
    ``radius``, and becomes that cluster's representative (so a converging
    tail is represented by its latest point).  Default tail is
    ``min(500, N // 2)``, at least one point.
    """
    n = traj.points.shape[0]
    if tail is None:
        tail = max(1, min(500, (n - 1) // 2))
    if not 1 <= tail <= n:
        raise ValueError(f"tail must be in [1, {n}]")
    reps: list[np.ndarray] = []
    for x in traj.points[n - tail:]:
        for idx, r in enumerate(reps):
            if np.abs(x - r).sum() <= radius:
                reps[idx] = x
                break
        else:
            reps.append(x)
    return np.array(reps)


def _as_forms(rays) -> list[LinearForm]:
    if isinstance(rays, RayBasis):
        rays = [rays]
    out = []
    for item in rays:
        if isinstance(item, RayBasis):
            out.extend(LinearForm(tuple(Fraction(v) for v in r), item.source) for r in item.rays)
        elif isinstance(item, LinearForm):
            out.append(item)
        else:
            out.append(LinearForm(tuple(Fraction(v) for v in item)))
    return out


def omega_upper_set(pair: SqsoPair, rays: Union[RayBasis, Sequence], x0,
                    stop: StopConfig = StopConfig(), require_certified: bool = True,
                    tail: Optional[int] = None, radius: float = 1e-6) -> OmegaEstimate:
    """Intersect the level sets of every ray's linear Lyapunov function.

    When the rays together with ``(1, .., 1)`` have rank ``m`` the
    intersection is a single point, found by (least squares) solving
    ``c . x = lambda_c`` plus ``sum x = 1``.  Otherwise the affine
    constraints are returned as the description of the bound.
    """
    forms = _as_forms(rays)
    m = pair.m
    if require_certified:
        bad = [f.c for f in forms if not is_certified(pair, f)]
        if bad:
            raise UncertifiedError(f"uncertified rays: {bad}")
    x0 = check_simplex(x0, m)
    traj = iterate(pair, x0, max_steps=stop.max_steps, conv_tol=stop.conv_tol)

    per_ray = [lambda_from_trajectory(f, traj, stop) for f in forms]
    common = max((e.step for e in per_ray), default=traj.n_steps)
    lambdas = []
    for f, e in zip(forms, per_ray):
        lambdas.append(LambdaEstimate(float(f.values(traj.points[common][None, :])[0]),
                                      common, e.last_decrement, e.criterion_met,
                                      is_certified(pair, f)))

    ones = (Fraction(1),) * m
    ray_rows = [f.c for f in forms]
    ray_rank = mat_rank(RationalMatrix(tuple(ray_rows))) if ray_rows else 0
    sys_rank = mat_rank(RationalMatrix(tuple(ray_rows) + (ones,)))
    note = "" if forms else "no certified ray: only the simplex itself bounds the limit set"

    resolved = None
    residual = None
    level_set: tuple = ()
    if sys_rank == m:
        C = np.array([[float(v) for v in row] for row in ray_rows + [ones]])
        rhs = np.array([e.value for e in lambdas] + [1.0])
        sol, *_ = np.linalg.lstsq(C, rhs, rcond=None)
        residual = float(np.abs(C @ sol - rhs).max())
        if (residual > LEVEL_TOL or sol.min() < -LEVEL_TOL
                or abs(sol.sum() - 1.0) > LEVEL_TOL):
            raise InfeasibleLevelSetError(
                f"level equations have no simplex solution (residual {residual:.3g}, x={sol})")
        resolved = sol
        resolved.setflags(write=False)
    else:
        level_set = tuple((f.c, e.value) for f, e in zip(forms, lambdas))
        witness = traj.points[common]
        if any(abs(f.values(witness[None, :])[0] - lam) > LEVEL_TOL for f, lam in
               ((f, e.value) for f, e in zip(forms, lambdas))):
            raise InfeasibleLevelSetError("trajectory point violates its own level equations")
        note = note or "rank below m: the bound is an affine slice of the simplex"

    return OmegaEstimate(
        m=m,
        rays=tuple(f.c for f in forms),
        sources=tuple(f.source for f in forms),
        lambdas=tuple(lambdas),
        ray_rank=ray_rank,
        ray_matrix_rank=sys_rank,
        resolved_point=resolved,
        solve_residual=residual,
        level_set=level_set,
        empirical_points=empirical_omega(traj, tail, radius),
        trajectory=traj,
        note=note,
    )
