"""Pure-Python kernels; the reference twin of ``_kernels.pyx``.

Loops and summation order match the compiled kernels exactly, so both
backends produce bit-identical trajectories.
"""
import math

KIND_SQSO = 0
KIND_TENSOR = 1
KIND_LINEAR = 2
KIND_VOLTERRA = 3

STOP_CONVERGED = 0
STOP_PERIOD = 1
STOP_MAX_STEPS = 2
STOP_OFF_SIMPLEX = 3

NEG_SLACK = 1e-15
SUM_SLACK = 1e-12


def _step_sqso(A, B, x, m):
    s = 0.0
    for i in range(m):
        s += x[i]
    s2 = s * s
    out = [0.0] * m
    for k in range(m):
        u = 0.0
        v = 0.0
        for i in range(m):
            u += A[i][k] * x[i]
        for j in range(m):
            v += B[j][k] * x[j]
        out[k] = u * v / s2
    return out


def _step_tensor(P, x, m):
    s = 0.0
    for i in range(m):
        s += x[i]
    s2 = s * s
    out = [0.0] * m
    for k in range(m):
        acc = 0.0
        for i in range(m):
            inner = 0.0
            Pi = P[i]
            for j in range(m):
                inner += Pi[j][k] * x[j]
            acc += x[i] * inner
        out[k] = acc / s2
    return out


def _step_linear(L, x, m):
    out = [0.0] * m
    for k in range(m):
        u = 0.0
        for i in range(m):
            u += L[i][k] * x[i]
        out[k] = u
    return out


def _step_volterra(a, x, m):
    out = [0.0] * m
    for k in range(m):
        acc = 0.0
        ak = a[k]
        for i in range(m):
            acc += ak[i] * x[i]
        out[k] = x[k] * (1.0 + acc)
    return out


def _stepper(kind, M1, M2, P, m):
    if kind == KIND_SQSO:
        A = M1.tolist()
        B = M2.tolist()
        return lambda x: _step_sqso(A, B, x, m)
    if kind == KIND_TENSOR:
        P3 = P.tolist()
        return lambda x: _step_tensor(P3, x, m)
    if kind == KIND_LINEAR:
        L = M1.tolist()
        return lambda x: _step_linear(L, x, m)
    if kind == KIND_VOLTERRA:
        a = M1.tolist()
        return lambda x: _step_volterra(a, x, m)
    raise ValueError(f"unknown operator kind {kind}")


def step(kind, M1, M2, P, x, out):
    """One application of the operator; writes into ``out``."""
    m = x.shape[0]
    res = _stepper(kind, M1, M2, P, m)(x.tolist())
    for k in range(m):
        out[k] = res[k]


def _on_simplex(x, m):
    s = 0.0
    for k in range(m):
        v = x[k]
        if not (v >= -NEG_SLACK) or not math.isfinite(v):
            return False
        s += v
    return abs(s - 1.0) <= SUM_SLACK


def _l1(x, y, m):
    d = 0.0
    for k in range(m):
        d += abs(x[k] - y[k])
    return d


def orbit(kind, M1, M2, P, x0, max_steps, conv_tol, conv_run, max_lag, points, deltas):
    """Iterate from ``x0`` filling ``points``/``deltas`` until a stop rule fires.

    Returns ``(n_points, stop_code, period)``.  ``points`` must hold at
    least ``max_steps + 1`` rows, ``deltas`` at least ``max_steps``.
    """
    m = x0.shape[0]
    f = _stepper(kind, M1, M2, P, m)
    traj = [x0.tolist()]
    dl = []
    streak = [0] * (max_lag + 1)
    conv_count = 0
    code = STOP_MAX_STEPS
    period = 0
    for n in range(1, max_steps + 1):
        x = f(traj[n - 1])
        traj.append(x)
        if not _on_simplex(x, m):
            code = STOP_OFF_SIMPLEX
            break
        delta = _l1(x, traj[n - 1], m)
        dl.append(delta)
        if delta < conv_tol:
            conv_count += 1
            for p in range(max_lag + 1):
                streak[p] = 0
            if conv_count >= conv_run:
                code = STOP_CONVERGED
                break
            continue
        conv_count = 0
        top = max_lag if max_lag < n else n
        for p in range(2, top + 1):
            if _l1(x, traj[n - p], m) < conv_tol:
                streak[p] += 1
                if streak[p] >= 3 * p:
                    period = p
                    code = STOP_PERIOD
                    break
            else:
                streak[p] = 0
        if code == STOP_PERIOD:
            break
    for r, x in enumerate(traj):
        for k in range(m):
            points[r, k] = x[k]
    for r, d in enumerate(dl):
        deltas[r] = d
    return len(traj), code, period
