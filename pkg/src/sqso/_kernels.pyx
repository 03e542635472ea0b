# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for operator application and trajectory iteration.

Mirror of ``_fallback.py``; every loop keeps the same summation order.
"""
from libc.math cimport fabs, isfinite
from libc.stdlib cimport malloc, free

KIND_SQSO = 0
KIND_TENSOR = 1
KIND_LINEAR = 2
KIND_VOLTERRA = 3

cdef enum:
    C_CONVERGED = 0
    C_PERIOD = 1
    C_MAX_STEPS = 2
    C_OFF_SIMPLEX = 3

STOP_CONVERGED = C_CONVERGED
STOP_PERIOD = C_PERIOD
STOP_MAX_STEPS = C_MAX_STEPS
STOP_OFF_SIMPLEX = C_OFF_SIMPLEX

cdef double NEG_SLACK = 1e-15
cdef double SUM_SLACK = 1e-12


cdef void _step(int kind, const double[:, ::1] M1, const double[:, ::1] M2,
                const double[:, :, ::1] P, const double[::1] x, double[::1] out,
                Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef double s, s2, u, v, acc, inner
    if kind == 0 or kind == 1:
        s = 0.0
        for i in range(m):
            s += x[i]
        s2 = s * s
    if kind == 0:
        for k in range(m):
            u = 0.0
            v = 0.0
            for i in range(m):
                u += M1[i, k] * x[i]
            for j in range(m):
                v += M2[j, k] * x[j]
            out[k] = u * v / s2
    elif kind == 1:
        for k in range(m):
            acc = 0.0
            for i in range(m):
                inner = 0.0
                for j in range(m):
                    inner += P[i, j, k] * x[j]
                acc += x[i] * inner
            out[k] = acc / s2
    elif kind == 2:
        for k in range(m):
            u = 0.0
            for i in range(m):
                u += M1[i, k] * x[i]
            out[k] = u
    else:
        for k in range(m):
            acc = 0.0
            for i in range(m):
                acc += M1[k, i] * x[i]
            out[k] = x[k] * (1.0 + acc)


cdef bint _on_simplex(const double[::1] x, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t k
    cdef double s = 0.0
    cdef double v
    for k in range(m):
        v = x[k]
        if not (v >= -NEG_SLACK) or not isfinite(v):
            return False
        s += v
    return fabs(s - 1.0) <= SUM_SLACK


cdef double _l1(const double[::1] x, const double[::1] y, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t k
    cdef double d = 0.0
    for k in range(m):
        d += fabs(x[k] - y[k])
    return d


def step(int kind, const double[:, ::1] M1, const double[:, ::1] M2,
         const double[:, :, ::1] P, const double[::1] x, double[::1] out):
    """One application of the operator; writes into ``out``."""
    _step(kind, M1, M2, P, x, out, x.shape[0])


def orbit(int kind, const double[:, ::1] M1, const double[:, ::1] M2,
          const double[:, :, ::1] P, const double[::1] x0, Py_ssize_t max_steps,
          double conv_tol, Py_ssize_t conv_run, Py_ssize_t max_lag,
          double[:, ::1] points, double[::1] deltas):
    """Iterate from ``x0`` filling ``points``/``deltas`` until a stop rule fires.

    Returns ``(n_points, stop_code, period)``.
    """
    cdef Py_ssize_t m = x0.shape[0]
    cdef Py_ssize_t n, p, k, top
    cdef Py_ssize_t conv_count = 0
    cdef int code = C_MAX_STEPS
    cdef Py_ssize_t period = 0
    cdef Py_ssize_t n_points = 1
    cdef double delta
    cdef Py_ssize_t *streak = <Py_ssize_t *> malloc((max_lag + 1) * sizeof(Py_ssize_t))
    if streak == NULL:
        raise MemoryError()
    try:
        with nogil:
            for p in range(max_lag + 1):
                streak[p] = 0
            for k in range(m):
                points[0, k] = x0[k]
            for n in range(1, max_steps + 1):
                _step(kind, M1, M2, P, points[n - 1], points[n], m)
                n_points = n + 1
                if not _on_simplex(points[n], m):
                    code = C_OFF_SIMPLEX
                    break
                delta = _l1(points[n], points[n - 1], m)
                deltas[n - 1] = delta
                if delta < conv_tol:
                    conv_count += 1
                    for p in range(max_lag + 1):
                        streak[p] = 0
                    if conv_count >= conv_run:
                        code = C_CONVERGED
                        break
                    continue
                conv_count = 0
                top = max_lag if max_lag < n else n
                for p in range(2, top + 1):
                    if _l1(points[n], points[n - p], m) < conv_tol:
                        streak[p] += 1
                        if streak[p] >= 3 * p:
                            period = p
                            code = C_PERIOD
                            break
                    else:
                        streak[p] = 0
                if code == C_PERIOD:
                    break
    finally:
        free(streak)
    return n_points, code, period
