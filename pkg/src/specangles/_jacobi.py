"""Cyclic Jacobi eigensolver kernel.

Written as one nested-loop function so numba can compile it; the identical
Python function is the fallback when numba is unavailable. No fastmath: the
compiled and interpreted paths produce the same floating-point results.
"""

from __future__ import annotations

import math

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def jacobi_sweeps(a, vec, tol, max_sweeps):  # pragma: no cover - runs compiled
    """Diagonalize symmetric `a` in place, accumulating rotations into `vec`.

    Sweeps row-cyclically over the strict upper triangle. The first three
    sweeps skip pivots below 0.2*off/n^2 (threshold strategy); later sweeps
    rotate every nonzero pivot. Returns (sweeps_done, off_norm) where off_norm
    is the off-diagonal Frobenius norm at exit; the caller decides whether
    off_norm <= tol counts as convergence.
    """
    n = a.shape[0]
    sweeps = 0
    while True:
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += a[i, j] * a[i, j]
        off = math.sqrt(2.0 * off2)
        if off <= tol or sweeps >= max_sweeps:
            return sweeps, off
        thresh = 0.0
        if sweeps < 3:
            thresh = 0.2 * off / (n * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0 or abs(apq) <= thresh:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                a[p, p] = a[p, p] - t * apq
                a[q, q] = a[q, q] + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    if i != p and i != q:
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = c * aip - s * aiq
                        a[p, i] = a[i, p]
                        a[i, q] = s * aip + c * aiq
                        a[q, i] = a[i, q]
                for i in range(n):
                    vip = vec[i, p]
                    viq = vec[i, q]
                    vec[i, p] = c * vip - s * viq
                    vec[i, q] = s * vip + c * viq
        sweeps += 1
