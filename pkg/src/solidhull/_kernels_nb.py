"""Numba-compiled twins of the kernels in ``_kernels_np``."""
import math
import warnings

import numpy as np
from numba import njit, prange
from numba.core.errors import NumbaWarning

# old system TBB; numba falls back to another threading layer on its own
warnings.filterwarnings("ignore", message=".*TBB threading layer.*", category=NumbaWarning)


@njit(cache=True)
def _gfun(m, ab, b, x):
    return m * x ** (b + 1.0) + ab * x - ab


@njit(cache=True, parallel=True)
def _solve_gaps(m, a, b, tol, maxiter):
    n = m.shape[0]
    ab = a * b
    beta = 1.0 / (1.0 + b)
    G = ab ** beta
    gap = np.full(n, np.nan)
    res = np.full(n, np.nan)
    lo_out = np.zeros(n)
    hi_out = np.ones(n)
    its = np.zeros(n, dtype=np.int64)
    conv = np.zeros(n, dtype=np.bool_)
    for i in prange(n):
        mi = m[i]
        eps = G * mi ** (-beta)
        x = eps / (1.0 + beta * eps)
        if not (x > 0.0 and x < 1.0):
            x = 0.5
        lo = 0.0
        hi = 1.0
        for it in range(maxiter):
            g = _gfun(mi, ab, b, x)
            if g < 0.0:
                lo = x
            elif g > 0.0:
                hi = x
            else:
                lo = x
                hi = x
            small = abs(g) <= tol * ab
            dg = (b + 1.0) * mi * x ** b + ab
            xn = x - g / dg
            if small and abs(xn - x) <= 0.5 * tol * x:
                xl = x * (1.0 - 0.5 * tol)
                xh = x * (1.0 + 0.5 * tol)
                if _gfun(mi, ab, b, xl) <= 0.0:
                    lo = max(lo, xl)
                if _gfun(mi, ab, b, xh) >= 0.0:
                    hi = min(hi, xh)
            its[i] = it + 1
            if small and hi - lo <= tol * x:
                gap[i] = x
                res[i] = g
                conv[i] = True
                break
            if not (xn > lo and xn < hi):
                xn = 0.5 * (lo + hi)
            x = xn
        lo_out[i] = lo
        hi_out[i] = hi
    return gap, res, lo_out, hi_out, its, conv


def solve_gaps(m, a, b, tol, maxiter):
    m = np.ascontiguousarray(np.atleast_1d(np.asarray(m, dtype=np.float64)))
    shape = np.shape(m)
    out = _solve_gaps(m.ravel(), float(a), float(b), float(tol), int(maxiter))
    return tuple(o.reshape(shape) for o in out)


@njit(cache=True, parallel=True)
def _segmented_log_norm(idx, logabs, bounds, slopes, p):
    nb = bounds.shape[0] - 1
    out = np.full(nb, -np.inf)
    # block k occupies idx positions [starts[k], starts[k+1])
    starts = np.searchsorted(idx, bounds, side="right")
    for k in prange(nb):
        j0 = starts[k]
        j1 = starts[k + 1]
        sl = slopes[k]
        tmax = -np.inf
        for j in range(j0, j1):
            if logabs[j] > -np.inf:
                t = logabs[j] + idx[j] * sl
                if t > tmax:
                    tmax = t
        if tmax == -np.inf or math.isinf(p):
            out[k] = tmax
            continue
        s = 0.0
        for j in range(j0, j1):
            if logabs[j] > -np.inf:
                s += math.exp(p * (logabs[j] + idx[j] * sl - tmax))
        out[k] = tmax + math.log(s) / p
    return out


def segmented_log_norm(idx, logabs, bounds, slopes, p):
    nb = len(bounds) - 1
    if nb <= 0:
        return np.full(0, -np.inf)
    return _segmented_log_norm(
        np.ascontiguousarray(idx, dtype=np.int64),
        np.ascontiguousarray(logabs, dtype=np.float64),
        np.ascontiguousarray(bounds, dtype=np.int64),
        np.ascontiguousarray(slopes, dtype=np.float64),
        float(p),
    )


@njit(cache=True, parallel=True)
def _log_series(idx, logabs, log_r):
    nr = log_r.shape[0]
    out = np.full(nr, -np.inf)
    for i in prange(nr):
        lr = log_r[i]
        tmax = -np.inf
        for j in range(idx.shape[0]):
            if logabs[j] == -np.inf:
                continue
            if lr == -np.inf:
                t = logabs[j] if idx[j] == 0 else -np.inf
            else:
                t = logabs[j] + idx[j] * lr
            if t > tmax:
                tmax = t
        if tmax == -np.inf:
            continue
        s = 0.0
        for j in range(idx.shape[0]):
            if logabs[j] == -np.inf:
                continue
            if lr == -np.inf:
                if idx[j] == 0:
                    s += math.exp(logabs[j] - tmax)
            else:
                s += math.exp(logabs[j] + idx[j] * lr - tmax)
        out[i] = tmax + math.log(s)
    return out


def log_series(idx, logabs, log_r):
    return _log_series(
        np.ascontiguousarray(idx, dtype=np.int64),
        np.ascontiguousarray(logabs, dtype=np.float64),
        np.ascontiguousarray(np.atleast_1d(log_r), dtype=np.float64),
    )
