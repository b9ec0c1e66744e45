"""Pure-numpy implementations of the hot kernels.

Every function here has a twin with the same signature in ``_kernels_nb``.
The two are interchangeable; ``_accel`` decides which one is exported.
"""
import numpy as np


def solve_gaps(m, a, b, tol, maxiter):
    """Solve ``m*d**(b+1) + a*b*d - a*b = 0`` for ``d`` in (0, 1), elementwise.

    Returns ``(gap, residual, lo, hi, iterations, converged)``.
    """
    m = np.asarray(m, dtype=np.float64)
    ab = a * b
    beta = 1.0 / (1.0 + b)
    G = ab ** beta

    eps = G * m ** (-beta)
    x = eps / (1.0 + beta * eps)
    x = np.where((x > 0.0) & (x < 1.0), x, 0.5)
    lo = np.zeros_like(m)
    hi = np.ones_like(m)
    its = np.zeros(m.shape, dtype=np.int64)
    done = np.zeros(m.shape, dtype=bool)
    gap = np.full_like(m, np.nan)
    res = np.full_like(m, np.nan)

    for it in range(maxiter):
        act = ~done
        if not act.any():
            break
        xa = x[act]
        ma = m[act]
        g = ma * xa ** (b + 1.0) + ab * xa - ab
        la = np.where(g < 0.0, xa, lo[act])
        ha = np.where(g > 0.0, xa, hi[act])
        exact = g == 0.0
        la = np.where(exact, xa, la)
        ha = np.where(exact, xa, ha)
        small = np.abs(g) <= tol * ab

        dg = (b + 1.0) * ma * xa ** b + ab
        xn = xa - g / dg
        near = small & (np.abs(xn - xa) <= 0.5 * tol * xa)
        if near.any():
            xl = xa * (1.0 - 0.5 * tol)
            xh = xa * (1.0 + 0.5 * tol)
            gl = ma * xl ** (b + 1.0) + ab * xl - ab
            gh = ma * xh ** (b + 1.0) + ab * xh - ab
            la = np.where(near & (gl <= 0.0), np.maximum(la, xl), la)
            ha = np.where(near & (gh >= 0.0), np.minimum(ha, xh), ha)

        fin = small & (ha - la <= tol * xa)
        bad = ~((xn > la) & (xn < ha))
        xn = np.where(bad, 0.5 * (la + ha), xn)

        idx = np.flatnonzero(act)
        lo[idx] = la
        hi[idx] = ha
        its[idx] = it + 1
        fi = idx[fin]
        gap[fi] = xa[fin]
        res[fi] = g[fin]
        done[fi] = True
        keep = idx[~fin]
        x[keep] = xn[~fin]

    return gap, res, lo, hi, its, done


def segmented_log_norm(idx, logabs, bounds, slopes, p):
    """Per-block log of ``(sum |c_m|**p * exp(p*m*slope_k))**(1/p)``.

    Block ``k`` holds the entries with ``bounds[k] < idx <= bounds[k+1]``;
    ``p = inf`` gives the block maximum. Empty blocks give ``-inf``.
    """
    idx = np.asarray(idx, dtype=np.int64)
    logabs = np.asarray(logabs, dtype=np.float64)
    bounds = np.asarray(bounds, dtype=np.int64)
    slopes = np.asarray(slopes, dtype=np.float64)
    nb = len(bounds) - 1
    out = np.full(nb, -np.inf)
    if nb <= 0 or len(idx) == 0:
        return out

    k = np.searchsorted(bounds, idx, side="left") - 1
    keep = (k >= 0) & (k < nb) & (logabs > -np.inf)
    k = k[keep]
    if len(k) == 0:
        return out
    t = logabs[keep] + idx[keep].astype(np.float64) * slopes[k]

    tmax = np.full(nb, -np.inf)
    np.maximum.at(tmax, k, t)
    if np.isinf(p):
        return tmax
    w = np.exp(p * (t - tmax[k]))
    s = np.bincount(k, weights=w, minlength=nb)
    has = s > 0.0
    out[has] = tmax[has] + np.log(s[has]) / p
    return out


def log_series(idx, logabs, log_r, chunk=1 << 22):
    """``log(sum_m |c_m| r**m)`` for each entry of ``log_r``."""
    idx = np.asarray(idx, dtype=np.int64)
    logabs = np.asarray(logabs, dtype=np.float64)
    log_r = np.atleast_1d(np.asarray(log_r, dtype=np.float64))
    out = np.full(len(log_r), -np.inf)
    keep = logabs > -np.inf
    idx = idx[keep].astype(np.float64)
    logabs = logabs[keep]
    if len(idx) == 0:
        return out
    step = max(1, chunk // len(idx))
    for s in range(0, len(log_r), step):
        lr = log_r[s:s + step, None]
        with np.errstate(invalid="ignore"):
            t = logabs[None, :] + idx[None, :] * lr
        # r = 0: only the constant term survives
        t = np.where(np.isnan(t), -np.inf, t)
        t = np.where(np.isneginf(lr) & (idx[None, :] == 0.0), logabs[None, :], t)
        tmax = t.max(axis=1)
        fin = tmax > -np.inf
        with np.errstate(invalid="ignore"):
            ssum = np.exp(t - tmax[:, None]).sum(axis=1)
        out[s:s + step] = np.where(fin, tmax + np.log(np.where(fin, ssum, 1.0)), -np.inf)
    return out
