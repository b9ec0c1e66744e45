"""Critical radii: the maximum point ``r_m`` of ``r -> r**m v(r)`` on [0, 1).

Setting the log-derivative to zero gives ``m * d**(b+1) = a*b*(1 - d)`` for
the gap ``d = 1 - r_m``. The left side minus the right side is strictly
increasing in ``d`` and changes sign on (0, 1), so the root is unique; it is
found by a bracketed Newton iteration that falls back to bisection whenever
a step would leave the bracket.
"""
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import DomainError, SolverError
from .weights import derived_constants

DEFAULT_TOL = 1e-13
MAX_ITER = 1000


@dataclass(frozen=True)
class CriticalRadius:
    m: float
    gap: float
    residual: float

    @property
    def r(self):
        return 1.0 - self.gap


@dataclass(frozen=True)
class ExpansionValue:
    gap_estimate: float
    order: int


def critical_gaps(params, m, tol=DEFAULT_TOL):
    """Vectorised solve; returns ``(gaps, residuals)`` shaped like ``m``.

    Raises SolverError if any root cannot be certified within the
    iteration cap.
    """
    marr = np.asarray(m, dtype=np.float64)
    if np.any(~(marr > 0)) or np.any(~np.isfinite(marr)):
        raise DomainError("m must be positive and finite")
    if not tol > 0:
        raise DomainError("tol must be positive")
    flat = np.atleast_1d(marr).ravel()
    gap, res, lo, hi, its, ok = _accel.solve_gaps(flat, params.a, params.b, tol, MAX_ITER)
    if not np.all(ok):
        i = int(np.flatnonzero(~ok)[0])
        raise SolverError(
            f"no certified root for m={flat[i]!r} after {int(its[i])} iterations; "
            f"bracket [{lo[i]!r}, {hi[i]!r}]",
            m=float(flat[i]), lo=float(lo[i]), hi=float(hi[i]), iterations=int(its[i]),
        )
    return gap.reshape(marr.shape), res.reshape(marr.shape)


def critical_radius(params, m, tol=DEFAULT_TOL):
    gap, res = critical_gaps(params, float(m), tol)
    return CriticalRadius(m=float(m), gap=float(gap), residual=float(res))


def defining_residual(params, m, gap):
    """``m*d**(b+1) - a*b*(1-d)``; zero exactly at the critical gap."""
    a, b = params.a, params.b
    return m * gap ** (b + 1.0) - a * b * (1.0 - gap)


def auxiliary_gap(params, m):
    """Root ``x = G m**-beta / (1 + beta G m**-beta)`` of the linearised equation."""
    c = derived_constants(params)
    eps = c.G * np.asarray(m, dtype=np.float64) ** (-c.beta)
    return eps / (1.0 + c.beta * eps)


def asymptotic_gaps(params, m, order=2):
    """Truncated expansion of the critical gap in powers of ``G m**-beta``.

    order 1: ``e``; order 2: ``e - beta e**2``;
    order 3 adds ``beta(3 beta - 1)/2 e**3`` (vanishes at b = 2).
    """
    if order not in (1, 2, 3):
        raise DomainError("order must be 1, 2 or 3")
    c = derived_constants(params)
    eps = c.G * np.asarray(m, dtype=np.float64) ** (-c.beta)
    out = eps
    if order >= 2:
        out = out - c.beta * eps ** 2
    if order >= 3:
        out = out + 0.5 * c.beta * (3.0 * c.beta - 1.0) * eps ** 3
    return out


def critical_radius_asymptotic(params, m, order=2):
    lower = max(1.0, params.a * params.b)
    if not m >= lower:
        raise DomainError(f"expansion needs m >= max(1, ab) = {lower}, got m={m}")
    return ExpansionValue(gap_estimate=float(asymptotic_gaps(params, m, order)), order=order)


def log_monomial_peak(params, m, tol=DEFAULT_TOL):
    """``max_r log(r**m v(r)) = m log(1 - d_m) - a d_m**-b``; vectorised in ``m``."""
    m = np.asarray(m, dtype=np.float64)
    gap, _ = critical_gaps(params, m, tol)
    out = m * np.log1p(-gap) - params.a * gap ** (-params.b)
    return float(out) if out.ndim == 0 else out
