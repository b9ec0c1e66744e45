"""Block boundaries ``m_n`` and the frame ratios A(n), B(n) between them.

Two boundary rules are supported. ``canonical`` uses ``S * n**alpha`` with
the scale ``S`` from ``weights.block_scale``; ``theorem`` drops the scale and
uses ``n**alpha``, which is how the explicit hull formulas index their
blocks. Real boundaries are floored to integers and then forced strictly
increasing so every block is a nonempty run of indices ``(M_n, M_{n+1}]``.
"""
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .critical import DEFAULT_TOL, critical_gaps
from .errors import DomainError, RangeError
from .weights import derived_constants

FRAME_THRESHOLD = 2.0
DEFAULT_WARMUP = 10
_MAX_INDEX = 2 ** 62


class BlockMode(str, Enum):
    CANONICAL = "canonical"
    THEOREM = "theorem"


@dataclass(frozen=True, eq=False)
class BlockScheme:
    """Integer boundaries ``M_n`` for ``n_min <= n <= n_max + 1``.

    ``gaps[i]`` is the critical gap at ``M_{n_min + i}``. Blocks are numbered
    ``n_min .. n_max``; block ``n`` is the index run ``(M_n, M_{n+1}]``.
    """

    params: object
    mode: BlockMode
    n_min: int
    n_max: int
    boundaries: np.ndarray
    real_boundaries: np.ndarray
    gaps: np.ndarray = field(repr=False)

    @property
    def block_numbers(self):
        return range(self.n_min, self.n_max + 1)

    def _pos(self, n, allow_last=True):
        top = self.n_max + 1 if allow_last else self.n_max
        if not (self.n_min <= n <= top):
            raise RangeError(f"n={n} outside built range [{self.n_min}, {top}]")
        return n - self.n_min

    def boundary(self, n):
        return int(self.boundaries[self._pos(n)])

    def block(self, n):
        """Index run of block ``n`` as the half-open pair ``(M_n, M_{n+1})``."""
        i = self._pos(n, allow_last=False)
        return int(self.boundaries[i]), int(self.boundaries[i + 1])

    def gap(self, n):
        return float(self.gaps[self._pos(n)])

    def log_radius(self, n):
        return math.log1p(-self.gap(n))

    def bounds(self, n_lo, n_hi):
        """Boundaries ``M_{n_lo} .. M_{n_hi+1}`` for the blocks ``n_lo..n_hi``."""
        i0 = self._pos(n_lo, allow_last=False)
        i1 = self._pos(n_hi, allow_last=False)
        return self.boundaries[i0:i1 + 2]


def _real_boundary(params, mode, n):
    c = derived_constants(params)
    scale = c.S if BlockMode(mode) is BlockMode.CANONICAL else 1.0
    return scale * np.asarray(n, dtype=np.float64) ** c.alpha


def build_scheme(params, mode=BlockMode.CANONICAL, n_max=50, tol=DEFAULT_TOL):
    mode = BlockMode(mode)
    if n_max < 2:
        raise DomainError("n_max must be at least 2")
    n_all = np.arange(1, n_max + 2)
    real = _real_boundary(params, mode, n_all)
    if np.any(real >= _MAX_INDEX):
        raise DomainError(f"boundaries exceed integer range for n_max={n_max}")
    fl = np.floor(real).astype(np.int64)
    pos = np.flatnonzero(fl >= 1)
    if len(pos) == 0 or n_all[pos[0]] > n_max:
        raise DomainError(f"no nonempty block up to n_max={n_max}; increase n_max")
    n_min = int(n_all[pos[0]])
    fl = fl[pos[0]:]
    real = real[pos[0]:]
    M = fl.copy()
    for i in range(1, len(M)):
        if M[i] < M[i - 1] + 1:
            M[i] = M[i - 1] + 1
    gaps, _ = critical_gaps(params, M.astype(np.float64), tol)
    for arr in (M, real, gaps):
        arr.setflags(write=False)
    return BlockScheme(params, mode, n_min, n_max, M, real, gaps)


def block_index(scheme, m):
    """The block ``n`` with ``M_n < m <= M_{n+1}``."""
    M = scheme.boundaries
    if not (M[0] < m <= M[-1]):
        raise RangeError(f"m={m} outside covered indices ({M[0]}, {M[-1]}]")
    return int(np.searchsorted(M, m, side="left")) - 1 + scheme.n_min


def log_frame_pair(params, m0, m1, gap0, gap1):
    """``(log A, log B)`` for boundaries ``m0 < m1`` with critical gaps given."""
    a, b = params.a, params.b
    dlv = -a * (gap1 ** (-b) - gap0 ** (-b))  # log v(r1) - log v(r0)
    dlr = log_radius_ratio(gap0, gap1)
    log_a = -m0 * dlr - dlv
    log_b = m1 * dlr + dlv
    return log_a, log_b


def log_radius_ratio(gap0, gap1):
    """``log(r1 / r0)`` from the gaps, without cancelling two log1p values."""
    return np.log1p((np.asarray(gap0) - gap1) / (1.0 - np.asarray(gap0)))


def log_frame_real(params, m0, m1, tol=DEFAULT_TOL):
    """Frame ratios at real (not integerised) boundaries."""
    m0 = np.asarray(m0, dtype=np.float64)
    m1 = np.asarray(m1, dtype=np.float64)
    g0, _ = critical_gaps(params, m0, tol)
    g1, _ = critical_gaps(params, m1, tol)
    return log_frame_pair(params, m0, m1, g0, g1)


def log_frame_quantities(scheme, ns):
    ns = np.atleast_1d(np.asarray(ns, dtype=np.int64))
    if ns.size and (ns.min() < scheme.n_min or ns.max() > scheme.n_max):
        raise RangeError(f"blocks must lie in [{scheme.n_min}, {scheme.n_max}]")
    i = ns - scheme.n_min
    M = scheme.boundaries.astype(np.float64)
    return log_frame_pair(scheme.params, M[i], M[i + 1], scheme.gaps[i], scheme.gaps[i + 1])


def frame_quantities(scheme, n):
    la, lb = log_frame_quantities(scheme, [n])
    return math.exp(la[0]), math.exp(lb[0])


@dataclass
class FrameReport:
    n_values: np.ndarray
    log_A: np.ndarray
    log_B: np.ndarray
    warmup: int
    threshold: float = FRAME_THRESHOLD

    @property
    def A_values(self):
        return np.exp(self.log_A)

    @property
    def B_values(self):
        return np.exp(self.log_B)

    @property
    def n_range(self):
        return int(self.n_values[0]), int(self.n_values[-1])

    @property
    def min_A(self):
        return float(self.A_values.min())

    @property
    def max_A(self):
        return float(self.A_values.max())

    @property
    def min_B(self):
        return float(self.B_values.min())

    @property
    def max_B(self):
        return float(self.B_values.max())

    @property
    def limit_estimate_logA(self):
        """Value at the largest n in range."""
        return float(self.log_A[-1])

    @property
    def limit_estimate_logB(self):
        return float(self.log_B[-1])

    @property
    def last_violation(self):
        """Largest n with A(n) <= threshold or B(n) <= threshold, else None."""
        lt = math.log(self.threshold)
        bad = (self.log_A <= lt) | (self.log_B <= lt)
        if not bad.any():
            return None
        return int(self.n_values[np.flatnonzero(bad)[-1]])

    @property
    def holds(self):
        """Both ratios exceed the threshold for every n past the warmup."""
        lt = math.log(self.threshold)
        sel = self.n_values >= self.warmup
        return bool(np.all(self.log_A[sel] > lt) and np.all(self.log_B[sel] > lt))

    def to_dict(self):
        return {
            "n_range": list(self.n_range),
            "n": self.n_values.tolist(),
            "A": self.A_values.tolist(),
            "B": self.B_values.tolist(),
            "min_A": self.min_A,
            "max_A": self.max_A,
            "min_B": self.min_B,
            "max_B": self.max_B,
            "limit_estimate_logA": self.limit_estimate_logA,
            "limit_estimate_logB": self.limit_estimate_logB,
            "last_violation": self.last_violation,
            "warmup": self.warmup,
            "holds_after_warmup": self.holds,
        }


def resolve_range(scheme, n_range):
    """Inclusive ``(lo, hi)`` block range; defaults to every built block."""
    if n_range is None:
        return scheme.n_min, scheme.n_max
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo > hi:
        raise DomainError(f"empty block range {n_range}")
    if lo < scheme.n_min or hi > scheme.n_max:
        raise RangeError(f"range {n_range} outside built blocks [{scheme.n_min}, {scheme.n_max}]")
    return lo, hi


def check_frame_condition(scheme, n_range=None, warmup=DEFAULT_WARMUP):
    lo, hi = resolve_range(scheme, n_range)
    ns = np.arange(lo, hi + 1)
    la, lb = log_frame_quantities(scheme, ns)
    return FrameReport(ns, la, lb, warmup)
