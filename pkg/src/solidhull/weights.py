"""Exponential radial weights ``v(r) = exp(-a / (1 - r)**b)``.

Weight values are handled as logarithms everywhere. Radii close to 1 should
be passed in gap form ``delta = 1 - r``; ``(1 - r)**b`` loses all precision
once ``r`` is within a few ulps of 1.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedOrderError

MAX_ORDER = 2.0


@dataclass(frozen=True)
class ExpWeightParams:
    """Strength ``a > 0`` and order ``0 < b <= 2`` of the weight."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not np.isfinite(a) or a <= 0:
            raise DomainError(f"a must be positive, got a={self.a}")
        if not np.isfinite(b) or b <= 0:
            raise DomainError(f"b must be positive, got b={self.b}")
        if b > MAX_ORDER:
            raise UnsupportedOrderError(
                f"unsupported order b>2 (got b={self.b}): block boundaries "
                "and hull formulas are only derived for 0 < b <= 2"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class DerivedConstants:
    alpha: float  # 2 + 2/b, block growth exponent
    beta: float   # 1/(1+b)
    G: float      # (ab)**beta
    S: float      # block scale factor

    def as_dict(self):
        return {"alpha": self.alpha, "beta": self.beta, "G": self.G, "S": self.S}


def make_params(a, b):
    return ExpWeightParams(a, b)


def general_block_scale(a, b):
    """Scale ``b * a**(-1/b) * alpha**(-1-1/b)``, valid for ``b < 2``."""
    alpha = 2.0 + 2.0 / b
    return b * a ** (-1.0 / b) * alpha ** (-1.0 - 1.0 / b)


def block_scale(params):
    """Block scale ``S`` making the frame ratios tend to a constant above 2."""
    a, b = params.a, params.b
    if b == 1.0:
        return 1.0 / (16.0 * a)
    if b < 2.0:
        return general_block_scale(a, b)
    return max(2.0 * a, 2.0 * a ** -0.5)


def derived_constants(params):
    a, b = params.a, params.b
    beta = 1.0 / (1.0 + b)
    return DerivedConstants(
        alpha=2.0 + 2.0 / b,
        beta=beta,
        G=(a * b) ** beta,
        S=block_scale(params),
    )


def log_weight_gap(params, gap):
    """``log v`` at radius ``1 - gap``; accepts scalars or arrays."""
    g = np.asarray(gap, dtype=np.float64)
    if np.any(~(g > 0)) or np.any(g > 1):
        raise DomainError("gap must lie in (0, 1]")
    out = -params.a * g ** (-params.b)
    return float(out) if out.ndim == 0 else out


def log_weight(params, r):
    """``log v(r) = -a / (1 - r)**b`` for ``0 <= r < 1``."""
    rr = np.asarray(r, dtype=np.float64)
    if np.any(~(rr >= 0)) or np.any(rr >= 1):
        raise DomainError("r must lie in [0, 1)")
    return log_weight_gap(params, 1.0 - rr)


def weight(params, r):
    """Raw ``v(r)``. Underflows to 0 long before r reaches 1; prefer ``log_weight``."""
    return np.exp(log_weight(params, r))
