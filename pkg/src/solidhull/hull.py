"""Block norms describing the solid hull of the weighted space.

A coefficient sequence ``(b_m)`` lies in the solid hull exactly when

    sup_n  v(r_{M_n}) * ( sum_{M_n < m <= M_{n+1}} |b_m|**2 r_{M_n}**(2m) )**(1/2)

is finite, for block boundaries ``M_n`` satisfying the frame condition. For
the exponential weights the factors ``v(r_{M_n})`` and ``r_{M_n}**m`` can be
replaced, up to bounded factors, by explicit expressions in ``n``; those
are evaluated by ``explicit_block_norm``.

Everything is returned as a natural logarithm. A block with no nonzero
coefficient has log-norm ``-inf``.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import _accel
from .blocks import BlockMode, build_scheme, resolve_range
from .errors import DomainError
from .weights import derived_constants

DEFAULT_SLOPE_TOL = 1e-2
# a log-difference sequence counts as bounded when its spread stays below
# this and its trend over the final half of the range is flat
BAND_SPREAD_MAX = 5.0
TREND_SLOPE_MAX = 0.05

VERDICT_NOTE = "finite-range heuristic, not a proof of membership"


def _segment(seq, bounds, slopes, p=2.0):
    idx, la = seq.terms(bounds[0], bounds[-1])
    return _accel.segmented_log_norm(idx, la, bounds, slopes, p)


def tail_fit(ns, values, fraction=0.5):
    """Least-squares slope of the finite ``values`` over the final part of ``ns``.

    Returns 0.0 when fewer than two finite points remain.
    """
    ns = np.asarray(ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if len(ns) == 0:
        return 0.0
    cut = ns[0] + (1.0 - fraction) * (ns[-1] - ns[0])
    sel = (ns >= cut) & np.isfinite(values)
    if sel.sum() < 2:
        return 0.0
    return float(np.polyfit(ns[sel], values[sel], 1)[0])


def canonical_block_norms(scheme, seq, n_range=None):
    """Log block norms for every block in ``n_range`` (inclusive pair)."""
    lo, hi = resolve_range(scheme, n_range)
    i0, i1 = lo - scheme.n_min, hi - scheme.n_min + 1
    gaps = scheme.gaps[i0:i1]
    log_r = np.log1p(-gaps)
    log_v = -scheme.params.a * gaps ** (-scheme.params.b)
    return np.arange(lo, hi + 1), log_v + _segment(seq, scheme.bounds(lo, hi), log_r)


def canonical_block_norm(scheme, seq, n):
    return float(canonical_block_norms(scheme, seq, (n, n))[1][0])


@dataclass
class BlockNormProfile:
    params: object
    mode: str
    per_block_log: dict
    sup_log: float
    argmax_n: object
    tail_slope: float
    verdict: object = None

    def to_dict(self):
        return {
            "params": {"a": self.params.a, "b": self.params.b},
            "mode": self.mode,
            "blocks": [{"n": n, "log_value": v} for n, v in self.per_block_log.items()],
            "sup_log": self.sup_log,
            "argmax_n": self.argmax_n,
            "tail_slope": self.tail_slope,
            "verdict": self.verdict,
        }


def _profile(params, mode, ns, vals):
    per = {int(n): float(v) for n, v in zip(ns, vals)}
    if len(vals) and np.any(vals > -np.inf):
        k = int(np.argmax(vals))
        sup, arg = float(vals[k]), int(ns[k])
    else:
        sup, arg = -math.inf, None
    return BlockNormProfile(params, mode, per, sup, arg, tail_fit(ns, vals))


def hull_norm_profile(scheme, seq, n_range=None):
    ns, vals = canonical_block_norms(scheme, seq, n_range)
    return _profile(scheme.params, scheme.mode.value, ns, vals)


@dataclass(frozen=True)
class ExplicitFormSpec:
    """Choice of constants for the explicit block weights.

    ``quad_coeff_variant``: ``"stated"`` uses ``a G**-beta`` for the ``n**2``
    coefficient, ``"derived"`` uses ``a G**-b`` (equal to ``G/b``). The two
    agree only when ``G == 1``.
    ``inner_factor_variant``: ``"general"`` is ``1 - G n**(-2/b)`` plus
    ``beta G**2 n**(-4/b)`` when ``b > 1``; ``"specialized"`` is the fixed
    ``a = 1, b = 2`` factor ``1 - 1/(2**(1/3) n) + 1/(3 * 2**(2/3) n**2)``.
    ``linear_term_coeff``: coefficient ``L`` of the ``+L n`` term in the log
    weight; ``None`` means ``beta (ab)**(2 beta)`` for ``b > 1`` and 0 else.
    """

    quad_coeff_variant: str = "stated"
    inner_factor_variant: str = "general"
    linear_term_coeff: object = None

    def __post_init__(self):
        if self.quad_coeff_variant not in ("stated", "derived"):
            raise DomainError(f"unknown quad_coeff_variant {self.quad_coeff_variant!r}")
        if self.inner_factor_variant not in ("general", "specialized"):
            raise DomainError(f"unknown inner_factor_variant {self.inner_factor_variant!r}")

    def quad_coeff(self, params):
        c = derived_constants(params)
        if self.quad_coeff_variant == "stated":
            return params.a * c.G ** (-c.beta)
        return params.a * c.G ** (-params.b)

    def linear_coeff(self, params):
        if self.linear_term_coeff is not None:
            return float(self.linear_term_coeff)
        if params.b <= 1.0:
            return 0.0
        c = derived_constants(params)
        return c.beta * (params.a * params.b) ** (2.0 * c.beta)

    def log_inner(self, params, n):
        """``log`` of the inner factor whose ``m``-th power replaces ``r**m``."""
        n = np.asarray(n, dtype=np.float64)
        b = params.b
        if self.inner_factor_variant == "specialized":
            if params.a != 1.0 or b != 2.0:
                raise DomainError("the specialized inner factor exists only for a=1, b=2")
            x = -1.0 / (2.0 ** (1.0 / 3.0) * n) + 1.0 / (3.0 * 2.0 ** (2.0 / 3.0) * n ** 2)
        else:
            c = derived_constants(params)
            x = -c.G * n ** (-2.0 / b)
            if b > 1.0:
                x = x + c.beta * c.G ** 2 * n ** (-4.0 / b)
        if np.any(x <= -1.0):
            raise DomainError("inner factor is not positive for some n; use larger n")
        return np.log1p(x)

    def log_block_weight(self, params, n):
        """Log of the square root of the ``exp(...)`` prefactor."""
        n = np.asarray(n, dtype=np.float64)
        return -self.quad_coeff(params) * n ** 2 + self.linear_coeff(params) * n


def explicit_block_norms(params, spec, seq, n_range, scheme=None):
    """Explicit-form log block norms on theorem-mode blocks ``(n**alpha, (n+1)**alpha]``."""
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo < 2:
        raise DomainError("explicit block norms need n >= 2")
    if scheme is None or scheme.mode is not BlockMode.THEOREM or scheme.n_max < hi:
        scheme = build_scheme(params, BlockMode.THEOREM, max(hi, 2))
    lo_eff = max(lo, scheme.n_min)
    ns = np.arange(lo_eff, hi + 1)
    vals = spec.log_block_weight(params, ns) + _segment(
        seq, scheme.bounds(lo_eff, hi), spec.log_inner(params, ns))
    return ns, vals


def explicit_block_norm(params, spec, seq, n):
    return float(explicit_block_norms(params, spec, seq, (n, n))[1][0])


@dataclass
class MembershipVerdict:
    profile: BlockNormProfile
    verdict: str
    slope_tol: float
    note: str = VERDICT_NOTE

    def to_dict(self):
        d = self.profile.to_dict()
        d["verdict"] = self.verdict
        d["slope_tol"] = self.slope_tol
        d["note"] = self.note
        return d


def classify_trend(ns, vals, slope_tol=DEFAULT_SLOPE_TOL):
    """``bounded`` / ``growing`` / ``inconclusive`` from the tail of a log sequence."""
    ns = np.asarray(ns, dtype=np.float64)
    vals = np.asarray(vals, dtype=np.float64)
    fin = np.isfinite(vals)
    if not fin.any():
        return "bounded"
    if np.any(np.isnan(vals)):
        return "inconclusive"
    half = tail_fit(ns, vals, 0.5)
    if half > slope_tol:
        return "growing"
    cut = ns[0] + 0.5 * (ns[-1] - ns[0])
    if not np.any(fin & (ns >= cut)):
        # support ends in the first half of the range
        return "bounded"
    if tail_fit(ns, vals, 0.25) > slope_tol:
        return "inconclusive"
    return "bounded"


def membership_diagnostic(scheme, seq, n_range=None, slope_tol=DEFAULT_SLOPE_TOL):
    prof = hull_norm_profile(scheme, seq, n_range)
    ns = np.array(list(prof.per_block_log.keys()))
    vals = np.array(list(prof.per_block_log.values()))
    verdict = classify_trend(ns, vals, slope_tol)
    if verdict == "bounded" and not np.any(np.isfinite(vals)):
        beyond = seq.support_max() > scheme.boundaries[-1]
        verdict = "inconclusive" if beyond else "bounded"
    prof.verdict = verdict
    return MembershipVerdict(prof, verdict, slope_tol)


def band_is_bounded(ns, diffs):
    """Bounded-band test shared by the canonical/explicit comparisons."""
    diffs = np.asarray(diffs, dtype=np.float64)
    if len(diffs) == 0:
        return False
    spread = float(diffs.max() - diffs.min())
    return spread < BAND_SPREAD_MAX and abs(tail_fit(ns, diffs)) <= TREND_SLOPE_MAX


@dataclass
class ComparisonReport:
    params: object
    spec: ExplicitFormSpec
    n_values: np.ndarray
    canonical: np.ndarray
    explicit: np.ndarray
    diffs: np.ndarray = field(init=False)
    ns_compared: np.ndarray = field(init=False)

    def __post_init__(self):
        ok = np.isfinite(self.canonical) & np.isfinite(self.explicit)
        self.ns_compared = self.n_values[ok]
        self.diffs = self.canonical[ok] - self.explicit[ok]

    @property
    def empty(self):
        return len(self.diffs) == 0

    @property
    def max_diff(self):
        return float(self.diffs.max()) if not self.empty else None

    @property
    def min_diff(self):
        return float(self.diffs.min()) if not self.empty else None

    @property
    def spread(self):
        return None if self.empty else self.max_diff - self.min_diff

    @property
    def tail_slope(self):
        return tail_fit(self.ns_compared, self.diffs)

    @property
    def bounded(self):
        return band_is_bounded(self.ns_compared, self.diffs)

    def to_dict(self):
        return {
            "params": {"a": self.params.a, "b": self.params.b},
            "quad_coeff_variant": self.spec.quad_coeff_variant,
            "inner_factor_variant": self.spec.inner_factor_variant,
            "quad_coeff": self.spec.quad_coeff(self.params),
            "linear_term_coeff": self.spec.linear_coeff(self.params),
            "blocks": [{"n": int(n), "log_diff": float(d)}
                       for n, d in zip(self.ns_compared, self.diffs)],
            "max": self.max_diff,
            "min": self.min_diff,
            "spread": self.spread,
            "tail_slope": self.tail_slope,
            "bounded": self.bounded,
        }


def compare_canonical_vs_explicit(params, spec, seq, n_range):
    """Canonical minus explicit log block norms on shared theorem-mode blocks."""
    lo, hi = int(n_range[0]), int(n_range[1])
    scheme = build_scheme(params, BlockMode.THEOREM, max(hi, 2))
    ns, exp_vals = explicit_block_norms(params, spec, seq, (lo, hi), scheme)
    _, can_vals = canonical_block_norms(scheme, seq, (int(ns[0]), int(ns[-1])))
    return ComparisonReport(params, spec, ns, can_vals, exp_vals)
