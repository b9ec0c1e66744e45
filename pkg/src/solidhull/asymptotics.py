"""Numerical checks of the asymptotic expansions behind the block construction.

Each ``verify_*`` function compares exact values (from the root solver) with
a truncated expansion on a grid and fits the decay order of the residual by
log-log least squares. The fitted constant is the empirical size of the
remainder; none of the O-constants are assumed.

The expansions are evaluated at the real boundaries ``S n**alpha``: the
floors used for summation would add an ``O(1/m_n)`` jitter to the fits.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import minimize_scalar

from . import _accel
from .blocks import BlockMode, build_scheme, log_radius_ratio
from .critical import asymptotic_gaps, critical_gaps
from .errors import DomainError
from .hull import BAND_SPREAD_MAX, ExplicitFormSpec, band_is_bounded
from .sequences import CoefficientSequence
from .weights import derived_constants, log_weight_gap

RM_BAND = 0.15
RATIO_BAND = 0.2


def order_fit(xs, ys):
    """Slope and prefactor of ``log y = order * log x + log constant``."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if len(xs) < 3 or len(xs) != len(ys):
        raise DomainError("order_fit needs at least 3 matching points")
    if np.any(~(xs > 0)) or np.any(~(ys > 0)):
        raise DomainError("order_fit needs positive xs and ys")
    slope, icept = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope), float(math.exp(icept))


def fit_series(ns, ys, powers):
    """Least-squares coefficients of ``ys ~ sum c_k ns**powers[k]``."""
    ns = np.asarray(ns, dtype=np.float64)
    X = np.stack([ns ** p for p in powers], axis=1)
    coef, *_ = np.linalg.lstsq(X, np.asarray(ys, dtype=np.float64), rcond=None)
    return coef


@dataclass
class ExpansionCheck:
    label: str
    xs: np.ndarray
    exact: np.ndarray
    predicted: np.ndarray
    target_order: float
    band: float
    residuals: np.ndarray = field(init=False)
    fitted_order: object = field(init=False)
    fitted_constant: object = field(init=False)

    def __post_init__(self):
        self.residuals = self.exact - self.predicted
        r = np.abs(self.residuals)
        keep = r > 0
        if keep.sum() >= 3:
            self.fitted_order, self.fitted_constant = order_fit(self.xs[keep], r[keep])
        else:
            self.fitted_order = self.fitted_constant = None

    @property
    def within_band(self):
        """Fitted order within ``band`` of the target; None for tiny grids."""
        if self.fitted_order is None:
            return None
        return abs(self.fitted_order - self.target_order) <= self.band

    @property
    def consistent_with_bound(self):
        """Residual decays at least as fast as the target order (up to ``band``)."""
        if self.fitted_order is None:
            return None
        return self.fitted_order <= self.target_order + self.band

    def to_dict(self):
        return {
            "label": self.label,
            "x": self.xs.tolist(),
            "exact": self.exact.tolist(),
            "predicted": self.predicted.tolist(),
            "residual": self.residuals.tolist(),
            "fitted_order": self.fitted_order,
            "fitted_constant": self.fitted_constant,
            "target_order": self.target_order,
            "band": self.band,
            "within_band": self.within_band,
            "consistent_with_bound": self.consistent_with_bound,
        }

    def csv_rows(self):
        yield ["x", "exact", "predicted", "residual"]
        for row in zip(self.xs, self.exact, self.predicted, self.residuals):
            yield [repr(float(v)) for v in row]


def default_m_grid(count=25):
    return np.geomspace(1e2, 1e6, count)


def default_n_grid(lo=20, hi=400, count=25):
    return np.unique(np.round(np.geomspace(lo, hi, count)).astype(np.int64))


def verify_rm_expansion(params, m_grid=None, order=2):
    """Exact critical gap against the ``order``-term expansion."""
    m = np.asarray(default_m_grid() if m_grid is None else m_grid, dtype=np.float64)
    lower = max(1.0, params.a * params.b)
    if np.any(m < lower):
        raise DomainError(f"m_grid must lie in [max(1, ab), inf) = [{lower}, inf)")
    beta = derived_constants(params).beta
    exact, _ = critical_gaps(params, m)
    pred = asymptotic_gaps(params, m, order)
    return ExpansionCheck(f"rm_order{order}", m, exact, pred, -(order + 1) * beta, RM_BAND)


def _ratio_target(params):
    b = params.b
    return -1.0 if b == 2.0 else max(-1.0, 1.0 - 2.0 / b)


def _real_gaps(params, ns):
    c = derived_constants(params)
    ns = np.asarray(ns, dtype=np.float64)
    m0 = c.S * ns ** c.alpha
    m1 = c.S * (ns + 1.0) ** c.alpha
    g0, _ = critical_gaps(params, m0)
    g1, _ = critical_gaps(params, m1)
    return c, ns, m0, m1, g0, g1


def weight_ratio_prediction(params, ns):
    """Linear-plus-constant expansion of ``log(v(r_{m_{n+1}}) / v(r_{m_n}))``."""
    c = derived_constants(params)
    b, G, S = params.b, c.G, c.S
    ns = np.asarray(ns, dtype=np.float64)
    if b < 2.0:
        k = G * S ** (b * c.beta)
        return -2.0 * k / b * ns - k / b
    k = G * S ** (2.0 / 3.0)
    return -k * ns - 0.5 * k + G ** 2 * S ** (1.0 / 3.0) / 3.0


def radius_ratio_prediction(params, ns, anchor="next"):
    """Expansion of ``m_anchor * log(r_{m_{n+1}} / r_{m_n})``."""
    c = derived_constants(params)
    b, G, S = params.b, c.G, c.S
    ns = np.asarray(ns, dtype=np.float64)
    if b < 2.0:
        k = G * S ** (b * c.beta)
        if anchor == "next":
            return 2.0 * k / b * ns + k / b * (3.0 + 2.0 / b)
        return 2.0 * k / b * ns - k / b * (2.0 / b + 1.0)
    k = G * S ** (2.0 / 3.0)
    extra = G ** 2 * S ** (1.0 / 3.0) / 3.0
    if anchor == "next":
        return k * ns + 2.0 * k + extra
    return k * ns - k + extra


def verify_weight_ratio(params, n_grid=None):
    ns = default_n_grid() if n_grid is None else n_grid
    c, ns, m0, m1, g0, g1 = _real_gaps(params, ns)
    exact = log_weight_gap(params, g1) - log_weight_gap(params, g0)
    pred = weight_ratio_prediction(params, ns)
    return ExpansionCheck("weight_ratio", ns, np.atleast_1d(exact), pred,
                          _ratio_target(params), RATIO_BAND)


def verify_radius_ratio(params, n_grid=None, anchor="next"):
    if anchor not in ("next", "current"):
        raise DomainError("anchor must be 'next' or 'current'")
    ns = default_n_grid() if n_grid is None else n_grid
    c, ns, m0, m1, g0, g1 = _real_gaps(params, ns)
    m = m1 if anchor == "next" else m0
    exact = m * log_radius_ratio(g0, g1)
    pred = radius_ratio_prediction(params, ns, anchor)
    return ExpansionCheck(f"radius_ratio_{anchor}", ns, np.atleast_1d(exact), pred,
                          _ratio_target(params), RATIO_BAND)


@dataclass
class Band:
    ns: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    @property
    def min(self):
        return float(self.lo.min())

    @property
    def max(self):
        return float(self.hi.max())

    @property
    def spread(self):
        return self.max - self.min

    @property
    def bounded(self):
        if len(self.ns) < 2:
            return True
        return (self.spread < BAND_SPREAD_MAX and band_is_bounded(self.ns, self.lo)
                and band_is_bounded(self.ns, self.hi))

    def to_dict(self):
        return {"min": self.min, "max": self.max, "spread": self.spread,
                "bounded": self.bounded}


@dataclass
class ProofBoundsReport:
    params: object
    weight: dict
    radius: dict

    def to_dict(self):
        return {
            "params": {"a": self.params.a, "b": self.params.b},
            "weight": {k: v.to_dict() for k, v in self.weight.items()},
            "radius": {k: v.to_dict() for k, v in self.radius.items()},
        }


def proof_weight_variants(params):
    """Explicit forms compared against ``v(r_{n**alpha})``, keyed by name."""
    out = {}
    c = derived_constants(params)
    lin = c.beta * (params.a * params.b) ** (2.0 * c.beta)
    for quad in ("derived", "stated"):
        if params.b > 1.0:
            out[f"{quad}"] = ExplicitFormSpec(quad)
            out[f"{quad}_negated_linear"] = ExplicitFormSpec(quad, linear_term_coeff=-lin)
        else:
            out[quad] = ExplicitFormSpec(quad)
    return out


def verify_proof_bounds(params, n_grid=None, m_samples=9):
    """Two-sided bands for ``v(r_{m_n})`` and ``r_{m_n}**m`` against explicit forms.

    Uses theorem-mode blocks. The weight band is
    ``log v(r_{M_n}) - log_block_weight(n)`` per variant; the radius band is
    ``m log r_{M_n} - m log inner(n)`` over ``m_samples`` indices per block.
    """
    ns = np.asarray(default_n_grid(5, 40, 36) if n_grid is None else n_grid, dtype=np.int64)
    if np.any(ns < 2):
        raise DomainError("n_grid must start at n >= 2")
    scheme = build_scheme(params, BlockMode.THEOREM, int(max(ns.max(), 2)))
    ns = ns[ns >= scheme.n_min]
    gaps = np.array([scheme.gap(int(n)) for n in ns])
    log_v = log_weight_gap(params, gaps)
    log_r = np.log1p(-gaps)

    weight = {}
    for name, spec in proof_weight_variants(params).items():
        d = np.atleast_1d(log_v - spec.log_block_weight(params, ns))
        weight[name] = Band(ns, d, d)

    inner_variants = {"general": ExplicitFormSpec()}
    if params.a == 1.0 and params.b == 2.0:
        inner_variants["specialized"] = ExplicitFormSpec(inner_factor_variant="specialized")
    radius = {}
    for name, spec in inner_variants.items():
        li = spec.log_inner(params, ns)
        lo, hi = [], []
        for k, n in enumerate(ns):
            M0, M1 = scheme.block(int(n))
            m = np.unique(np.linspace(M0 + 1, M1, m_samples).round())
            d = m * (log_r[k] - li[k])
            lo.append(d.min())
            hi.append(d.max())
        radius[name] = Band(ns, np.array(lo), np.array(hi))
    return ProofBoundsReport(params, weight, radius)


def _coeff_arrays(coeffs):
    """``(indices, log|c|, phases or None)`` for the nonzero coefficients."""
    if isinstance(coeffs, CoefficientSequence):
        idx, la = coeffs.terms(-1, coeffs.length_bound - 1)
        keep = la > -np.inf
        return idx[keep], la[keep], None
    c = np.asarray(coeffs, dtype=np.complex128)
    idx = np.flatnonzero(c != 0)
    with np.errstate(divide="ignore"):
        la = np.log(np.abs(c[idx]))
    return idx.astype(np.int64), la, c[idx] / np.abs(c[idx])


def _max_on_circle(idx, la, phase, log_r, K):
    """``log max_j |f(r e^{2 pi i j / K})|`` by folding the series into K bins."""
    t = la + idx * log_r
    tmax = t.max()
    w = phase * np.exp(t - tmax)
    bins = np.zeros(K, dtype=np.complex128)
    np.add.at(bins, idx % K, w)
    vals = np.abs(np.fft.ifft(bins)) * K
    top = vals.max()
    return tmax + math.log(top) if top > 0 else -math.inf


def _golden_refine(fun, xs, vals):
    """Refine the grid maximum of ``fun`` by golden-section search."""
    k = int(np.argmax(vals))
    if 0 < k < len(xs) - 1 and vals[k] > -np.inf:
        res = minimize_scalar(lambda x: -fun(x), bracket=(xs[k - 1], xs[k], xs[k + 1]),
                              method="golden", options={"xtol": 1e-10})
        return float(res.x), float(-res.fun)
    return float(xs[k]), float(vals[k])


def direct_norm_polynomial(params, coeffs, theta_samples=64, grid=256):
    """Bounds ``(lower, upper)`` on ``log sup_r v(r) M(f, r)`` for a polynomial.

    ``coeffs`` is a CoefficientSequence (magnitudes, so ``M(f, r) = f(r)`` and
    both bounds coincide) or an array of complex coefficients. The upper
    bound maximises ``log v + log sum |c_m| r**m``; the lower bound replaces
    the sum by the maximum of ``|f|`` over ``theta_samples`` equispaced
    angles. Maximisation is over a geometric grid in the gap ``1 - r``
    followed by golden-section refinement.
    """
    idx, la, phase = _coeff_arrays(coeffs)
    if len(idx) == 0:
        return -math.inf, -math.inf
    deg = int(idx.max())
    g_lo = float(critical_gaps(params, float(max(deg, 1)))[0]) * 0.5
    # search variable: u = log(gap), gap in [g_lo, 1]
    us = np.linspace(math.log(g_lo), 0.0, grid)
    gaps = np.exp(us)
    gaps[-1] = 1.0

    def upper_at(u):
        g = min(math.exp(u), 1.0)
        return float(log_weight_gap(params, g) + _accel.log_series(idx, la, [math.log1p(-g)])[0]) \
            if g < 1.0 else float(log_weight_gap(params, 1.0) + _accel.log_series(idx, la, [-math.inf])[0])

    up_grid = log_weight_gap(params, gaps) + _accel.log_series(
        idx, la, np.where(gaps < 1.0, np.log1p(-np.minimum(gaps, 0.999999999999)), -np.inf))
    u_star, upper = _golden_refine(upper_at, us, up_grid)
    upper = max(upper, float(up_grid.max()))
    if phase is None:
        return upper, upper

    def lower_at(u):
        g = min(math.exp(u), 1.0)
        lr = math.log1p(-g) if g < 1.0 else -math.inf
        if lr == -math.inf:
            m0 = idx == 0
            val = la[m0][0] if m0.any() else -math.inf
        else:
            val = _max_on_circle(idx, la, phase, lr, theta_samples)
        return float(log_weight_gap(params, g) + val)

    low_grid = np.array([lower_at(u) for u in us])
    u_low, lower = _golden_refine(lower_at, us, low_grid)
    lower = max(lower, float(low_grid.max()))
    # the lower bound's maximiser is a valid point for the upper envelope too
    upper = max(upper, upper_at(u_low), upper_at(float(us[int(np.argmax(low_grid))])))
    return lower, upper
