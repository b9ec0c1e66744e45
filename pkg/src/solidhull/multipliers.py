"""Mixed-norm block spaces ``l^J(p, q)`` and multipliers into ``l^p``.

``l^J(p, q)`` takes an inner ``l^p`` norm over each block ``(J_k, J_{k+1}]``
and an outer ``l^q`` norm over the blocks. Multipliers from the unit ball of
``l^J(2, inf)`` into ``l^p`` form again such a space, with exponents given
by ``multiplier_target``. Combined with the explicit block weights this
characterises the multipliers from the weighted space into ``l^p``.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _accel
from .blocks import BlockMode, build_scheme
from .errors import DomainError, RangeError
from .hull import DEFAULT_SLOPE_TOL, VERDICT_NOTE, ExplicitFormSpec, classify_trend
from .sequences import dense, rule, sparse

INF = math.inf


def _check_exponent(x, name):
    if not (x >= 1.0):
        raise DomainError(f"{name} must lie in [1, inf], got {x}")
    return float(x)


@dataclass(frozen=True, eq=False)
class BlockSpaceSpec:
    """Boundaries ``J`` (strictly increasing; ``J[0] = -1`` includes index 0)."""

    J: np.ndarray
    p: float
    q: float

    def __post_init__(self):
        J = np.array(self.J, dtype=np.int64)
        if J.ndim != 1 or len(J) < 2 or np.any(np.diff(J) <= 0) or J[0] < -1:
            raise DomainError("J must be a strictly increasing sequence of at least 2 integers >= -1")
        J.setflags(write=False)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "p", _check_exponent(self.p, "p"))
        object.__setattr__(self, "q", _check_exponent(self.q, "q"))


def outer_log_norm(log_values, q):
    """``log`` of the ``l^q`` norm of ``exp(log_values)``."""
    v = np.asarray(log_values, dtype=np.float64)
    v = v[v > -np.inf]
    if len(v) == 0:
        return -INF
    vmax = v.max()
    if math.isinf(q):
        return float(vmax)
    return float(vmax + math.log(np.exp(q * (v - vmax)).sum()) / q)


def block_pq_norm(spec, seq):
    """Log of the ``l^J(p, q)`` norm of ``seq``."""
    J = spec.J
    _, head = seq.terms(-1, J[0])
    if np.any(head > -np.inf) or seq.support_max() > J[-1]:
        raise RangeError(f"sequence support leaves the covered range ({J[0]}, {J[-1]}]")
    idx, la = seq.terms(J[0], J[-1])
    inner = _accel.segmented_log_norm(idx, la, J, np.zeros(len(J) - 1), spec.p)
    return outer_log_norm(inner, spec.q)


@dataclass(frozen=True)
class MultiplierTarget:
    r: float
    s: float
    case: str


def multiplier_target(p):
    """Exponents ``(r, s)`` with ``(l^J(2, inf), l^p) = l^J(r, s)``."""
    if not (p >= 1.0):
        raise DomainError(f"p must lie in [1, inf], got {p}")
    if math.isinf(p):
        return MultiplierTarget(INF, INF, "c")
    if p >= 2.0:
        return MultiplierTarget(INF, float(p), "b")
    return MultiplierTarget(2.0 * p / (2.0 - p), float(p), "a")


@dataclass
class MultiplierDiagnostic:
    params: object
    p: float
    target: MultiplierTarget
    per_block_log: dict
    aggregate_log: float
    verdict: str
    label: str
    note: str = VERDICT_NOTE

    @property
    def aggregate(self):
        return math.exp(self.aggregate_log)

    def to_dict(self):
        per = list(self.per_block_log.values())
        finite = [v for v in per if v > -INF]
        sup = max(finite) if finite else -INF
        arg = None
        if finite:
            arg = next(n for n, v in self.per_block_log.items() if v == sup)
        return {
            "params": {"a": self.params.a, "b": self.params.b},
            "mode": BlockMode.THEOREM.value,
            "case": self.target.case,
            "p": self.p,
            "r": self.target.r,
            "s": self.target.s,
            "label": self.label,
            "blocks": [{"n": n, "log_value": v} for n, v in self.per_block_log.items()],
            "sup_log": sup,
            "argmax_n": arg,
            "aggregate_log": self.aggregate_log,
            "verdict": self.verdict,
            "note": self.note,
        }


def _is_literal(params):
    return params.a == 1.0 and params.b == 1.0


def multiplier_check(params, lam, p, n_range, generalized=False, spec=None):
    """Per-block test quantities for ``lam`` to multiply into ``l^p``.

    Block ``n`` is ``(n**alpha, (n+1)**alpha]`` and ``lam_m`` is rescaled by
    the reciprocal explicit weight, which for ``a = b = 1`` is
    ``exp(n**2) (1 - 1/n**2)**(-m)``. Other ``(a, b)`` require
    ``generalized=True``.
    """
    if not _is_literal(params) and not generalized:
        raise DomainError("multiplier check is defined for a=b=1; pass generalized=True otherwise")
    spec = spec or ExplicitFormSpec()
    target = multiplier_target(p)
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo < 2:
        raise DomainError("multiplier blocks need n >= 2")
    scheme = build_scheme(params, BlockMode.THEOREM, max(hi, 2))
    lo = max(lo, scheme.n_min)
    ns = np.arange(lo, hi + 1)
    bounds = scheme.bounds(lo, hi)
    idx, la = lam.terms(bounds[0], bounds[-1])
    inner = _accel.segmented_log_norm(idx, la, bounds, -spec.log_inner(params, ns), target.r)
    per = inner - spec.log_block_weight(params, ns)

    if math.isinf(target.s):
        running = np.maximum.accumulate(per)
    else:
        with np.errstate(invalid="ignore"):
            running = np.logaddexp.accumulate(target.s * per) / target.s
    agg = outer_log_norm(per, target.s)
    verdict = classify_trend(ns, running, DEFAULT_SLOPE_TOL)
    label = "literal" if _is_literal(params) else "generalized"
    return MultiplierDiagnostic(params, float(p), target,
                                {int(n): float(v) for n, v in zip(ns, per)},
                                agg, verdict, label)


def balanced_multiplier(params, n_range, spec=None):
    """``lam`` with every per-block maximum of the rescaled magnitudes equal to 1.

    For ``a = b = 1`` this is ``exp(-n**2) (1 - 1/n**2)**m`` on block ``n``.
    """
    spec = spec or ExplicitFormSpec()
    lo, hi = int(n_range[0]), int(n_range[1])
    scheme = build_scheme(params, BlockMode.THEOREM, max(hi, 2))
    lo = max(lo, scheme.n_min)
    M = scheme.bounds(lo, hi)
    ns = np.arange(lo, hi + 1)
    w = spec.log_block_weight(params, ns)
    li = spec.log_inner(params, ns)

    def fn(idx):
        idx = np.asarray(idx, dtype=np.int64)
        k = np.searchsorted(M, idx, side="left") - 1
        out = np.full(idx.shape, -np.inf)
        ok = (k >= 0) & (k < len(ns))
        out[ok] = w[k[ok]] + idx[ok] * li[k[ok]]
        return out

    return rule(fn, int(M[-1]) + 1)


def apply_multiplier(lam, seq):
    """Coordinatewise product of magnitudes."""
    bound = min(lam.length_bound, seq.length_bound)
    if lam.kind == "dense" and seq.kind == "dense" and not (lam.stores_logs or seq.stores_logs):
        return dense(lam.magnitudes(bound) * seq.magnitudes(bound))
    sparse_side = [s for s in (lam, seq) if s.kind == "sparse"]
    if sparse_side:
        idx = sparse_side[0].terms(-1, bound - 1)[0]
        for s in sparse_side[1:]:
            idx = np.intersect1d(idx, s.terms(-1, bound - 1)[0])
        return sparse(idx, lam.log_abs(idx) + seq.log_abs(idx), length_bound=bound, is_log=True)
    return rule(lambda i: lam.log_abs(i) + seq.log_abs(i), bound)

