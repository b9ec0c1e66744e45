import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from solidhull import (BlockSpaceSpec, DomainError, RangeError, apply_multiplier,
                       balanced_multiplier, block_pq_norm, build_scheme, make_params,
                       multiplier_check, multiplier_target)
from solidhull.multipliers import outer_log_norm
from solidhull.sequences import dense, extremal_block_sequence, unit_monomial, zeros

INF = math.inf


def test_targets():
    assert (multiplier_target(1).r, multiplier_target(1).s, multiplier_target(1).case) == (2.0, 1.0, "a")
    assert (multiplier_target(1.5).r, multiplier_target(1.5).s) == (6.0, 1.5)
    assert (multiplier_target(2).r, multiplier_target(2).s, multiplier_target(2).case) == (INF, 2.0, "b")
    assert (multiplier_target(INF).r, multiplier_target(INF).s, multiplier_target(INF).case) == (INF, INF, "c")
    with pytest.raises(DomainError):
        multiplier_target(0.5)


def test_block_space_spec_validation():
    with pytest.raises(DomainError):
        BlockSpaceSpec([0, 0, 1], 2, 2)
    with pytest.raises(DomainError):
        BlockSpaceSpec([0, 2], 0.5, 2)


def test_sqrt2_example():
    spec = BlockSpaceSpec([0, 2, 4], 2, INF)
    seq = dense([0, 1, 1, 1, 1])
    assert math.exp(block_pq_norm(spec, seq)) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_zero_and_range():
    spec = BlockSpaceSpec([-1, 3, 9], 2, 2)
    assert block_pq_norm(spec, zeros(5)) == -INF
    with pytest.raises(RangeError):
        block_pq_norm(spec, unit_monomial(12))
    with pytest.raises(RangeError):
        block_pq_norm(BlockSpaceSpec([0, 3], 2, 2), unit_monomial(0))


def plain_log_norm(x, p):
    x = np.abs(x)
    if math.isinf(p):
        return math.log(x.max())
    return math.log((x ** p).sum()) / p


@given(st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=60),
       st.sampled_from([1.0, 2.0, 3.0, INF]), st.randoms(use_true_random=False))
def test_lp_equality(vals, p, rnd):
    n = len(vals)
    cuts = sorted(rnd.sample(range(n), rnd.randint(0, n - 1)))
    J = [-1] + cuts + [n - 1] if (n - 1) not in cuts else [-1] + cuts
    spec = BlockSpaceSpec(J, p, p)
    got = block_pq_norm(spec, dense(vals))
    assert abs(math.exp(got - plain_log_norm(np.array(vals), p)) - 1) <= 1e-12


@given(st.lists(st.floats(0, 1e3), min_size=12, max_size=12))
def test_monotone_in_p(vals):
    seq = dense(vals)
    ps = [1.0, 1.5, 2.0, 3.0, 10.0, INF]
    norms = [block_pq_norm(BlockSpaceSpec([-1, 3, 7, 11], p, 2.0), seq) for p in ps]
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_outer_norm():
    assert outer_log_norm([-INF, 0.0], 2) == 0.0
    assert outer_log_norm([], 2) == -INF


def test_balanced_multiplier_pinf(p11):
    lam = balanced_multiplier(p11, (2, 20))
    d = multiplier_check(p11, lam, INF, (2, 20))
    assert abs(d.aggregate - 1) < 1e-9
    assert all(abs(v) < 1e-9 for v in d.per_block_log.values())
    assert d.verdict == "bounded"
    out = d.to_dict()
    assert out["case"] == "c" and out["label"] == "literal"


def test_balanced_closed_form(p11):
    # e^{-n^2} (1 - 1/n^2)^m on block n
    lam = balanced_multiplier(p11, (2, 6))
    m = 100  # block 3: (81, 256]
    assert lam.log_abs([m])[0] == pytest.approx(-9 + m * math.log(1 - 1 / 9), rel=1e-14)


def test_monomial_and_zero(p11):
    m = 100
    d = multiplier_check(p11, unit_monomial(m), INF, (2, 6))
    assert d.aggregate_log == pytest.approx(9 - m * math.log(1 - 1 / 9), rel=1e-14)
    z = multiplier_check(p11, zeros(), 2.0, (2, 6))
    assert z.aggregate_log == -INF and z.aggregate == 0.0


def test_generalized_gate(p12):
    with pytest.raises(DomainError):
        multiplier_check(p12, zeros(), 2.0, (2, 6))
    d = multiplier_check(p12, balanced_multiplier(p12, (2, 10)), INF, (2, 10), generalized=True)
    assert d.label == "generalized" and abs(d.aggregate_log) < 1e-9


def test_apply_multiplier(p11):
    seq = dense([1.0, 2.0, 3.0])
    ones = dense([1.0, 1.0, 1.0])
    np.testing.assert_array_equal(apply_multiplier(ones, seq).magnitudes(), [1, 2, 3])
    assert apply_multiplier(zeros(3), seq).support_max() == -1
    s = build_scheme(p11, "theorem", 12)
    prod = apply_multiplier(balanced_multiplier(p11, (2, 12)), extremal_block_sequence(s))
    assert prod.support_max() > 0
