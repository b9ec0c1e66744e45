import math

import numpy as np
import pytest

from solidhull import (BlockMode, DomainError, RangeError, block_index, build_scheme,
                       check_frame_condition, frame_quantities, make_params)
from solidhull.blocks import log_frame_quantities, log_frame_real


def test_canonical_b1_boundary(p11):
    s = build_scheme(p11, "canonical", 10)
    assert s.boundary(4) == 16
    assert s.real_boundaries[4 - s.n_min] == 16.0


def test_theorem_b1_boundary(p11):
    s = build_scheme(p11, BlockMode.THEOREM, 10)
    assert s.n_min == 1
    assert s.boundary(3) == 81


def test_canonical_b2_boundary(p12):
    assert build_scheme(p12, "canonical", 10).boundary(5) == 250


def test_block_index(p11):
    s = build_scheme(p11, "theorem", 10)
    assert block_index(s, 17) == 2
    assert block_index(s, 16) == 1
    with pytest.raises(RangeError):
        block_index(s, 1)


@pytest.mark.parametrize("ab", [(1, 1), (1, 2), (2, 0.5), (0.5, 1.5), (0.1, 0.3)])
@pytest.mark.parametrize("mode", ["canonical", "theorem"])
def test_blocks_nonempty(ab, mode):
    s = build_scheme(make_params(*ab), mode, 60)
    assert np.all(np.diff(s.boundaries) >= 1)
    assert s.boundaries[0] >= 1
    assert len(s.boundaries) == s.n_max - s.n_min + 2


def test_bad_n_max(p11):
    with pytest.raises(DomainError):
        build_scheme(p11, "canonical", 1)


def test_no_block_in_range():
    # S = 1/432 for (1, 1/2): floor(S n**6) stays 0 until n = 3
    with pytest.raises(DomainError):
        build_scheme(make_params(1, 0.5), "canonical", 2)


def test_overflow_guard(p11):
    with pytest.raises(DomainError):
        build_scheme(p11, "theorem", 10 ** 5)


def test_scheme_immutable(p11):
    s = build_scheme(p11, "canonical", 10)
    with pytest.raises(ValueError):
        s.boundaries[0] = 3


def test_range_errors(p11):
    s = build_scheme(p11, "canonical", 10)
    with pytest.raises(RangeError):
        s.block(11)
    with pytest.raises(RangeError):
        check_frame_condition(s, (1, 11))
    with pytest.raises(DomainError):
        check_frame_condition(s, (5, 4))


@pytest.mark.parametrize("ab", [(1, 1), (1, 2), (2, 0.5), (0.5, 1.5)])
@pytest.mark.parametrize("mode", ["canonical", "theorem"])
def test_frame_at_least_one_and_identity(ab, mode):
    s = build_scheme(make_params(*ab), mode, 120)
    ns = np.arange(s.n_min, s.n_max + 1)
    la, lb = log_frame_quantities(s, ns)
    assert np.all(la >= 0) and np.all(lb >= 0)
    M = s.boundaries.astype(float)
    i = ns - s.n_min
    dlr = np.log1p(-s.gaps[i + 1]) - np.log1p(-s.gaps[i])
    np.testing.assert_allclose(la + lb, (M[i + 1] - M[i]) * dlr, rtol=1e-8, atol=1e-10)


def test_frame_quantities_scalar(p11):
    s = build_scheme(p11, "canonical", 30)
    A, B = frame_quantities(s, 20)
    assert A > 2 and B > 2


def test_frame_condition_b1(p11):
    rep = check_frame_condition(build_scheme(p11, "canonical", 200), (20, 200))
    assert rep.min_A > 2 and rep.min_B > 2
    assert rep.holds and rep.last_violation is None


def test_frame_single_point(p11):
    rep = check_frame_condition(build_scheme(p11, "canonical", 30), (25, 25))
    assert rep.n_range == (25, 25)
    assert rep.min_A == rep.max_A
    d = rep.to_dict()
    assert d["n"] == [25]


def test_theorem_b2_limit(p12):
    # for b = 2 both log A and log B tend to (3/2) G S**(2/3); here S = 1
    G = 2 ** (1 / 3)
    rep = check_frame_condition(build_scheme(p12, "theorem", 200), (20, 200))
    assert rep.min_A > 2 and rep.min_B > 2
    assert rep.limit_estimate_logA == pytest.approx(1.5 * G, abs=0.05)
    assert rep.limit_estimate_logB == pytest.approx(1.5 * G, abs=0.05)
    la, lb = log_frame_real(p12, 2e4 ** 3, (2e4 + 1) ** 3)
    assert la == pytest.approx(1.5 * G, abs=1e-4) and lb == pytest.approx(1.5 * G, abs=1e-3)


def test_limits_b1_real_boundaries(p11):
    # mpmath at n = 500, real boundaries n**4 / 16
    la, lb = log_frame_real(p11, 500 ** 4 / 16, 501 ** 4 / 16)
    assert la == pytest.approx(0.99800498799617, rel=1e-9)
    assert lb == pytest.approx(1.00200099996802, rel=1e-9)


def test_limits_b2_real_boundaries(p12):
    # the measured limit is 3 for both ratios; see the notes on the b = 2 constant
    la, lb = log_frame_real(p12, 2 * 500.0 ** 3, 2 * 501.0 ** 3)
    assert la == pytest.approx(2.99800266252503, rel=1e-9)
    assert lb == pytest.approx(3.00600133185146, rel=1e-9)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("b", [0.5, 1.0, 1.5])
def test_log_a_residual_decays(a, b):
    p = make_params(a, b)
    ns = np.geomspace(50, 500, 12)
    from solidhull.weights import derived_constants
    S, al = derived_constants(p).S, derived_constants(p).alpha
    la, lb = log_frame_real(p, S * ns ** al, S * (ns + 1) ** al)
    from solidhull.asymptotics import order_fit
    order, _ = order_fit(ns, np.abs(la - 1))
    # residual decays at least as fast as the dominant order max(-1, 1 - 2/b)
    assert order <= max(-1.0, 1 - 2 / b) + 0.2
    assert abs(la[-1] - 1) < 0.05 and abs(lb[-1] - 1) < 0.05


@pytest.mark.parametrize("n", [10, 100])
def test_integerisation_small(n):
    p = make_params(1, 1)
    s = build_scheme(p, "canonical", n + 1)
    la_i, lb_i = log_frame_quantities(s, [n])
    la_r, lb_r = log_frame_real(p, n ** 4 / 16, (n + 1) ** 4 / 16)
    assert abs(la_i[0] - la_r) < 5.0 / n
    assert abs(lb_i[0] - lb_r) < 5.0 / n
