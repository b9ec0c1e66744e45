import io
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from solidhull import ParseError, ValidationError, build_scheme, make_params
from solidhull.errors import DomainError
from solidhull.hull import canonical_block_norms
from solidhull.sequences import (dense, dense_log, extremal_block_sequence, ingest,
                                 random_sequence, rule, serialize, sparse, unit_monomial, zeros)


def test_json_dense():
    s = ingest(b"[0, 1, 0.5]")
    np.testing.assert_array_equal(s.magnitudes(), [0, 1, 0.5])
    assert s.kind == "dense"


def test_json_complex_pairs():
    s = ingest("[[3, 4], 1]")
    np.testing.assert_array_equal(s.magnitudes(), [5, 1])


def test_csv_modulus():
    s = ingest(b"3,0,-4\n", "csv_complex")
    assert s.kind == "sparse"
    np.testing.assert_array_equal(s.magnitudes(), [0, 0, 0, 4])


def test_csv_header_crlf_and_stream():
    s = ingest(io.BytesIO(b"index,re,im\r\n0,1,0\r\n2,0,2\r\n"), "csv_complex")
    np.testing.assert_array_equal(s.magnitudes(), [1, 0, 2])


@pytest.mark.parametrize("src,fmt,err", [
    (b"[-1]", "json_array", ValidationError),
    (b"[1, \"x\"]", "json_array", ValidationError),
    (b"{\"a\": 1}", "json_array", ParseError),
    (b"[1,\n2,\n", "json_array", ParseError),
    (b"0,1,0\n0,1,0\n", "csv_complex", ValidationError),
    (b"-1,1,0\n", "csv_complex", ValidationError),
    (b"0,1\n", "csv_complex", ParseError),
    (b"0,1,0\n1,x,0\n", "csv_complex", ParseError),
])
def test_ingest_errors(src, fmt, err):
    with pytest.raises(err):
        ingest(src, fmt)


def test_parse_error_line():
    with pytest.raises(ParseError, match="line 2"):
        ingest(b"0,1,0\n1,x,0\n", "csv_complex")


def test_unknown_format():
    with pytest.raises(DomainError):
        ingest(b"[]", "xml")


def test_unit_monomial():
    assert unit_monomial(0).terms(-1, 10)[0].tolist() == [0]
    s = unit_monomial(17)
    idx, la = s.terms(-1, 100)
    assert idx.tolist() == [17] and la.tolist() == [0.0]
    with pytest.raises(DomainError):
        unit_monomial(-1)


def test_sparse_validation():
    with pytest.raises(ValidationError):
        sparse([3, 2], [1, 1])
    with pytest.raises(ValidationError):
        sparse([1], [-1.0])
    with pytest.raises(ValidationError):
        dense([1, -2])


@given(st.lists(st.floats(0, 1e300, allow_nan=False), max_size=40))
def test_json_roundtrip(vals):
    s = ingest(serialize(dense(vals)))
    np.testing.assert_array_equal(s.magnitudes(), vals)


@given(st.lists(st.floats(0, 1e10, allow_nan=False), max_size=40))
def test_csv_and_log_roundtrip(vals):
    s = dense(vals)
    np.testing.assert_array_equal(ingest(serialize(s, "csv_complex"), "csv_complex").magnitudes(len(vals)), vals)
    back = ingest(serialize(s, "json_log"), "json_log")
    np.testing.assert_allclose(back.magnitudes(), vals, rtol=1e-13)


def test_rule_matches_materialized():
    r = rule(lambda i: -0.5 * i.astype(float), 50)
    d = r.materialize()
    idx = np.arange(60)
    np.testing.assert_array_equal(r.log_abs(idx), d.log_abs(idx))
    assert r.support_max() == 49


def test_scaled_and_zero():
    s = dense([1.0, 2.0])
    np.testing.assert_array_equal(s.scaled(3).magnitudes(), [3, 6])
    assert s.scaled(0).support_max() == -1
    assert zeros(5).support_max() == -1
    with pytest.raises(DomainError):
        s.scaled(-1)


def test_extremal_blocks_zero(p11):
    s = build_scheme(p11, "canonical", 40)
    ns, vals = canonical_block_norms(s, extremal_block_sequence(s))
    assert np.all(np.abs(vals) < 1e-9)
    _, v2 = canonical_block_norms(s, extremal_block_sequence(s).scaled(2))
    np.testing.assert_allclose(v2, np.log(2), atol=1e-9)


def test_extremal_truncated(p12):
    s = build_scheme(p12, "canonical", 30)
    ext = extremal_block_sequence(s, n_max=10)
    ns, vals = canonical_block_norms(s, ext)
    assert np.all(np.isneginf(vals[ns > 10]))
    assert ns[np.argmax(vals)] <= 10


def test_random_sequence(p11):
    s = build_scheme(p11, "canonical", 20)
    ext = extremal_block_sequence(s)
    a = random_sequence(7, ext.length_bound, ext)
    b = random_sequence(7, ext.length_bound, ext)
    idx = np.arange(ext.length_bound)
    np.testing.assert_array_equal(a.log_abs(idx), b.log_abs(idx))
    assert np.all(a.log_abs(idx) <= ext.log_abs(idx))
    z = random_sequence(1, 10, lambda i: np.zeros(len(i)))
    assert z.support_max() == -1


def test_dense_log_rejects_inf():
    with pytest.raises(ValidationError):
        dense_log([np.inf])
