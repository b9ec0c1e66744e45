"""Taylor-coefficient magnitude sequences.

Only ``|b_m|`` is kept: solid hulls do not see phases. Values may be stored
as plain magnitudes or as log-magnitudes; the latter is needed for the
extremal sequences, whose entries grow like ``exp(c n**2)`` and overflow any
float long before the blocks of interest are reached.
"""
import csv
import io
import json
import math

import numpy as np

from .errors import DomainError, ParseError, ValidationError

FORMATS = ("json_array", "csv_complex", "json_log")


def _log(values):
    with np.errstate(divide="ignore"):
        return np.log(values)


class CoefficientSequence:
    """Nonnegative magnitudes indexed from 0, zero at and beyond ``length_bound``.

    Build instances with ``dense``, ``dense_log``, ``sparse``, ``rule`` or
    the generators below rather than calling the constructor directly.
    """

    def __init__(self, kind, length_bound, values=None, indices=None, is_log=False, fn=None):
        self.kind = kind
        self.length_bound = int(length_bound)
        self._values = values
        self._indices = indices
        self._is_log = is_log
        self._fn = fn

    def __repr__(self):
        return f"CoefficientSequence(kind={self.kind!r}, length_bound={self.length_bound})"

    @property
    def stores_logs(self):
        return self._is_log or self.kind == "rule"

    def log_abs(self, idx):
        """Log-magnitudes at the integer indices ``idx`` (``-inf`` for zeros)."""
        idx = np.asarray(idx, dtype=np.int64)
        out = np.full(idx.shape, -np.inf)
        ok = (idx >= 0) & (idx < self.length_bound)
        if not ok.any():
            return out
        if self.kind == "dense":
            v = self._values[idx[ok]]
            out[ok] = v if self._is_log else _log(v)
        elif self.kind == "sparse":
            pos = np.searchsorted(self._indices, idx[ok])
            pos = np.minimum(pos, len(self._indices) - 1) if len(self._indices) else pos
            hit = np.zeros(pos.shape, dtype=bool)
            if len(self._indices):
                hit = self._indices[pos] == idx[ok]
            v = np.full(pos.shape, -np.inf)
            if hit.any():
                raw = self._values[pos[hit]]
                v[hit] = raw if self._is_log else _log(raw)
            out[ok] = v
        else:
            out[ok] = np.asarray(self._fn(idx[ok]), dtype=np.float64)
        return out

    def terms(self, lo, hi):
        """Indices ``lo < m <= hi`` below the length bound with their log-magnitudes.

        Sparse sequences return only their stored entries; other kinds return
        the full index run.
        """
        hi = min(int(hi), self.length_bound - 1)
        lo = max(int(lo), -1)
        if hi <= lo:
            return np.empty(0, dtype=np.int64), np.empty(0)
        if self.kind == "sparse":
            sel = (self._indices > lo) & (self._indices <= hi)
            idx = self._indices[sel]
            v = self._values[sel]
            return idx, (v if self._is_log else _log(v))
        idx = np.arange(lo + 1, hi + 1, dtype=np.int64)
        return idx, self.log_abs(idx)

    def magnitudes(self, n=None):
        """Dense magnitudes for indices ``0..n-1`` (default: the length bound).

        Entries beyond float range come back as ``inf``.
        """
        n = self.length_bound if n is None else int(n)
        if self.kind == "dense" and not self._is_log:
            out = np.zeros(n)
            k = min(n, len(self._values))
            out[:k] = self._values[:k]
            return out
        if self.kind == "sparse" and not self._is_log:
            out = np.zeros(n)
            sel = self._indices < n
            out[self._indices[sel]] = self._values[sel]
            return out
        with np.errstate(over="ignore"):
            return np.exp(self.log_abs(np.arange(n)))

    def support_max(self):
        """Largest index with a nonzero magnitude, or -1 for the zero sequence."""
        if self.kind == "sparse":
            la = self._values if self._is_log else _log(self._values)
            nz = np.flatnonzero(la > -np.inf)
            return int(self._indices[nz[-1]]) if len(nz) else -1
        _, la = self.terms(-1, self.length_bound - 1)
        nz = np.flatnonzero(la > -np.inf)
        return int(nz[-1]) if len(nz) else -1

    def scaled(self, factor):
        """The sequence ``factor * self`` for ``factor >= 0``."""
        if factor < 0:
            raise DomainError("scale factor must be nonnegative")
        shift = -math.inf if factor == 0 else math.log(factor)
        if self.kind == "rule":
            fn = self._fn
            return rule(lambda idx: fn(idx) + shift, self.length_bound)
        if self._is_log:
            vals = self._values + shift
        else:
            vals = self._values * factor
        return CoefficientSequence(self.kind, self.length_bound, vals, self._indices, self._is_log)

    def materialize(self, n=None):
        """Dense log-magnitude copy over ``0..n-1``."""
        n = self.length_bound if n is None else int(n)
        return dense_log(self.log_abs(np.arange(n)))


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def dense(magnitudes):
    v = _frozen(magnitudes)
    if v.ndim != 1:
        raise ValidationError("magnitudes must be one-dimensional")
    if np.any(np.isnan(v)) or np.any(v < 0):
        raise ValidationError("magnitudes must be nonnegative")
    return CoefficientSequence("dense", len(v), v)


def dense_log(log_magnitudes):
    v = _frozen(log_magnitudes)
    if np.any(np.isnan(v)) or np.any(v == np.inf):
        raise ValidationError("log-magnitudes must be finite or -inf")
    return CoefficientSequence("dense", len(v), v, is_log=True)


def sparse(indices, magnitudes, length_bound=None, is_log=False):
    idx = np.array(indices, dtype=np.int64)
    v = _frozen(magnitudes)
    if idx.shape != v.shape:
        raise ValidationError("indices and magnitudes differ in length")
    if len(idx) and (idx[0] < 0 or np.any(np.diff(idx) <= 0)):
        raise ValidationError("sparse indices must be nonnegative and strictly increasing")
    if np.any(np.isnan(v)) or (not is_log and np.any(v < 0)):
        raise ValidationError("magnitudes must be nonnegative")
    idx.setflags(write=False)
    bound = (int(idx[-1]) + 1 if len(idx) else 0) if length_bound is None else length_bound
    return CoefficientSequence("sparse", bound, v, idx, is_log=is_log)


def rule(log_fn, length_bound):
    """Sequence given by a vectorised ``indices -> log-magnitudes`` function."""
    return CoefficientSequence("rule", length_bound, fn=log_fn)


def zeros(length_bound=0):
    return sparse([], [], length_bound=length_bound)


def unit_monomial(m):
    """The coefficient vector of ``z**m``."""
    if m < 0:
        raise DomainError("monomial degree must be nonnegative")
    return sparse([int(m)], [1.0])


def extremal_block_sequence(scheme, n_max=None):
    """Magnitudes making every canonical block term of ``scheme`` equal to 1.

    For ``m`` in block ``n`` the magnitude is
    ``exp(-log v(r_{M_n}) - m log r_{M_n}) / sqrt(M_{n+1} - M_n)``.
    """
    n_max = scheme.n_max if n_max is None else min(int(n_max), scheme.n_max)
    M = scheme.bounds(scheme.n_min, n_max)
    gaps = scheme.gaps[:len(M) - 1]
    log_r = np.log1p(-gaps)
    log_v = -scheme.params.a * gaps ** (-scheme.params.b)
    half_log_size = 0.5 * np.log(np.diff(M).astype(np.float64))

    def fn(idx):
        idx = np.asarray(idx, dtype=np.int64)
        k = np.searchsorted(M, idx, side="left") - 1
        out = np.full(idx.shape, -np.inf)
        ok = (k >= 0) & (k < len(M) - 1)
        kk = k[ok]
        out[ok] = -log_v[kk] - idx[ok] * log_r[kk] - half_log_size[kk]
        return out

    return rule(fn, int(M[-1]) + 1)


def random_sequence(seed, length, envelope):
    """Reproducible magnitudes ``U_m * envelope_m`` with ``U_m`` uniform on (0, 1].

    ``envelope`` is a CoefficientSequence or a callable mapping an index
    array to magnitudes.
    """
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(int(length))
    idx = np.arange(int(length))
    if isinstance(envelope, CoefficientSequence):
        env = envelope.log_abs(idx)
    else:
        env = _log(np.asarray(envelope(idx), dtype=np.float64))
    return dense_log(env + np.log(u))


def _magnitude(entry, where):
    if isinstance(entry, bool):
        raise ValidationError(f"{where}: boolean is not a magnitude")
    if isinstance(entry, (int, float)):
        if math.isnan(entry) or entry < 0:
            raise ValidationError(f"{where}: magnitude must be nonnegative, got {entry!r}")
        return float(entry)
    if isinstance(entry, list) and len(entry) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry):
        return math.hypot(entry[0], entry[1])
    raise ValidationError(f"{where}: expected a nonnegative number or [re, im] pair")


def _read_text(source):
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("utf-8")
    return source


def ingest(source, format="json_array"):
    """Parse coefficients from bytes, text or a readable stream.

    ``json_array``: flat array of nonnegative reals or ``[re, im]`` pairs.
    ``csv_complex``: rows ``index,re,im``, optional header, indices strictly
    increasing; missing indices are zeros.
    ``json_log``: flat array of log-magnitudes, ``"-inf"`` for zeros.
    """
    text = _read_text(source)
    if format == "json_array":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from None
        if not isinstance(data, list):
            raise ParseError("expected a JSON array")
        return dense([_magnitude(x, f"entry {i}") for i, x in enumerate(data)])
    if format == "json_log":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from None
        if not isinstance(data, list):
            raise ParseError("expected a JSON array")
        try:
            vals = [float(x) for x in data]
        except (TypeError, ValueError):
            raise ValidationError("log-magnitudes must be numbers or '-inf'") from None
        return dense_log(vals)
    if format == "csv_complex":
        return _ingest_csv(text)
    raise DomainError(f"unknown format {format!r}; expected one of {FORMATS}")


def _ingest_csv(text):
    idx, mags = [], []
    reader = csv.reader(io.StringIO(text, newline=""))
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields index,re,im, got {len(row)}", line=lineno)
        try:
            i = int(row[0])
            re_, im_ = float(row[1]), float(row[2])
        except ValueError:
            if lineno == 1 and not idx:
                continue  # header
            raise ParseError(f"non-numeric field in {row!r}", line=lineno) from None
        if i < 0:
            raise ValidationError(f"line {lineno}: negative index {i}")
        if idx and i <= idx[-1]:
            raise ValidationError(f"line {lineno}: index {i} not strictly increasing")
        if math.isnan(re_) or math.isnan(im_):
            raise ValidationError(f"line {lineno}: NaN coefficient")
        idx.append(i)
        mags.append(math.hypot(re_, im_))
    return sparse(idx, mags)


def serialize(seq, format="json_array", n=None):
    """Text form of ``seq`` readable by ``ingest``."""
    n = seq.length_bound if n is None else int(n)
    if format == "json_array":
        return json.dumps([float(x) for x in seq.magnitudes(n)])
    if format == "json_log":
        return json.dumps(["-inf" if x == -np.inf else float(x)
                           for x in seq.log_abs(np.arange(n))])
    if format == "csv_complex":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "re", "im"])
        if seq.kind == "sparse" and not seq.stores_logs:
            pairs = zip(seq._indices.tolist(), seq._values.tolist())
        else:
            pairs = enumerate(seq.magnitudes(n).tolist())
        for i, v in pairs:
            if i < n and v != 0.0:
                w.writerow([i, repr(v), "0"])
        return buf.getvalue()
    raise DomainError(f"unknown format {format!r}; expected one of {FORMATS}")
