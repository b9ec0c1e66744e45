"""Command-line front end: ``solidhull <command> [options]``.

Every command prints JSON (default) or CSV to stdout. Exit codes are 0 on
success, 1 when ``verify`` finds a fitted order outside its band, and 2 on
usage or validation errors.
"""
import argparse
import csv
import json
import logging
import math
import os
import sys

import numpy as np

from . import _accel
from . import asymptotics as lab
from .blocks import BlockMode, build_scheme, check_frame_condition
from .critical import DEFAULT_TOL, asymptotic_gaps, critical_gaps
from .errors import DomainError, ParseError, RangeError, SolverError, ValidationError
from .hull import (DEFAULT_SLOPE_TOL, ExplicitFormSpec, _profile, explicit_block_norms,
                   hull_norm_profile, membership_diagnostic)
from .multipliers import balanced_multiplier, multiplier_check
from .sequences import extremal_block_sequence, ingest, random_sequence, serialize
from .weights import derived_constants, make_params

logger = logging.getLogger("solidhull")

SIG_DIGITS = 12


def _num(x):
    if isinstance(x, (bool, np.bool_)) or x is None:
        return None if x is None else bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return float(f"{x:.{SIG_DIGITS}g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (int, float, bool, np.integer, np.floating, np.bool_)) or obj is None:
        return _num(obj)
    return obj


def _cell(x):
    v = _num(x) if not isinstance(x, str) else x
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    return str(v)


class Output:
    def __init__(self, fmt, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, record, rows):
        """Print ``record`` as JSON or ``rows`` (header first) as CSV."""
        if self.fmt == "json":
            json.dump(_clean(record), self.stream, indent=2, allow_nan=False)
            self.stream.write("\n")
        else:
            w = csv.writer(self.stream, lineterminator="\r\n")
            for row in rows:
                w.writerow([_cell(x) for x in row])


def _params(args):
    return make_params(args.a, args.b)


def _scheme(args, params=None, mode=None):
    return build_scheme(params or _params(args), mode or args.mode, args.n_max, args.tol)


def _load(path, fmt):
    if path == "-":
        return ingest(sys.stdin.buffer.read(), fmt)
    with open(path, "rb") as fh:
        return ingest(fh.read(), fmt)


def _parse_grid(text, integer=False):
    """``"lo:hi:count"`` geometric grid, ``"lo:hi"`` integer range, or comma list."""
    if text is None:
        return None
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) == 3:
            grid = np.geomspace(parts[0], parts[1], int(parts[2]))
            return np.unique(np.round(grid).astype(np.int64)) if integer else grid
        if len(parts) == 2:
            return np.arange(int(parts[0]), int(parts[1]) + 1)
        raise ValidationError(f"bad grid {text!r}")
    vals = [float(p) for p in text.split(",") if p.strip()]
    return np.array(vals, dtype=np.int64 if integer else np.float64)


def cmd_constants(args, out):
    c = derived_constants(_params(args)).as_dict()
    out.emit(c, [["name", "value"]] + [[k, v] for k, v in c.items()])


def cmd_rm(args, out):
    params = _params(args)
    m = _parse_grid(args.m) if args.m else np.array([1.0])
    if np.any(m <= 0):
        raise DomainError("m must be positive")
    gaps, res = critical_gaps(params, m, args.tol)
    gaps, res = np.atleast_1d(gaps), np.atleast_1d(res)
    asym = np.full_like(gaps, np.nan)
    ok = m >= max(1.0, params.a * params.b)
    if ok.any():
        asym[ok] = asymptotic_gaps(params, m[ok], 2)
    rows = []
    for mi, g, s, r in zip(m, gaps, asym, res):
        rows.append({"m": mi, "r": 1.0 - g, "gap": g,
                     "asymptotic_gap": None if math.isnan(s) else s,
                     "error": None if math.isnan(s) else g - s, "residual": r})
    cols = ["m", "r", "gap", "asymptotic_gap", "error", "residual"]
    out.emit({"params": {"a": params.a, "b": params.b}, "rows": rows},
             [cols] + [[r[k] for k in cols] for r in rows])


def cmd_blocks(args, out):
    s = _scheme(args)
    ns = np.arange(s.n_min, s.n_max + 2)
    rec = {"params": {"a": s.params.a, "b": s.params.b}, "mode": s.mode.value,
           "blocks": [{"n": n, "M": M, "real": x, "gap": g}
                      for n, M, x, g in zip(ns, s.boundaries, s.real_boundaries, s.gaps)]}
    out.emit(rec, [["n", "M", "real", "gap"]]
             + [[b["n"], b["M"], b["real"], b["gap"]] for b in rec["blocks"]])


def cmd_framecheck(args, out):
    rep = check_frame_condition(_scheme(args), warmup=args.warmup)
    rows = [["n", "A", "B"]] + [list(r) for r in zip(rep.n_values, rep.A_values, rep.B_values)]
    out.emit(rep.to_dict(), rows)


def _explicit_spec(args):
    return ExplicitFormSpec(args.variant, args.inner)


def _profile_rows(d):
    return [["n", "log_value"]] + [[b["n"], b["log_value"]] for b in d["blocks"]]


def cmd_hullnorm(args, out):
    seq = _load(args.input, args.input_format)
    params = _params(args)
    if args.explicit:
        ns, vals = explicit_block_norms(params, _explicit_spec(args), seq, (2, args.n_max))
        d = _profile(params, BlockMode.THEOREM.value, ns, vals).to_dict()
        d["quad_coeff_variant"] = args.variant
        d["inner_factor_variant"] = args.inner
    else:
        d = hull_norm_profile(_scheme(args, params), seq).to_dict()
    out.emit(d, _profile_rows(d))


def cmd_membership(args, out):
    seq = _load(args.input, args.input_format)
    d = membership_diagnostic(_scheme(args), seq, slope_tol=args.slope_tol).to_dict()
    out.emit(d, _profile_rows(d))


def cmd_multiplier(args, out):
    params = _params(args)
    spec = _explicit_spec(args)
    n_range = (2, args.n_max)
    if args.input:
        lam = _load(args.input, args.input_format)
    else:
        lam = balanced_multiplier(params, n_range, spec)
    diag = multiplier_check(params, lam, args.p, n_range,
                            generalized=args.generalized, spec=spec)
    d = diag.to_dict()
    out.emit(d, _profile_rows(d))


def cmd_generate(args, out):
    s = _scheme(args)
    ext = extremal_block_sequence(s)
    if args.kind == "extremal":
        seq = ext
    else:
        seq = random_sequence(args.seed, ext.length_bound, ext)
    out.stream.write(serialize(seq, args.output_format))
    out.stream.write("\n")


def cmd_verify(args, out):
    params = _params(args)
    which = ["rm", "weight-ratio", "radius-ratio", "proof-bounds"] if args.which == "all" \
        else [args.which]
    m_grid = _parse_grid(args.m_grid)
    n_grid = _parse_grid(args.n_grid, integer=True)
    checks, bands, ok = [], None, True
    for w in which:
        if w == "rm":
            checks.append(lab.verify_rm_expansion(params, m_grid))
        elif w == "weight-ratio":
            checks.append(lab.verify_weight_ratio(params, n_grid))
        elif w == "radius-ratio":
            checks.append(lab.verify_radius_ratio(params, n_grid, "next"))
            checks.append(lab.verify_radius_ratio(params, n_grid, "current"))
        else:
            bands = lab.verify_proof_bounds(params, n_grid if args.which == "proof-bounds" else None)
    for c in checks:
        if c.within_band is False:
            ok = False
            logger.info("%s: fitted order %.4g outside %.4g +- %.3g",
                        c.label, c.fitted_order, c.target_order, c.band)
    rec = {"params": {"a": params.a, "b": params.b},
           "checks": [c.to_dict() for c in checks], "passed": ok}
    rows = [["check", "x", "exact", "predicted", "residual"]]
    for c in checks:
        rows += [[c.label] + r for r in list(c.csv_rows())[1:]]
    if bands is not None:
        bd = bands.to_dict()
        rec["proof_bounds"] = bd
        bounded = any(v["bounded"] for v in bd["weight"].values()) and \
            any(v["bounded"] for v in bd["radius"].values())
        rec["passed"] = ok = ok and bounded
        rows = rows if checks else [["family", "variant", "min", "max", "spread", "bounded"]]
        if not checks:
            for fam in ("weight", "radius"):
                for k, v in bd[fam].items():
                    rows.append([fam, k, v["min"], v["max"], v["spread"], v["bounded"]])
    out.emit(rec, rows)
    return 0 if ok else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, default=1.0)
    common.add_argument("--b", type=float, default=1.0)
    common.add_argument("--mode", choices=[m.value for m in BlockMode], default="canonical")
    common.add_argument("--n-max", type=int, default=50)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--threads", type=int, default=None)

    seq_in = argparse.ArgumentParser(add_help=False)
    seq_in.add_argument("--input", help="coefficient file, '-' for stdin")
    seq_in.add_argument("--input-format", default="json_array",
                        choices=["json_array", "csv_complex", "json_log"])

    variants = argparse.ArgumentParser(add_help=False)
    variants.add_argument("--variant", choices=["stated", "derived"], default="stated")
    variants.add_argument("--inner", choices=["general", "specialized"], default="general")

    p = argparse.ArgumentParser(prog="solidhull", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("constants", parents=[common], help="alpha, beta, G, S")
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("rm", parents=[common], help="critical radii")
    sp.add_argument("--m", help="value, comma list, lo:hi or lo:hi:count")
    sp.set_defaults(func=cmd_rm)

    sp = sub.add_parser("blocks", parents=[common], help="block boundaries")
    sp.set_defaults(func=cmd_blocks)

    sp = sub.add_parser("framecheck", parents=[common], help="frame ratios A(n), B(n)")
    sp.add_argument("--warmup", type=int, default=10)
    sp.set_defaults(func=cmd_framecheck)

    sp = sub.add_parser("hullnorm", parents=[common, seq_in, variants], help="block norms")
    sp.add_argument("--explicit", action="store_true",
                    help="explicit block weights on theorem-mode blocks")
    sp.set_defaults(func=cmd_hullnorm)

    sp = sub.add_parser("membership", parents=[common, seq_in], help="membership verdict")
    sp.add_argument("--slope-tol", type=float, default=DEFAULT_SLOPE_TOL)
    sp.set_defaults(func=cmd_membership)

    sp = sub.add_parser("multiplier", parents=[common, seq_in, variants],
                        help="multiplier diagnostic into l^p")
    sp.add_argument("--p", type=float, default=math.inf)
    sp.add_argument("--generalized", action="store_true")
    sp.set_defaults(func=cmd_multiplier)

    sp = sub.add_parser("verify", parents=[common], help="expansion order checks")
    sp.add_argument("--which", default="all",
                    choices=["rm", "weight-ratio", "radius-ratio", "proof-bounds", "all"])
    sp.add_argument("--m-grid", help="m grid, e.g. 100:1e6:25")
    sp.add_argument("--n-grid", help="n grid, e.g. 20:400:25")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("generate", parents=[common], help="write a test sequence")
    sp.add_argument("--kind", choices=["extremal", "random"], default="extremal")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output-format", default="json_log",
                    choices=["json_array", "csv_complex", "json_log"])
    sp.set_defaults(func=cmd_generate)
    return p


def _setup_logging():
    level = os.environ.get("SOLIDHULL_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "input", "x") is None and args.command in ("hullnorm", "membership"):
        parser.error(f"{args.command} requires --input")
    _accel.set_threads(args.threads)
    logger.debug("backend=%s command=%s", _accel.BACKEND, args.command)
    try:
        return args.func(args, Output(args.format)) or 0
    except (DomainError, ValidationError, ParseError, RangeError, SolverError) as exc:
        print(f"solidhull: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"solidhull: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
