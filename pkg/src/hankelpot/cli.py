"""Command-line front end: kernel tables, envelope verification, L^p - L^q scans.

Exit codes: 0 success, 1 a verification failed, 2 usage or parameter error.
Output is CSV (17 significant digits) or JSON mirroring the CSV columns;
infinities are written as the string ``"inf"``.  Results do not depend on
the thread count, so identical configurations produce identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import functions as F
from . import lplq
from .envelopes import EnvelopeSpec, GridSpec, Region, envelope_values, ratio_verify
from .heat import HeatPoint, heat_asymptotic_envelope, heat_kernel_values
from .potentials import kernel_values
from .settings import Kind, PotentialParams, Setting

#: Environment variable holding the default worker thread count.
THREADS_ENV = "HANKELPOT_THREADS"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    """Invalid parameters; reported with exit code 2."""


# ---------------------------------------------------------------------------
# configuration and formatting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Options shared by all subcommands."""

    command: str
    setting: Setting
    alpha: float
    sigma: float
    kind: Kind
    grid: GridSpec
    tol: float
    output_format: str
    output_path: str | None
    threads: int

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.output_format not in {"csv", "json"}:
            raise UsageError("--format must be csv or json")


def parse_grid(text: str) -> GridSpec:
    """``"lo:hi:count"`` into a :class:`GridSpec`."""
    try:
        lo, hi, count = text.split(":")
        return GridSpec(float(lo), float(hi), int(count))
    except ValueError as exc:
        raise UsageError(f"invalid grid {text!r}: expected lo:hi:count with 0 < lo < hi and count >= 2 ({exc})") from None


def fmt(value) -> str | bool | None:
    """Scalar as written to CSV/JSON: 17 significant digits, ``inf``, ``nan``."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if value is None:
        return None
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(value)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating, Fraction)):
        v = float(obj)
        if math.isfinite(v):
            return v
        return fmt(v)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return obj


def render_table(columns: Sequence[str], rows: Sequence[Sequence], output_format: str) -> str:
    """CSV with a header line, or a JSON array of objects with the same columns and strings."""
    cells = [[fmt(v) for v in row] for row in rows]
    if output_format == "json":
        recs = [dict(zip(columns, row)) for row in cells]
        return json.dumps(recs, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in cells:
        w.writerow(["true" if v is True else "false" if v is False else v for v in row])
    return buf.getvalue()


def render_records(records: Sequence[dict], output_format: str) -> str:
    """JSON array of report objects, or CSV over the union of their scalar keys."""
    recs = [_jsonable(r) for r in records]
    if output_format == "json":
        return json.dumps(recs, indent=2, sort_keys=True) + "\n"
    keys: list[str] = []
    for r in recs:
        for k in sorted(r):
            if k not in keys:
                keys.append(k)
    rows = []
    for r in recs:
        row = []
        for k in keys:
            v = r.get(k)
            row.append(json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
        rows.append(row)
    return render_table(keys, rows, "csv")


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _map(fn, items, threads: int) -> list:
    """Order-preserving map, in parallel when ``threads > 1``."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------


def cmd_kernel(cfg: RunConfig, t: float | None, region: str, require_finite: bool,
               heat: bool = False) -> tuple[str, int]:
    """Kernel values on a log grid with their envelope shape and ratio.

    Columns ``x, y, kernel, envelope_shape, exp_arg, ratio`` (plus ``sign``
    in the Dunkl setting, where ``y`` also runs over negative values).
    ``ratio`` is ``kernel / envelope_shape``; where ``exp_arg > 0`` the
    estimate carries the additional factor ``exp(-c * exp_arg)``.
    """
    g = cfg.grid.axis()
    ys = np.concatenate([g, -g]) if cfg.setting is Setting.DUNKL else g
    X, Y = np.meshgrid(g, ys, indexing="ij")
    x, y = X.ravel(), Y.ravel()
    chunks = [(x[i:i + 512], y[i:i + 512]) for i in range(0, x.size, 512)]

    if heat:
        if t is None or not t > 0:
            raise UsageError("--kind heat needs --t > 0")
        if cfg.setting is Setting.NONMODIFIED or (cfg.setting is Setting.DUNKL and cfg.alpha <= -0.5):
            raise UsageError("the heat kernel comparison function needs the modified setting, "
                             "or the Dunkl setting with alpha > -1/2")

        def work(ch):
            kv = heat_kernel_values(cfg.setting, cfg.alpha, ch[0], ch[1], t)
            env = np.array([heat_asymptotic_envelope(cfg.setting, cfg.alpha, HeatPoint(a, b, t)) for a, b in zip(*ch)])
            return kv, env, np.zeros_like(kv)
    else:
        params = PotentialParams(cfg.alpha, cfg.sigma, cfg.kind)
        if cfg.kind is Kind.RIESZ and cfg.setting is Setting.DUNKL and cfg.alpha < -0.5:
            raise UsageError(
                f"the two-sided estimate of the Dunkl Riesz kernel requires alpha >= -1/2 (got alpha={cfg.alpha:g})")
        if cfg.kind is Kind.RIESZ and not params.riesz_finite:
            if require_finite:
                raise UsageError(f"the Riesz kernel is finite only for sigma < alpha + 1 "
                                 f"(got sigma={cfg.sigma:g}, alpha={cfg.alpha:g})")
            spec = None
        else:
            try:
                spec = EnvelopeSpec(cfg.setting, cfg.kind, cfg.alpha, cfg.sigma, Region.parse(region))
            except ValueError as exc:
                raise UsageError(str(exc)) from None

        def work(ch):
            kv = kernel_values(cfg.setting, params, ch[0], ch[1], tol=cfg.tol)[0]
            if spec is None:
                nan = np.full(kv.shape, math.nan)
                return kv, nan, nan
            shape, arg = envelope_values(spec, ch[0], ch[1], check_region=False)
            return kv, shape, arg

    parts = _map(work, chunks, cfg.threads)
    kv = np.concatenate([p[0] for p in parts])
    shape = np.concatenate([p[1] for p in parts])
    arg = np.concatenate([p[2] for p in parts])
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = kv / shape
    columns = ["x", "y", "kernel", "envelope_shape", "exp_arg", "ratio"]
    dunkl = cfg.setting is Setting.DUNKL
    if dunkl:
        columns.append("sign")
    rows = []
    for i in range(x.size):
        row = [x[i], y[i], kv[i], shape[i], arg[i], ratio[i]]
        if dunkl:
            row.append(int(np.sign(kv[i])) if np.isfinite(kv[i]) else 1)
        rows.append(row)
    return render_table(columns, rows, cfg.output_format), EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

#: Estimate families addressable by ``verify --theorem``.
THEOREMS = {
    "riesz": "two-sided estimate of the Riesz kernel (modified or non-modified setting)",
    "bessel": "two-sided estimates of the Bessel kernel, local and global regions (modified or non-modified)",
    "riesz-dunkl": "two-sided estimate of the Dunkl Riesz kernel (alpha >= -1/2)",
    "bessel-dunkl": "two-sided estimates of the Dunkl Bessel kernel in the four sign/size regions (alpha > -1/2)",
    "dunkl-opposite-model": "two-sided estimate of the model kernel governing opposite-sign Dunkl Bessel potentials",
}

_BESSEL_REGIONS = ("same-local", "same-global")
_DUNKL_REGIONS = ("same-local", "same-global", "opposite-local", "opposite-global")

#: The parameter samples of ``verify --all``.
SUITE: tuple[tuple[str, str, tuple[tuple[float, float], ...]], ...] = (
    ("riesz", "modified", ((0.0, 0.25), (0.0, 0.5), (0.0, 0.75), (1.5, 1.2), (-0.5, 0.3), (-0.9, 0.05))),
    ("riesz", "nonmodified", ((-0.75, 0.1), (0.0, 0.5), (1.0, 1.5))),
    ("bessel", "modified", ((-0.7, 1.2), (0.0, 0.5), (1.0, 0.75))),
    ("bessel", "nonmodified", ((-0.7, 0.3), (0.0, 0.5), (1.0, 1.75))),
    ("riesz-dunkl", "dunkl", ((-0.5, 0.25), (0.0, 0.5), (1.0, 1.5))),
    ("bessel-dunkl", "dunkl", ((-0.25, 0.5), (0.0, 0.75), (1.0, 1.5))),
    ("dunkl-opposite-model", "dunkl", ((-0.25, 0.5), (0.0, 0.75), (1.0, 1.5))),
)


def _jobs_for(theorem: str, setting: Setting, alpha: float, sigma: float, region: str | None):
    """``(EnvelopeSpec, auxiliary)`` pairs verified for one parameter sample."""
    if theorem not in THEOREMS:
        raise UsageError(f"unknown estimate {theorem!r}; choose from {', '.join(THEOREMS)}")
    if theorem in ("riesz", "bessel") and setting is Setting.DUNKL:
        raise UsageError(f"use '{theorem}-dunkl' for the Dunkl setting")
    kind = Kind.RIESZ if theorem.startswith("riesz") else Kind.BESSEL
    if theorem.endswith("dunkl") or theorem == "dunkl-opposite-model":
        setting = Setting.DUNKL
    if kind is Kind.RIESZ:
        regions = ("all",)
    elif theorem == "bessel":
        regions = _BESSEL_REGIONS
    elif theorem == "bessel-dunkl":
        regions = _DUNKL_REGIONS
    else:
        regions = _BESSEL_REGIONS
    if region is not None:
        r = Region.parse(region).value
        if r not in regions:
            raise UsageError(f"region {region!r} is not part of the {theorem!r} estimates ({', '.join(regions)})")
        regions = (r,)
    aux = theorem == "dunkl-opposite-model"
    jobs = []
    for r in regions:
        try:
            spec = EnvelopeSpec(setting, kind, alpha, sigma, r)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if aux and alpha <= -0.5:
            raise UsageError("the opposite-sign model kernel estimate requires alpha > -1/2")
        jobs.append((theorem, spec, aux))
    return jobs


def cmd_verify(cfg: RunConfig, theorem: str | None, region: str | None, run_all: bool,
               grid_given: bool) -> tuple[str, int]:
    """Run :func:`hankelpot.envelopes.ratio_verify`; exit 1 if any report fails."""
    jobs = []
    if run_all:
        for name, setting, samples in SUITE:
            for a, s in samples:
                jobs += _jobs_for(name, Setting.parse(setting), a, s, None)
    else:
        if theorem is None:
            raise UsageError("verify needs --theorem or --all")
        jobs = _jobs_for(theorem, cfg.setting, cfg.alpha, cfg.sigma, region)
    grid = cfg.grid if grid_given else GridSpec()
    records = []
    ok = True
    for name, spec, aux in jobs:
        rep = ratio_verify(spec, grid, tol=cfg.tol, threads=cfg.threads, auxiliary=aux)
        d = rep.to_dict()
        d["theorem"] = name
        d["status"] = "PASS" if rep.passed else "FAIL"
        d["setting"] = spec.setting.value
        d["kind"] = spec.kind.value
        d["alpha"] = spec.alpha
        d["sigma"] = spec.sigma
        d["region"] = spec.region.value
        records.append(d)
        ok &= rep.passed
    return render_records(records, cfg.output_format), EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# lplq
# ---------------------------------------------------------------------------


def _exp_str(v: Fraction) -> str:
    return "inf" if v == 0 else str(1 / v)


def _empirical_family():
    return [F.bump(1.0, 2.0), F.bump(0.5, 4.0), F.bump(2.0, 3.0)]


def cmd_lplq(cfg: RunConfig, args) -> tuple[str, int]:
    """Predicate tables, empirical columns, counterexamples and the radial cross-check."""
    if args.list_counterexamples:
        return json.dumps(lplq.counterexample_manifest(), indent=2, sort_keys=True) + "\n", EXIT_OK
    if args.counterexample:
        tag = args.counterexample
        if tag not in lplq.COUNTEREXAMPLES:
            raise UsageError(f"unknown counterexample tag {tag!r}; known: {', '.join(sorted(lplq.COUNTEREXAMPLES))}")
        rep = lplq.counterexample_run(tag)
        if cfg.output_format == "json":
            text = json.dumps(_jsonable(rep.to_dict()), indent=2, sort_keys=True) + "\n"
        else:
            rows = []
            growth = [math.nan] + rep.growth_factors
            for fam, val, gr in zip(rep.family, rep.values, growth):
                rows.append([rep.tag, fam, val, gr, rep.diverged])
            text = render_table(["tag", "family", "value", "growth_factor", "diverged"], rows, "csv")
        return text, EXIT_OK if rep.diverged else EXIT_FAIL
    if args.radial:
        if args.n is None:
            raise UsageError("--radial needs --n")
        try:
            xs = np.geomspace(0.1, 10.0, 10)
            c, dev = lplq.radial_crosscheck(args.n, cfg.sigma, F.indicator(0.0, 1.0), xs, tol=min(cfg.tol, 1e-10))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rec = {
            "n": args.n,
            "sigma": cfg.sigma,
            "fitted_constant": c,
            "expected_constant": lplq.radial_constant(args.n, cfg.sigma),
            "max_rel_dev": dev,
            "points": len(xs),
            "passed": dev <= 1e-3,
        }
        return render_records([rec], cfg.output_format), EXIT_OK if rec["passed"] else EXIT_FAIL
    m = args.grid_pq
    if m is None or m < 2:
        raise UsageError("lplq needs --grid-pq M (M >= 2), --counterexample TAG or --radial")
    a, b = lplq.exact(args.a), lplq.exact(args.b)
    setting = cfg.setting
    pts = [Fraction(k, m - 1) for k in range(m)]
    cells = [(ip, iq) for ip in pts for iq in pts]

    def verdict(cell):
        ip, iq = cell
        p = "inf" if ip == 0 else 1 / ip
        q = "inf" if iq == 0 else 1 / iq
        if cfg.kind is Kind.BESSEL:
            if a != 0 or b != 0:
                raise UsageError("Bessel potentials are characterized without power weights")
            v = lplq.bessel_bounded(setting, cfg.alpha, cfg.sigma, p, q)
            dom = lplq.domain_inclusion(setting, cfg.alpha, cfg.sigma, p, 0, Kind.BESSEL)
        else:
            v = lplq.riesz_bounded(setting, cfg.alpha, cfg.sigma, lplq.ExponentQuad(p, q, a, b))
            dom = lplq.domain_inclusion(setting, cfg.alpha, cfg.sigma, p, a)
        return v, dom

    try:
        verdicts = [verdict(c) for c in cells]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    columns = ["p", "q", "a", "b", "in_domain", "bounded", "failed_conditions"]
    empirical = None
    if args.empirical:
        if cfg.kind is not Kind.RIESZ:
            raise UsageError("--empirical is available for Riesz potentials")
        family = _empirical_family()

        def scan(cell):
            ip, iq = cell
            p = "inf" if ip == 0 else 1 / ip
            q = "inf" if iq == 0 else 1 / iq
            return lplq.empirical_norm_scan(setting, cfg.alpha, cfg.sigma, lplq.ExponentQuad(p, q, a, b), family,
                                            tol=cfg.tol)

        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            empirical = _map(scan, cells, cfg.threads)
        columns.append("worst_ratio")
    rows = []
    for i, ((ip, iq), (v, dom)) in enumerate(zip(cells, verdicts)):
        row = [_exp_str(ip), _exp_str(iq), str(a), str(b), dom, v.bounded, ";".join(v.failed_conditions)]
        if empirical is not None:
            row.append(empirical[i])
        rows.append(row)
    return render_table(columns, rows, cfg.output_format), EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--setting", default="modified", help="modified, nonmodified or dunkl")
    common.add_argument("--kind", default="riesz", help="riesz or bessel (kernel also accepts heat)")
    common.add_argument("--alpha", type=float, default=0.0)
    common.add_argument("--sigma", type=float, default=0.5)
    common.add_argument("--grid", default=None, help="log grid lo:hi:count (default 1e-2:1e2:40)")
    common.add_argument("--tol", type=float, default=1e-8, help="relative accuracy of kernel evaluations")
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default: ${THREADS_ENV} or 1); output does not depend on it")
    common.add_argument("--output", default=None, help="write to this file instead of stdout")
    common.add_argument("--format", dest="output_format", default=None, choices=("csv", "json"))

    parser = argparse.ArgumentParser(prog="hankelpot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", parents=[common], help="kernel values with envelopes on a log grid")
    k.add_argument("--t", type=float, default=None, help="time for --kind heat")
    k.add_argument("--region", default="all", help="envelope region (Bessel kernels)")
    k.add_argument("--require-finite", action="store_true", help="exit 2 instead of tabulating an infinite kernel")

    v = sub.add_parser("verify", parents=[common], help="refinement-stable kernel/envelope brackets")
    v.add_argument("--theorem", default=None, choices=sorted(THEOREMS), help="estimate family to verify")
    v.add_argument("--region", default=None)
    v.add_argument("--all", dest="run_all", action="store_true", help="run the full estimate suite")

    lq = sub.add_parser("lplq", parents=[common], help="L^p - L^q predicates, scans and counterexamples")
    lq.add_argument("--grid-pq", type=int, default=None, help="M: tabulate 1/p, 1/q over k/(M-1)")
    lq.add_argument("--a", default="0", help="weight exponent on the input side (exact fraction allowed)")
    lq.add_argument("--b", default="0", help="weight exponent on the output side (exact fraction allowed)")
    lq.add_argument("--empirical", action="store_true", help="add worst empirical norm ratios")
    lq.add_argument("--counterexample", default=None, help="run a registered divergence family")
    lq.add_argument("--list-counterexamples", action="store_true", help="print the counterexample manifest")
    lq.add_argument("--radial", action="store_true", help="radial Euclidean cross-check")
    lq.add_argument("--n", type=int, default=None, help="dimension for --radial")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    default_format = "json" if args.command == "verify" else "csv"
    heat = args.kind.strip().lower() == "heat"
    try:
        if heat and args.command != "kernel":
            raise UsageError("--kind heat is available for the kernel command only")
        cfg = RunConfig(
            command=args.command,
            setting=Setting.parse(args.setting),
            alpha=float(args.alpha),
            sigma=float(args.sigma),
            kind=Kind.RIESZ if heat else Kind.parse(args.kind),
            grid=parse_grid(args.grid) if args.grid else GridSpec(),
            tol=float(args.tol),
            output_format=args.output_format or default_format,
            output_path=args.output,
            threads=args.threads if args.threads is not None else _default_threads(),
        )
        if args.command == "kernel":
            text, code = cmd_kernel(cfg, args.t, args.region, args.require_finite, heat)
        elif args.command == "verify":
            text, code = cmd_verify(cfg, args.theorem, args.region, args.run_all, args.grid is not None)
        else:
            text, code = cmd_lplq(cfg, args)
    except (UsageError, ValueError) as exc:
        print(f"hankelpot {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(text, cfg.output_path)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
