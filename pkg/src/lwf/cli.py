"""Command-line front end.

Every subcommand emits RFC-4180 CSV (header row, CRLF line endings) to
--out or stdout.  Non-finite numbers are written as empty cells.  Exit
status: 0 on success, 1 for unreadable, malformed, or out-of-domain input,
2 when a computation fails internally (fit collapse, degenerate data).
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

import numpy as np

from . import experiments
from .errors import InputError, IoError, LwfError, ParamError, ParseError, RangeError
from .experiments import ReturnsSeries
from .igmm import IgmmConfig, fit
from .sampling import (
    DistSpec,
    Exponential,
    Normal,
    Pareto,
    SkewedT,
    SkewNormal,
    StudentT,
    Weibull,
    draw,
)
from .tail_index import modified_hill_path
from .transform import LwfParams, Policy, forward, inverse


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return repr(f) if math.isfinite(f) else ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(columns, rows, out=None) -> None:
    if out is None:
        _emit(sys.stdout, columns, rows)
        return
    try:
        with open(out, "w", newline="", encoding="utf-8") as f:
            _emit(f, columns, rows)
    except OSError as exc:
        raise IoError(f"cannot write {out}: {exc}") from None


def _emit(f, columns, rows) -> None:
    w = csv.writer(f)
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])


def ingest_csv(
    path, column="0", zeros_policy: str = "drop", seed=None, has_header: bool | None = None
) -> ReturnsSeries:
    """Read one numeric column from a CSV file.

    column is a 0-based index or a header name.  has_header True/False
    forces the first row's role; None (default) auto-detects with an index
    column by testing whether its first cell parses as a number, while a
    name column always requires a header.  Blank lines are ignored, any
    other malformed content raises ParseError with the offending row number.
    """
    try:
        with open(path, "r", newline="", encoding="utf-8") as f:
            raw = [r for r in csv.reader(f) if any(cell.strip() for cell in r)]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from None
    if not raw:
        raise ParseError(f"{path}: no data rows")
    col = str(column)
    first = raw[0]
    header: list[str] | None = None
    if col.lstrip("-").isdigit():
        idx = int(col)
        if has_header is False:
            body = raw
        elif has_header is True:
            header, body = first, raw[1:]
        else:
            probe = first[idx] if -len(first) <= idx < len(first) else ""
            try:
                float(probe)
                body = raw
            except ValueError:
                header, body = first, raw[1:]
    else:
        if has_header is False:
            raise ParseError(f"{path}: column name {col!r} requires a header row")
        if col not in first:
            raise ParseError(f"{path}: no column named {col!r} in header {first!r}")
        header, body = first, raw[1:]
        idx = first.index(col)
    if not body:
        raise ParseError(f"{path}: no data rows after header")
    values = np.empty(len(body))
    offset = 2 if header is not None else 1
    for i, row in enumerate(body):
        if not -len(row) <= idx < len(row):
            raise ParseError(
                f"{path}:{i + offset}: row has {len(row)} fields, no column {idx}"
            )
        cell = row[idx].strip()
        try:
            values[i] = float(cell)
        except ValueError:
            raise ParseError(f"{path}:{i + offset}: not a number: {cell!r}") from None
    return ReturnsSeries(values, None, zeros_policy, seed)


def _resolve_threads(args) -> int:
    if args.threads is not None:
        t = args.threads
    else:
        try:
            t = int(os.environ.get("LWF_THREADS", "1"))
        except ValueError:
            raise ParamError("LWF_THREADS must be an integer") from None
    if t < 1:
        raise ParamError(f"threads must be >= 1, got {t}")
    return t


def _require(value, flag: str, family: str):
    if value is None:
        raise ParamError(f"family {family} requires {flag}")
    return value


def _spec_from_args(args) -> DistSpec:
    f = args.family
    if f == "normal":
        return Normal(args.mu, args.sigma)
    if f == "student-t":
        return StudentT(_require(args.nu, "--nu", f))
    if f == "pareto":
        return Pareto(_require(args.alpha, "--alpha", f), args.x_min)
    if f == "exponential":
        return Exponential(args.rate)
    if f == "weibull":
        return Weibull(_require(args.shape, "--shape", f), args.scale)
    if f == "skewed-t":
        return SkewedT(_require(args.nu, "--nu", f), _require(args.gamma_star, "--gamma-star", f))
    return SkewNormal(args.xi, args.omega, _require(args.slant, "--slant", f))


def _cmd_simulate(args) -> None:
    sample = draw(_spec_from_args(args), args.size, args.seed)
    write_csv(["value"], [[v] for v in sample.values.tolist()], args.out)


def _has_header(args) -> bool | None:
    return False if args.no_header else None


def _cmd_transform(args) -> None:
    series = ingest_csv(args.input, args.column, has_header=_has_header(args))
    params = LwfParams(args.mu, args.sigma, args.gamma)
    if args.direction == "forward":
        y = forward(series.values, params)
        write_csv(["value"], [[v] for v in y.tolist()], args.out)
        return
    policy = Policy.STRICT if args.policy == "strict" else Policy.CLAMP
    report = inverse(series.values, params, policy)
    clamped = np.zeros(report.values.size, dtype=int)
    if report.clamped_count:
        clamped[report.clamped_indices] = 1
    rows = [[v, c] for v, c in zip(report.values.tolist(), clamped.tolist())]
    write_csv(["value", "clamped"], rows, args.out)


def _cmd_igmm_fit(args) -> None:
    series = ingest_csv(args.input, args.column, has_header=_has_header(args))
    config = IgmmConfig(tol=args.tol, max_iter=args.max_iter)
    report = fit(series.values, config)
    if args.trace:
        rows = [[i, t.mu, t.sigma, t.gamma] for i, t in enumerate(report.trace)]
        write_csv(["iteration", "mu", "sigma", "gamma"], rows, args.out)
        return
    tau = report.tau_hat
    write_csv(
        ["mu", "sigma", "gamma", "iterations", "status", "clamped_fraction"],
        [[tau.mu, tau.sigma, tau.gamma, report.iterations, report.status.value, report.clamped_fraction]],
        args.out,
    )


def _cmd_tail_plot(args) -> None:
    series = ingest_csv(
        args.input, args.column, args.zeros.replace("-", "_"), args.seed, _has_header(args)
    )
    values, _ = series.resolve()
    mode = "raw" if args.raw else "abs"
    path = modified_hill_path(values, beta=args.beta, transform=mode)
    rows = [[int(k), a] for k, a in zip(path.k.tolist(), path.alpha.tolist())]
    write_csv(["k", "alpha"], rows, args.out)


def _cmd_regime_scan(args) -> None:
    if (args.k_lo is None) != (args.k_hi is None):
        raise ParamError("--k-lo and --k-hi must be given together")
    k_range = None if args.k_lo is None else (args.k_lo, args.k_hi)
    series = ingest_csv(
        args.input, args.column, args.zeros.replace("-", "_"), args.seed, _has_header(args)
    )
    columns, rows, _ = experiments.run_regime_scan(
        series,
        replicates=args.replicates,
        beta_overlay=args.beta_overlay,
        seed=args.seed,
        k_range=k_range,
        threads=_resolve_threads(args),
    )
    write_csv(columns, rows, args.out)


def _cmd_table1(args) -> None:
    columns, rows = experiments.run_table1(n=args.size, seed=args.seed)
    write_csv(columns, rows, args.out)


def _cmd_table2(args) -> None:
    columns, rows = experiments.run_table2(
        n=args.size,
        seed=args.seed,
        bootstrap=args.bootstrap,
        bootstrap_replicates=args.replicates,
    )
    write_csv(columns, rows, args.out)


def _cmd_acf_check(args) -> None:
    columns, rows = experiments.run_acf_check(n=args.size, max_lag=args.max_lag, seed=args.seed)
    write_csv(columns, rows, args.out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (omit for fresh entropy)")
    common.add_argument("--out", default=None, metavar="PATH", help="output CSV path (default stdout)")
    common.add_argument(
        "--threads", type=int, default=None, help="worker threads (default $LWF_THREADS or 1)"
    )

    parser = argparse.ArgumentParser(
        prog="lwf",
        description="Heavy-tail aware transforms, fits, and tail-index diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="draw a sample, one value per row")
    p.add_argument(
        "--family",
        required=True,
        choices=["normal", "student-t", "pareto", "exponential", "weibull", "skewed-t", "skew-normal"],
    )
    p.add_argument("-n", "--size", type=int, required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--x-min", type=float, default=1.0, dest="x_min")
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--shape", type=float, default=None)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--gamma-star", type=float, default=None, dest="gamma_star")
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--slant", type=float, default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("transform", parents=[common], help="apply the transform or its inverse")
    p.add_argument("--input", required=True, metavar="CSV")
    p.add_argument("--column", default="0", help="0-based index or header name (default 0)")
    p.add_argument("--no-header", action="store_true", help="first row is data, not a header")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--direction", choices=["forward", "inverse"], required=True)
    p.add_argument("--policy", choices=["clamp", "strict"], default="clamp")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("igmm-fit", parents=[common], help="fit location, scale, and skew")
    p.add_argument("--input", required=True, metavar="CSV")
    p.add_argument("--column", default="0")
    p.add_argument("--no-header", action="store_true", help="first row is data, not a header")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=100, dest="max_iter")
    p.add_argument("--trace", action="store_true", help="emit the per-iteration parameter path")
    p.set_defaults(func=_cmd_igmm_fit)

    p = sub.add_parser("tail-plot", parents=[common], help="tail-index path over every k")
    p.add_argument("--input", required=True, metavar="CSV")
    p.add_argument("--column", default="0")
    p.add_argument("--no-header", action="store_true", help="first row is data, not a header")
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--raw", action="store_true", help="skip the absolute-value step")
    p.add_argument("--zeros", choices=["drop", "uniform-fill"], default="drop")
    p.set_defaults(func=_cmd_tail_plot)

    p = sub.add_parser("regime-scan", parents=[common], help="bands, overlay, and regime call")
    p.add_argument("--input", required=True, metavar="CSV")
    p.add_argument("--column", default="0")
    p.add_argument("--no-header", action="store_true", help="first row is data, not a header")
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--beta-overlay", type=float, default=1.001, dest="beta_overlay")
    p.add_argument("--k-lo", type=int, default=None, dest="k_lo")
    p.add_argument("--k-hi", type=int, default=None, dest="k_hi")
    p.add_argument("--zeros", choices=["drop", "uniform-fill"], default="drop")
    p.set_defaults(func=_cmd_regime_scan)

    p = sub.add_parser("table1", parents=[common], help="estimation-error sweep over tail/skew cells")
    p.add_argument("-n", "--size", type=int, default=1000)
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("table2", parents=[common], help="symmetrize-then-test sweep")
    p.add_argument("-n", "--size", type=int, default=1000)
    p.add_argument("--bootstrap", action="store_true", help="add calibrated p-values (slow)")
    p.add_argument("--replicates", type=int, default=199)
    p.set_defaults(func=_cmd_table2)

    p = sub.add_parser("acf-check", parents=[common], help="back-transform whiteness diagnostics")
    p.add_argument("-n", "--size", type=int, default=1000)
    p.add_argument("--max-lag", type=int, default=30, dest="max_lag")
    p.set_defaults(func=_cmd_acf_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ParseError, IoError, InputError, ParamError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LwfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def run() -> None:
    try:
        sys.exit(main())
    except BrokenPipeError:
        # stdout went away (e.g. piped into head); suppress the traceback
        # and let the flush-on-exit write into /dev/null instead.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        sys.exit(1)
