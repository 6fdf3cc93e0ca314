"""Command-line frontend: ``dxa <command> [options]``.

Commands: gen-arfima, dfa, dxa, acorr, xcorr, fit, transform, reproduce.
Defaults for any option can be supplied through ``--config FILE`` holding
``key=value`` lines (keys are option names without dashes, ``-`` or ``_``).
Results go to files or stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .core import TimeSeries, apply_chain
from .errors import DxaError, IoError
from .experiments import EXPERIMENTS
from .fluctuation import MIN_SCALE, dfa_curve, dxa_curve, scale_grid
from .io import ColumnSpec, read_curve, read_series, write_curve, write_json, write_series
from .longmem import DEFAULT_TRUNCATION, ArfimaSpec, CouplingMode, arfima_generate, generate_pair
from .scaling import (
    autocorrelation,
    cross_correlation,
    cross_correlation_diagnosis,
    fit_power_law,
)

log = logging.getLogger("dxa")


class UsageError(Exception):
    """Bad flag value; message names the flag."""


def _flag_error(flag: str, message: str):
    raise UsageError(f"{flag}: {message}")


def read_config(path) -> dict:
    cfg = {}
    try:
        with open(path) as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"--config: line {line_no} is not key=value")
                key, value = (p.strip() for p in line.split("=", 1))
                cfg[key.replace("-", "_")] = value
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}") from exc
    return cfg


# ---------------------------------------------------------------- parser ---

def _add_input(p, second: bool = False):
    p.add_argument("input", help="CSV file")
    if second:
        p.add_argument("input2", nargs="?", help="second CSV file (default: same file)")
    p.add_argument("--column", type=int, default=0, help="0-based column (default 0)")
    if second:
        p.add_argument("--column2", type=int, default=None,
                       help="column of the second series (default: --column)")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--header", default="auto", choices=("auto", "true", "false"),
                   help="skip first row: auto skips it iff it is not numeric")
    p.add_argument("--chain", default="",
                   help="comma-separated transforms applied in order: diff, log-diff, abs, integrate")


def _add_grid(p):
    p.add_argument("--min-scale", type=int, default=16)
    p.add_argument("--max-scale", type=int, default=None, help="default N/4")
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--fit-min", type=int, default=None, help="default: smallest grid scale")
    p.add_argument("--fit-max", type=int, default=None, help="default: largest grid scale")
    p.add_argument("--format", default="json", choices=("json", "csv"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dxa", description="Detrended cross-correlation analysis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="key=value file of option defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--out", default=None, help="output file (default: stdout where applicable)")

    p = sub.add_parser("gen-arfima", help="generate one ARFIMA series or a coupled pair")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--rho2", type=float, default=None)
    p.add_argument("--coupling", default=None, choices=[m.value for m in CouplingMode])
    p.add_argument("--n", type=int, default=2**15)
    p.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION)
    p.add_argument("--burn-in", type=int, default=None, help="default: --truncation")
    common(p)

    p = sub.add_parser("dfa", help="detrended fluctuation curve of one series")
    _add_input(p)
    _add_grid(p)
    common(p)

    p = sub.add_parser("dxa", help="detrended cross-correlation curve of two series")
    _add_input(p, second=True)
    _add_grid(p)
    p.add_argument("--tau", type=float, default=0.05, help="negative-fraction band for the diagnosis")
    p.add_argument("--r2-min", type=float, default=0.98)
    common(p)

    p = sub.add_parser("acorr", help="autocorrelation function")
    _add_input(p)
    p.add_argument("--max-lag", type=int, default=100)
    common(p)

    p = sub.add_parser("xcorr", help="cross-correlation function")
    _add_input(p, second=True)
    p.add_argument("--max-lag", type=int, default=100)
    common(p)

    p = sub.add_parser("fit", help="power-law fit of a saved curve file")
    p.add_argument("curve", help="curve file written by dfa/dxa")
    p.add_argument("--fit-min", type=int, default=None)
    p.add_argument("--fit-max", type=int, default=None)
    common(p)

    p = sub.add_parser("transform", help="apply a transform chain and write the series")
    _add_input(p)
    common(p)

    p = sub.add_parser("reproduce", help="Monte Carlo reproduction of the synthetic experiments")
    p.add_argument("experiment", choices=sorted(EXPERIMENTS))
    p.add_argument("--realizations", type=int, default=10)
    p.add_argument("--n", type=int, default=2**15)
    p.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    return parser


# -------------------------------------------------------------- helpers ---

def _load(args, which: int = 1) -> TimeSeries:
    if which == 1:
        path, column = args.input, args.column
    else:
        path = args.input2 or args.input
        column = args.column if args.column2 is None else args.column2
    if column < 0:
        _flag_error("--column" if which == 1 else "--column2", "must be >= 0")
    series = read_series(ColumnSpec(path, column, args.delimiter, args.header))
    if args.chain:
        series = apply_chain(series, args.chain)
    return series


def _grid(args, length: int):
    max_scale = args.max_scale if args.max_scale is not None else length // 4
    if args.min_scale < MIN_SCALE:
        _flag_error("--min-scale", f"must be >= {MIN_SCALE}")
    if max_scale <= args.min_scale:
        _flag_error("--max-scale", f"must exceed --min-scale ({max_scale} <= {args.min_scale})")
    if max_scale > length - 1:
        _flag_error("--max-scale", f"{max_scale} exceeds N - 1 = {length - 1}")
    if args.points < 2:
        _flag_error("--points", "must be >= 2")
    return scale_grid(args.min_scale, max_scale, args.points)


def _fit_range(args, grid):
    lo = args.fit_min if args.fit_min is not None else int(grid.scales[0])
    hi = args.fit_max if args.fit_max is not None else int(grid.scales[-1])
    if lo >= hi:
        _flag_error("--fit-min", f"must be below --fit-max ({lo} >= {hi})")
    return lo, hi


def _emit(text: str, out):
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------- commands ---

def cmd_gen_arfima(args) -> int:
    if not 0 < args.rho < 0.5:
        _flag_error("--rho", "rho out of (0,0.5)")
    if args.rho2 is not None and not 0 < args.rho2 < 0.5:
        _flag_error("--rho2", "rho out of (0,0.5)")
    if args.n < 1:
        _flag_error("--n", "must be >= 1")
    if args.truncation < 0:
        _flag_error("--truncation", "must be >= 0")
    if args.burn_in is not None and args.burn_in < 0:
        _flag_error("--burn-in", "must be >= 0")
    if not 0 <= args.seed < 2**64:
        _flag_error("--seed", "must be a 64-bit unsigned integer")
    if (args.rho2 is None) != (args.coupling is None):
        _flag_error("--coupling" if args.rho2 is not None else "--rho2",
                    "--rho2 and --coupling must be given together")
    spec = ArfimaSpec(args.rho, args.n, args.truncation, args.seed, args.burn_in)
    if args.rho2 is None:
        columns = {"y": arfima_generate(spec).samples}
    else:
        spec2 = ArfimaSpec(args.rho2, args.n, args.truncation, args.seed, args.burn_in)
        a, b = generate_pair(spec, spec2, args.coupling)
        columns = {"y": a.samples, "y2": b.samples}
    text = write_series(columns)
    _emit(text, args.out)
    return 0


def _curve_params(args, grid, lo, hi, extra=None) -> dict:
    params = {
        "input": args.input,
        "column": args.column,
        "chain": args.chain,
        "grid": [int(grid.scales[0]), int(grid.scales[-1]), args.points],
        "fit_range": [lo, hi],
    }
    params.update(extra or {})
    return params


def cmd_dfa(args) -> int:
    series = _load(args)
    grid = _grid(args, len(series))
    lo, hi = _fit_range(args, grid)
    curve = dfa_curve(series, grid)
    fit = fit_power_law(curve, lo, hi)
    if args.out:
        write_curve(curve, fit, args.out, args.format, _curve_params(args, grid, lo, hi))
    print(f"H = {fit.exponent:.6f}  stderr = {fit.stderr:.6f}  r2 = {fit.r_squared:.6f}  "
          f"range = [{fit.fit_range[0]}, {fit.fit_range[1]}]")
    return 0


def cmd_dxa(args) -> int:
    a, b = _load(args, 1), _load(args, 2)
    if len(a) != len(b):
        raise UsageError(f"input2: series lengths differ ({len(a)} vs {len(b)})")
    grid = _grid(args, len(a))
    lo, hi = _fit_range(args, grid)
    curve = dxa_curve(a, b, grid)
    fit = fit_power_law(curve, lo, hi)
    diagnosis = cross_correlation_diagnosis(curve, fit, args.tau, args.r2_min)
    if args.out:
        extra = {"input2": args.input2 or args.input,
                 "column2": args.column if args.column2 is None else args.column2,
                 "tau": args.tau, "r2_min": args.r2_min, "diagnosis": str(diagnosis)}
        write_curve(curve, fit, args.out, args.format, _curve_params(args, grid, lo, hi, extra))
    print(f"lambda = {fit.exponent:.6f}  stderr = {fit.stderr:.6f}  r2 = {fit.r_squared:.6f}  "
          f"negative_fraction = {fit.negative_fraction:.6f}  range = [{fit.fit_range[0]}, {fit.fit_range[1]}]")
    print(f"diagnosis = {diagnosis}")
    return 0


def _corr_output(cf, out):
    lines = ["lag,value"] + [f"{int(k)},{float(v)!r}" for k, v in zip(cf.lags, cf.values)]
    _emit("\n".join(lines) + "\n", out)


def cmd_acorr(args) -> int:
    series = _load(args)
    if not 0 <= args.max_lag < len(series):
        _flag_error("--max-lag", f"must lie in [0, {len(series) - 1}]")
    _corr_output(autocorrelation(series, args.max_lag), args.out)
    return 0


def cmd_xcorr(args) -> int:
    a, b = _load(args, 1), _load(args, 2)
    if not 0 <= args.max_lag < len(a):
        _flag_error("--max-lag", f"must lie in [0, {len(a) - 1}]")
    _corr_output(cross_correlation(a, b, args.max_lag), args.out)
    return 0


def cmd_fit(args) -> int:
    curve, _, params = read_curve(args.curve)
    fit = fit_power_law(curve, args.fit_min, args.fit_max)
    print(f"exponent = {fit.exponent:.6f}  amplitude = {fit.amplitude:.6g}  stderr = {fit.stderr:.6f}  "
          f"r2 = {fit.r_squared:.6f}  negative_fraction = {fit.negative_fraction:.6f}")
    if curve.kind.value == "DXA":
        print(f"diagnosis = {cross_correlation_diagnosis(curve, fit)}")
    if args.out:
        write_curve(curve, fit, args.out, "json", params)
    return 0


def cmd_transform(args) -> int:
    series = _load(args)
    _emit(write_series({"y": series.samples}), args.out)
    return 0


def cmd_reproduce(args) -> int:
    if args.realizations < 1:
        _flag_error("--realizations", "must be >= 1")
    if args.n < 128:
        _flag_error("--n", "must be >= 128")
    if args.workers < 1:
        _flag_error("--workers", "must be >= 1")
    report = EXPERIMENTS[args.experiment](
        seed=args.seed, realizations=args.realizations, length=args.n,
        truncation=args.truncation, workers=args.workers,
    )
    if args.out:
        write_json(report, args.out)
    else:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    if args.experiment == "fig1a":
        s = report["summary"]
        log.info("H = %.4f  H' = %.4f  lambda = %.4f", s["H"]["mean"], s["H2"]["mean"], s["lambda"]["mean"])
    print(f"{args.experiment}: {'pass' if report['pass'] else 'fail'}", file=sys.stderr)
    return 0


COMMANDS = {
    "gen-arfima": cmd_gen_arfima,
    "dfa": cmd_dfa,
    "dxa": cmd_dxa,
    "acorr": cmd_acorr,
    "xcorr": cmd_xcorr,
    "fit": cmd_fit,
    "transform": cmd_transform,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre, _ = parser.parse_known_args(argv)
        if pre.config:
            cfg = read_config(pre.config)
            # string defaults are run through each option's type= converter
            for action in parser._subparsers._group_actions:
                for sub in action.choices.values():
                    known = {a.dest for a in sub._actions}
                    sub.set_defaults(**{k: v for k, v in cfg.items() if k in known})
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(name)s: %(message)s", stream=sys.stderr)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"dxa: error: {exc}", file=sys.stderr)
        return 2
    except DxaError as exc:
        print(f"dxa: error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # downstream reader (e.g. head) closed early
        sys.stdout = None
        return 0


if __name__ == "__main__":
    sys.exit(main())
