"""Command-line interface.

Subcommands:
  fig1    interior Dirac solution preset (M=5, p=10, a=0.1, k=0.2, lambda=0.7,
          0.1 <= r <= 9.9); writes CSV and SVG
  fig2    exterior Dirac solution preset (same parameters, 0.1 <= u <= 50);
          writes CSV and SVG
  dirac   fully parameterized Dirac curve (choose --region origin|horizon)
  kg      fully parameterized Klein-Gordon curve
  verify  run the verification suites and print pass/fail with measured values

Every run prints the resolved parameter set and the achieved maximum
err_estimate.  Errors exit nonzero with one line ``ERROR <code>: <message>``.
A ``--config PATH`` file of ``key = value`` lines supplies defaults; explicit
flags override it.
"""

from __future__ import annotations

import argparse
import sys

from .curves import (
    FIG1_CONFIG,
    FIG2_CONFIG,
    OutputFormat,
    Problem,
    RunConfig,
    emit,
    sample_curve,
)
from .errors import HeunradError

_PARAM_KEYS = ("M", "p", "a", "k", "lambda", "omega", "l", "n", "range",
               "samples", "tol", "branch", "out", "format", "region")


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in _PARAM_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val
    return values


def _add_common_flags(sub):
    sub.add_argument("--config", help="key = value file; flags override it")
    sub.add_argument("--M", type=float, help="mass parameter")
    sub.add_argument("--p", type=float, help="twisting parameter")
    sub.add_argument("--a", type=float, help="interpolation / external parameter")
    sub.add_argument("--k", type=float, help="Dirac mode parameter")
    sub.add_argument("--lambda", dest="lam", type=float, help="Dirac angular eigenvalue")
    sub.add_argument("--omega", type=float, help="KG frequency")
    sub.add_argument("--l", type=int, help="KG angular degree (lambda = l(l+1))")
    sub.add_argument("--n", type=int, help="KG azimuthal number")
    sub.add_argument("--range", dest="range_", metavar="LO:HI", help="sampling range")
    sub.add_argument("--samples", type=int, help="number of sample points")
    sub.add_argument("--tol", type=float, help="evaluation tolerance")
    sub.add_argument("--branch", choices=("regular", "second"))
    sub.add_argument("--out", help="output path (base name; extension added per format)")
    sub.add_argument("--format", choices=("csv", "svg", "both"))


def _parse_range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"range must be LO:HI, got {text!r}")
    return float(lo), float(hi)


def _merge(defaults: RunConfig, args, file_values: dict,
           problem: Problem) -> tuple[RunConfig, str, str]:
    def pick(flag_value, file_key, fallback):
        if flag_value is not None:
            return flag_value
        if file_key in file_values:
            return file_values[file_key]
        return fallback

    lo, hi = defaults.lo, defaults.hi
    range_text = pick(args.range_, "range", None)
    if range_text is not None:
        lo, hi = _parse_range(str(range_text))
    cfg = RunConfig(
        problem=problem,
        branch=str(pick(args.branch, "branch", defaults.branch)),
        M=float(pick(args.M, "M", defaults.M)),
        p=float(pick(args.p, "p", defaults.p)),
        a=float(pick(args.a, "a", defaults.a)),
        k=float(pick(args.k, "k", defaults.k)),
        lam=float(pick(args.lam, "lambda", defaults.lam)),
        omega=float(pick(args.omega, "omega", defaults.omega)),
        l=int(pick(args.l, "l", defaults.l)),
        n=int(pick(args.n, "n", defaults.n)),
        lo=lo, hi=hi,
        samples=int(pick(args.samples, "samples", defaults.samples)),
        tol=float(pick(args.tol, "tol", defaults.tol)),
    )
    out = str(pick(args.out, "out", "curve"))
    fmt = str(pick(args.format, "format", "csv"))
    return cfg, out, fmt


def _run_curve(cfg: RunConfig, out_base: str, fmt: str) -> int:
    print(f"parameters: {cfg.describe()}")
    curve = sample_curve(cfg)
    print(f"max err_estimate: {curve.max_err_estimate:.3e}")
    wrote = []
    if fmt in ("csv", "both"):
        path = out_base if out_base.endswith(".csv") else out_base + ".csv"
        emit(curve, OutputFormat.CSV, path, cfg.describe())
        wrote.append(path)
    if fmt in ("svg", "both"):
        base = out_base[:-4] if out_base.endswith(".csv") else out_base
        path = base if base.endswith(".svg") else base + ".svg"
        emit(curve, OutputFormat.SVG, path, cfg.describe())
        wrote.append(path)
    print(f"wrote {len(curve.rows)} samples to: " + ", ".join(wrote))
    return 0


def _cmd_preset(args, preset: RunConfig, default_out: str) -> int:
    file_values = _read_config_file(args.config) if args.config else {}
    if args.out is None and "out" not in file_values:
        file_values["out"] = default_out
    if args.format is None and "format" not in file_values:
        file_values["format"] = "both"
    cfg, out, fmt = _merge(preset, args, file_values, preset.problem)
    return _run_curve(cfg, out, fmt)


def _cmd_dirac(args) -> int:
    file_values = _read_config_file(args.config) if args.config else {}
    region = args.region or file_values.get("region", "horizon")
    problem = Problem.DIRAC_ORIGIN if region == "origin" else Problem.DIRAC_HORIZON
    defaults = FIG1_CONFIG if problem is Problem.DIRAC_ORIGIN else FIG2_CONFIG
    cfg, out, fmt = _merge(defaults, args, file_values, problem)
    return _run_curve(cfg, out, fmt)


def _cmd_kg(args) -> int:
    file_values = _read_config_file(args.config) if args.config else {}
    defaults = RunConfig(problem=Problem.KG, branch="regular", M=5.0, a=0.1,
                         omega=0.3, l=1, n=0, lo=0.5, hi=20.0)
    cfg, out, fmt = _merge(defaults, args, file_values, Problem.KG)
    return _run_curve(cfg, out, fmt)


def _cmd_verify(args) -> int:
    from . import verify
    results = verify.run_all(args.out)
    failures = 0
    for res in results:
        print(res.line())
        for d in res.details:
            print(f"        {d}")
        failures += 0 if res.passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heunrad",
        description="Confluent Heun radial waves: curve sampling, figures, verification")
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("fig1", help="interior Dirac solution preset (CSV+SVG)")
    _add_common_flags(p1)
    p2 = sub.add_parser("fig2", help="exterior Dirac solution preset (CSV+SVG)")
    _add_common_flags(p2)
    pd = sub.add_parser("dirac", help="parameterized Dirac radial curve")
    _add_common_flags(pd)
    pd.add_argument("--region", choices=("origin", "horizon"),
                    help="expansion region (default horizon)")
    pk = sub.add_parser("kg", help="parameterized Klein-Gordon radial curve")
    _add_common_flags(pk)
    pv = sub.add_parser("verify", help="run the verification suites")
    pv.add_argument("--out", help="directory for the emitted figure files")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fig1":
            return _cmd_preset(args, FIG1_CONFIG, "fig1")
        if args.command == "fig2":
            return _cmd_preset(args, FIG2_CONFIG, "fig2")
        if args.command == "dirac":
            return _cmd_dirac(args)
        if args.command == "kg":
            return _cmd_kg(args)
        if args.command == "verify":
            return _cmd_verify(args)
        parser.error(f"unknown command {args.command!r}")
    except (HeunradError, ValueError, OSError) as exc:
        if isinstance(exc, HeunradError):
            code = type(exc).__name__.removesuffix("Error")
        elif isinstance(exc, ValueError):
            code = "InvalidValue"
        else:
            code = "Io"
        print(f"ERROR {code}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
