"""Command-line driver: parameter sweeps, single-point reports, property
verification suites, and the kernel benchmark.

Exit codes: 0 success, 1 configuration error, 2 verification failure,
3 I/O error.
"""
from __future__ import annotations

import argparse
import sys

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; remap to the
    configuration-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="diamondqc",
        description="Thermal quantum correlations of the Ising-XYZ diamond chain.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sweep = sub.add_parser("sweep", help="evaluate a parameter grid and write CSV")
    source = sweep.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", help="named preset (fig2a..fig5)")
    source.add_argument("--config", help="sweep config file")
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.add_argument("--points", type=int, default=None,
                       help="points per ranged axis (presets only; default 201)")
    sweep.add_argument("--workers", type=int, default=1,
                       help="worker processes (default 1; output is identical)")
    sweep.add_argument("--oracle-every", type=int, default=None, dest="oracle_every",
                       help="re-verify every k-th grid point against brute force")
    sweep.add_argument("--seed", type=int, default=0,
                       help="seed recorded in the header and used by oracle checks")
    sweep.set_defaults(func=_cmd_sweep)

    point = sub.add_parser("point", help="print all measures at one parameter point")
    point.add_argument("--J0", type=float, default=0.0, help="J0/J")
    point.add_argument("--T", type=float, required=True, help="T/J (> 0)")
    point.add_argument("--h", type=float, default=0.0, help="h/J")
    point.add_argument("--gamma", type=float, default=0.0, help="xy anisotropy")
    point.add_argument("--Jz", type=float, default=0.0, help="Jz/J")
    point.set_defaults(func=_cmd_point)

    verify = sub.add_parser("verify", help="run the verification property suites")
    verify.add_argument("--suite", choices=("psd", "oracle", "figures", "all"),
                        default="all", help="which suite to run (default all)")
    verify.set_defaults(func=_cmd_verify)

    bench = sub.add_parser("bench", help="compare compiled and numpy kernel backends")
    bench.add_argument("--grid", type=int, default=96,
                       help="angle grid size for the conditional-entropy kernel")
    bench.add_argument("--batch", type=int, default=512,
                       help="batch size for the trace-norm kernel")
    bench.add_argument("--repeat", type=int, default=3, help="timing repeats")
    bench.set_defaults(func=_cmd_bench)

    return parser


def _cmd_sweep(args) -> int:
    from .sweep import (SweepConfigError, emit_csv, figure_preset,
                        read_sweep_config, run_sweep, with_oracle_check)
    try:
        if args.preset is not None:
            spec = figure_preset(args.preset, n_points=args.points or 201)
            label = args.preset
        else:
            if args.points is not None:
                print("error: --points applies to --preset sweeps only",
                      file=sys.stderr)
                return EXIT_CONFIG
            spec = read_sweep_config(args.config)
            label = None
        if args.oracle_every is not None:
            spec = with_oracle_check(spec, args.oracle_every)
            spec.validate()
        result = run_sweep(spec, workers=args.workers, seed=args.seed, label=label)
        emit_csv(result, args.out)
    except SweepConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {result.coords.shape[0]} rows to {args.out}")
    if result.diagnostics.get("psd_violations"):
        print(f"warning: {result.diagnostics['psd_violations']} PSD-flagged rows",
              file=sys.stderr)
    return EXIT_OK


def _cmd_point(args) -> int:
    from .measures import correlation_report
    from .model import thermal_state
    from .params import ModelParams, ThermalPoint

    if not args.T > 0:
        print(f"error: T must be positive, got {args.T}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        params = ModelParams(gamma=args.gamma, jz=args.Jz, j0=args.J0, h=args.h)
        report = correlation_report(thermal_state(params, ThermalPoint(args.T)))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for key in ("qd", "tdd", "concurrence", "mutual_info",
                "entropy_ab", "entropy_a", "d1", "d2"):
        print(f"{key}=%.12g" % getattr(report, key))
    return EXIT_OK


def _cmd_verify(args) -> int:
    from . import acceptance

    suites = acceptance.SUITES if args.suite == "all" else (args.suite,)
    failed = 0
    for suite in suites:
        for res in acceptance.run_suite(suite):
            print(acceptance.format_result(res))
            if not res.passed:
                failed += 1
    if failed:
        print(f"{failed} check(s) failed", file=sys.stderr)
        return EXIT_VERIFY
    print("all checks passed")
    return EXIT_OK


def _cmd_bench(args) -> int:
    from .bench import format_benchmark, run_benchmark

    rows = run_benchmark(grid=args.grid, batch=args.batch, repeat=args.repeat)
    print(format_benchmark(rows))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
