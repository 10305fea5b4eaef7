"""``irsphase`` command line interface.

Subcommands::

    irsphase sweep <config>     run a sweep; writes CSV + manifest + figures
    irsphase bench <config> --cores 1,2,4   time parallel vs sequential descent
    irsphase validate <config>  closed-form vs empirical moment report
    irsphase solve <config>     print optimized phases and the SINR bound

``<config>`` is a YAML file path or a bundled preset name (``fig3`` ..
``fig9``).  The output directory is, in order of precedence: ``--output-dir``,
the config's ``output_dir`` key, the ``IRSPHASE_OUTPUT_DIR`` environment
variable, or the current directory.  ``sweep`` exits 0 only when every row
computed without error; ``validate`` exits 0 only when no moment is flagged.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from ..baseline import signal_only_phases
from ..optimizer import SpecialCase, classify, pcd, solve_special
from ..rate import derived_constants, sinr_upper_bound
from .bench import bench_csv_path, bench_pcd
from .config import OUTPUT_DIR_ENV, ConfigError, load_config, resolve_output_dir
from .report import moments_csv_path, validate_report
from .sweep import run_sweep, sweep_csv_path
from .tables import format_cell

__all__ = ["main"]


def _parse_cores(text: str) -> tuple[int, ...]:
    try:
        counts = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"--cores expects comma-separated integers, got {text!r}")
    if not counts or any(c < 1 for c in counts):
        raise argparse.ArgumentTypeError(f"--cores expects positive integers, got {text!r}")
    return counts


def _print_table(header: tuple[str, ...], rows: list[tuple]) -> None:
    cells = [tuple(format_cell(cell) for cell in row) for row in rows]
    widths = [
        max(len(header[i]), *(len(row[i]) for row in cells)) if cells else len(header[i])
        for i in range(len(header))
    ]
    print("  ".join(name.ljust(widths[i]) for i, name in enumerate(header)))
    for row in cells:
        print("  ".join(row[i].ljust(widths[i]) for i in range(len(header))))


def _cmd_sweep(args: argparse.Namespace, config) -> int:
    rows = run_sweep(
        config,
        parallelism=args.parallelism,
        output_dir=args.output_dir,
        render_figures=not args.no_figures,
    )
    out = resolve_output_dir(config, args.output_dir)
    errors = [row for row in rows if row.error is not None]
    for row in errors:
        print(
            f"row error ({config.axis}={format_cell(row.axis_value)}, {row.scheme}, "
            f"{row.csi_case.value}): {row.error}",
            file=sys.stderr,
        )
    print(f"wrote {sweep_csv_path(config, out)} ({len(rows)} rows, {len(errors)} errors)")
    return 0 if not errors else 1


def _cmd_bench(args: argparse.Namespace, config) -> int:
    rows = bench_pcd(config, args.cores, output_dir=args.output_dir)
    _print_table(
        ("axis_value", "algorithm", "cores", "wall_time_s", "iterations", "gamma_ub"),
        [row.csv_cells() for row in rows],
    )
    by_axis: dict = {}
    for row in rows:
        by_axis.setdefault(row.axis_value, []).append(row)
    for axis_value, group in by_axis.items():
        bcd = [r for r in group if r.algorithm == "bcd"]
        pcd_rows = [r for r in group if r.algorithm == "pcd"]
        if bcd and pcd_rows:
            fastest = min(pcd_rows, key=lambda r: r.wall_time_s)
            ratio = bcd[0].wall_time_s / fastest.wall_time_s if fastest.wall_time_s > 0 else math.inf
            label = f"{config.axis}={format_cell(axis_value)}" if axis_value is not None else "base system"
            print(
                f"{label}: parallel ({fastest.cores} cores) is {ratio:.2f}x the sequential"
                " solver's speed (soft, machine-dependent)"
            )
    out = resolve_output_dir(config, args.output_dir)
    print(f"wrote {bench_csv_path(config, out)}")
    return 0


def _cmd_validate(args: argparse.Namespace, config) -> int:
    rows, flagged = validate_report(config, n_samples=args.n_samples, output_dir=args.output_dir)
    _print_table(
        ("csi_case", "phi", "moment", "closed_form", "empirical", "z"),
        [
            (
                row.csi_case.value,
                row.phi_label,
                row.moment,
                row.closed_form,
                row.empirical,
                f"{row.z_score:+.2f}" + (" FLAG" if row.flagged else ""),
            )
            for row in rows
        ],
    )
    out = resolve_output_dir(config, args.output_dir)
    print(f"wrote {moments_csv_path(config, out)}")
    if flagged:
        print("FAIL: at least one moment disagrees with its closed form (|z| > 4)")
        return 1
    print("OK: all closed-form moments agree with the sampler")
    return 0


def _cmd_solve(args: argparse.Namespace, config) -> int:
    cases = config.cases
    if args.case is not None:
        cases = tuple(c for c in cases if c.value == args.case) or cases
    for case in cases:
        constants = derived_constants(config.params, case)
        special = classify(config.params, constants, config.angle_tol)
        if special is not SpecialCase.GENERAL:
            phi = solve_special(special, constants)
            origin = f"closed form ({special.value})"
        else:
            phi, trace = pcd(
                config.params, constants, signal_only_phases(constants), config.pcd_config
            )
            origin = f"pcd, {trace.n_iterations} iterations ({trace.terminated_by.value})"
        gamma = sinr_upper_bound(constants, phi)
        print(f"[{case.value}] {origin}")
        print(f"  gamma_ub = {gamma:.10g}")
        print(f"  C_ub     = {math.log2(1.0 + gamma):.10g} bit/s/Hz")
        print("  phases (radians):")
        grid = np.array2string(phi.phi, precision=6, suppress_small=True, max_line_width=120)
        for line in grid.splitlines():
            print(f"    {line}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsphase",
        description=(
            "Quasi-static IRS phase-shift design under interference: sweeps, "
            "benchmarks, validation, and one-off solves."
        ),
        epilog=f"Default output directory: ${OUTPUT_DIR_ENV} (else the current directory).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a sweep config; write CSV, manifest, figures")
    sweep.add_argument("config", help="YAML config path or preset name")
    sweep.add_argument("--parallelism", type=int, default=1, help="worker processes (default 1)")
    sweep.add_argument("--output-dir", default=None, help="directory for CSV/manifest/figures")
    sweep.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    sweep.set_defaults(handler=_cmd_sweep)

    bench = sub.add_parser("bench", help="time parallel vs sequential coordinate descent")
    bench.add_argument("config", help="YAML config path or preset name")
    bench.add_argument(
        "--cores",
        type=_parse_cores,
        default=(1,),
        help="comma-separated worker counts for the parallel solver, e.g. 1,2,4,8",
    )
    bench.add_argument("--output-dir", default=None)
    bench.set_defaults(handler=_cmd_bench)

    validate = sub.add_parser("validate", help="closed-form vs empirical moment report")
    validate.add_argument("config", help="YAML config path or preset name")
    validate.add_argument("--n-samples", type=int, default=None, help="override sample count")
    validate.add_argument("--output-dir", default=None)
    validate.set_defaults(handler=_cmd_validate)

    solve = sub.add_parser("solve", help="optimize one instance and print the phases")
    solve.add_argument("config", help="YAML config path or preset name")
    solve.add_argument("--case", choices=("instant", "statistic"), default=None)
    solve.set_defaults(handler=_cmd_solve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return args.handler(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
