"""Deterministic sweep runner.

Evaluates every requested (axis value, scheme, CSI case) combination, writes a
CSV whose bytes depend only on the resolved config (in particular not on the
worker parallelism), a JSON manifest with provenance and timings, and one rate
figure per CSI case.  A failure inside one combination is recorded in that
row's ``error`` column instead of aborting the sweep.

Monte Carlo columns of all schemes reuse the config seed, so schemes are
compared under common random numbers.  The instant-CSI-adaptive baseline needs
fresh full channel realizations per sample; it draws them from a dedicated
stream offset so it never collides with the block-indexed rate estimators.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

import numpy as np

from ..baseline import no_irs_monte_carlo, no_irs_sinr_ub, random_phase_rate, signal_only_phases
from ..channel import SystemParams, sample_realization
from ..optimizer import Mode, SpecialCase, classify, optimize_instant_adaptive, pcd, solve_special
from ..rate import (
    CsiCase,
    RateEstimate,
    block_generator,
    derived_constants,
    monte_carlo_rate,
    rate_upper_bound,
    sinr_instant,
)
from .config import ConfigError, ExperimentConfig, resolve_output_dir
from .plots import render_rate_figures
from .tables import library_version, write_csv

__all__ = ["SweepRow", "CSV_COLUMNS", "run_sweep", "sweep_csv_path"]

#: Sample stream offset for the instant-CSI-adaptive baseline's realizations.
ADAPTIVE_STREAM = 1 << 61

#: Schemes that are defined only when the transmitter adapts to instant CSI.
INSTANT_ONLY_SCHEMES = ("baseline3_signal_only", "baseline4_instant_adaptive")

CSV_COLUMNS = (
    "axis_value",
    "scheme",
    "csi_case",
    "c_ub",
    "mc_mean",
    "mc_se",
    "iterations",
    "error",
)


@dataclasses.dataclass(frozen=True)
class SweepRow:
    """Result of one (axis value, scheme, CSI case) combination.

    ``c_ub`` is the closed-form rate upper bound at the scheme's phases (the
    random baseline reports its average bound; the adaptive baseline has no
    quasi-static bound and leaves it empty).  ``wall_time_s`` is informational
    only and goes to the manifest, never the CSV.
    """

    axis_value: float
    scheme: str
    csi_case: CsiCase
    c_ub: float | None
    mc_mean: float | None
    mc_se: float | None
    iterations: int | None
    wall_time_s: float
    error: str | None

    def csv_cells(self) -> tuple:
        return (
            self.axis_value,
            self.scheme,
            self.csi_case.value,
            self.c_ub,
            self.mc_mean,
            self.mc_se,
            self.iterations,
            self.error,
        )


def sweep_csv_path(config: ExperimentConfig, output_dir: Path) -> Path:
    return output_dir / f"{config.scenario}.csv"


def _adaptive_instant_rate(params: SystemParams, config: ExperimentConfig) -> RateEstimate:
    """Average rate when the phases re-optimize for every realization."""
    n = config.n_adapt_samples
    rates = np.empty(n, dtype=np.float64)
    for index in range(n):
        rng = block_generator(config.seed, ADAPTIVE_STREAM + index)
        realization = sample_realization(params, rng)
        phi = optimize_instant_adaptive(realization, params, config.pcd_config)
        rates[index] = math.log2(1.0 + sinr_instant(realization, phi, params))
    mean = float(np.mean(rates))
    se = 0.0 if n == 1 else float(math.sqrt(np.var(rates, ddof=1) / n))
    return RateEstimate(mean=mean, standard_error=se, n_samples=n)


def _scheme_outputs(
    config: ExperimentConfig,
    params: SystemParams,
    scheme: str,
    case: CsiCase,
) -> tuple[float | None, RateEstimate, int | None]:
    """(bound, Monte Carlo estimate, iteration count) for one scheme."""
    constants = derived_constants(params, case)
    seed = config.seed

    if scheme == "baseline1_no_irs":
        c_ub = math.log2(1.0 + no_irs_sinr_ub(params, case))
        return c_ub, no_irs_monte_carlo(params, case, config.n_samples, seed), None

    if scheme == "baseline2_random":
        bound = random_phase_rate(params, case, config.n_phase_draws, None, seed)
        estimate = random_phase_rate(
            params, case, config.n_mc_phase_draws, config.n_samples, seed
        )
        return bound.mean, estimate, None

    if scheme == "baseline4_instant_adaptive":
        return None, _adaptive_instant_rate(params, config), None

    iterations: int | None = None
    if scheme == "special_closed_form":
        special = classify(params, constants, config.angle_tol)
        if special is SpecialCase.GENERAL:
            raise ValueError(
                "instance has no closed-form optimum (general arrival angles); use pcd"
            )
        phi = solve_special(special, constants)
    elif scheme in ("pcd", "bcd"):
        mode = Mode.PARALLEL if scheme == "pcd" else Mode.SEQUENTIAL
        solver_config = dataclasses.replace(config.pcd_config, mode=mode)
        phi, trace = pcd(params, constants, signal_only_phases(constants), solver_config)
        iterations = trace.n_iterations
    elif scheme == "baseline3_signal_only":
        phi = signal_only_phases(constants)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    c_ub = rate_upper_bound(constants, phi)
    estimate = monte_carlo_rate(params, phi, case, config.n_samples, seed)
    return c_ub, estimate, iterations


def _row_worker(task: tuple[ExperimentConfig, float, str, CsiCase]) -> SweepRow:
    config, axis_value, scheme, case = task
    start = time.perf_counter()
    try:
        params = config.params_at(axis_value)
        c_ub, estimate, iterations = _scheme_outputs(config, params, scheme, case)
    except Exception as exc:  # recorded, not raised: one bad row must not kill a sweep
        return SweepRow(
            axis_value=axis_value,
            scheme=scheme,
            csi_case=case,
            c_ub=None,
            mc_mean=None,
            mc_se=None,
            iterations=None,
            wall_time_s=time.perf_counter() - start,
            error=f"{type(exc).__name__}: {exc}",
        )
    return SweepRow(
        axis_value=axis_value,
        scheme=scheme,
        csi_case=case,
        c_ub=c_ub,
        mc_mean=estimate.mean,
        mc_se=estimate.standard_error,
        iterations=iterations,
        wall_time_s=time.perf_counter() - start,
        error=None,
    )


def row_tasks(config: ExperimentConfig) -> list[tuple[float, str, CsiCase]]:
    """Row order of the sweep: axis value, then scheme, then CSI case.

    Instant-only schemes are simply not scheduled for the statistical case
    (the combination is undefined, not an error).
    """
    tasks = []
    for axis_value in config.axis_values:
        for scheme in config.schemes:
            for case in config.cases:
                if scheme in INSTANT_ONLY_SCHEMES and case is not CsiCase.INSTANT:
                    continue
                tasks.append((axis_value, scheme, case))
    return tasks


def run_sweep(
    config: ExperimentConfig,
    *,
    parallelism: int = 1,
    output_dir: str | Path | None = None,
    write_outputs: bool = True,
    render_figures: bool = True,
) -> list[SweepRow]:
    """Run the sweep and (by default) write CSV, manifest, and figures.

    The returned rows and the CSV bytes depend only on the resolved config;
    ``parallelism`` only distributes independent row computations over worker
    processes.
    """
    if config.axis is None:
        raise ConfigError("config has no sweep section; nothing to sweep")
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")

    tasks = [(config, value, scheme, case) for value, scheme, case in row_tasks(config)]
    start = time.perf_counter()
    if parallelism == 1 or len(tasks) <= 1:
        rows = [_row_worker(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(parallelism, len(tasks))) as executor:
            rows = list(executor.map(_row_worker, tasks))
    total_wall = time.perf_counter() - start

    if write_outputs:
        out = resolve_output_dir(config, output_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = sweep_csv_path(config, out)
        write_csv(csv_path, CSV_COLUMNS, [row.csv_cells() for row in rows])

        figure_paths: list[Path] = []
        figure_error: str | None = None
        if render_figures:
            try:
                figure_paths = render_rate_figures(rows, config, out)
            except Exception as exc:  # figures are best-effort side outputs
                figure_error = f"{type(exc).__name__}: {exc}"

        manifest: dict[str, Any] = {
            "scenario": config.scenario,
            "library_version": library_version(),
            "seed": config.seed,
            "config_hash": config.config_hash(),
            "axis": config.axis,
            "axis_values": list(config.axis_values),
            "schemes": list(config.schemes),
            "cases": [case.value for case in config.cases],
            "n_samples": config.n_samples,
            "parallelism": parallelism,
            "n_rows": len(rows),
            "n_errors": sum(1 for row in rows if row.error is not None),
            "wall_time_s": total_wall,
            "csv": csv_path.name,
            "figures": [path.name for path in figure_paths],
            "rows": [
                {
                    "axis_value": row.axis_value,
                    "scheme": row.scheme,
                    "csi_case": row.csi_case.value,
                    "wall_time_s": row.wall_time_s,
                    "error": row.error,
                }
                for row in rows
            ],
        }
        if figure_error is not None:
            manifest["figure_error"] = figure_error
        manifest_path = out / f"{config.scenario}_manifest.json"
        manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    return rows
