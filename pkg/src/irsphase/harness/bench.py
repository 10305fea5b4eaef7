"""Wall-clock benchmark of the two coordinate-descent modes.

For each sweep axis value this times the sequential solver once and the
parallel solver at each requested worker count, with the same convergence
tolerance and the same signal-aligned starting point.  The parallel solver's
per-iteration candidate computation is split into contiguous coordinate chunks
evaluated on a thread pool; chunking changes only elementwise slicing, so the
iterate trajectory (and hence the final objective and iteration count) is
bit-identical to the library solver at any worker count.  Timings are
measurements, not contracts: they land in the bench CSV, and speedups should
be read as soft, machine-dependent numbers.
"""

from __future__ import annotations

import dataclasses
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from ..baseline import signal_only_phases
from ..channel import SystemParams
from ..optimizer import (
    Mode,
    PcdConfig,
    _best_phase,
    _bound_coordinate_inputs,
    _bound_value,
    _wrap_step,
    lambda_wrap,
    pcd,
)
from ..rate import DerivedConstants, derived_constants
from .config import ExperimentConfig, resolve_output_dir
from .tables import write_csv

__all__ = ["BenchRow", "BENCH_COLUMNS", "bench_pcd", "bench_csv_path"]

BENCH_COLUMNS = ("axis_value", "algorithm", "cores", "wall_time_s", "iterations", "gamma_ub")


@dataclasses.dataclass(frozen=True)
class BenchRow:
    """One timed solver run; ``gamma_ub`` is the final SINR bound reached."""

    axis_value: float | None
    algorithm: str
    cores: int
    wall_time_s: float
    iterations: int
    gamma_ub: float

    def csv_cells(self) -> tuple:
        return (
            self.axis_value,
            self.algorithm,
            self.cores,
            self.wall_time_s,
            self.iterations,
            self.gamma_ub,
        )


def bench_csv_path(config: ExperimentConfig, output_dir: Path) -> Path:
    return output_dir / f"{config.scenario}_bench.csv"


def _chunk_slices(n: int, chunks: int) -> list[slice]:
    bounds = np.linspace(0, n, min(chunks, n) + 1).astype(int)
    return [slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if a < b]


def _timed_parallel(
    constants: DerivedConstants,
    init_grid: np.ndarray,
    config: PcdConfig,
    cores: int,
) -> tuple[float, int, float]:
    """(wall seconds, iterations, final bound) of the chunked parallel solver."""
    shape = init_grid.shape
    theta_s = constants.theta_sru.reshape(-1)
    theta_i = constants.theta_iru.reshape(-1)
    slices = _chunk_slices(theta_s.size, cores)
    phi = init_grid.reshape(-1).copy()

    start = time.perf_counter()
    gamma = _bound_value(constants, phi.reshape(shape))
    iterations = 0
    with ThreadPoolExecutor(max_workers=cores) as executor:
        for t in range(config.max_iter):
            exp_s = np.exp(1j * (theta_s + phi))
            exp_i = np.exp(1j * (theta_i + phi))
            s_tot = exp_s.sum()
            i_tot = exp_i.sum()

            def work(sl: slice):
                coeffs = _bound_coordinate_inputs(
                    constants, s_tot - exp_s[sl], i_tot - exp_i[sl], theta_s[sl], theta_i[sl]
                )
                return _best_phase(*coeffs, phi[sl])

            parts = list(executor.map(work, slices))
            best = max(float(values.max()) for _, values in parts)
            if best - gamma <= config.tol:
                break
            phi_bar = np.concatenate([candidate for candidate, _ in parts])
            rho = config.rho0 / (t + 1.0) ** config.kappa
            phi = lambda_wrap(phi + rho * _wrap_step(phi_bar, phi))
            gamma = _bound_value(constants, phi.reshape(shape))
            iterations += 1
    wall = time.perf_counter() - start
    return wall, iterations, gamma


def _bench_instance(
    params: SystemParams,
    constants: DerivedConstants,
    axis_value: float | None,
    config: ExperimentConfig,
    core_counts: tuple[int, ...],
) -> list[BenchRow]:
    init = signal_only_phases(constants)
    rows: list[BenchRow] = []

    for cores in core_counts:
        wall, iterations, gamma = _timed_parallel(
            constants, init.phi, config.pcd_config, cores
        )
        rows.append(
            BenchRow(
                axis_value=axis_value,
                algorithm="pcd",
                cores=cores,
                wall_time_s=wall,
                iterations=iterations,
                gamma_ub=gamma,
            )
        )

    sequential = dataclasses.replace(config.pcd_config, mode=Mode.SEQUENTIAL)
    start = time.perf_counter()
    _, trace = pcd(params, constants, init, sequential)
    wall = time.perf_counter() - start
    rows.append(
        BenchRow(
            axis_value=axis_value,
            algorithm="bcd",
            cores=1,
            wall_time_s=wall,
            iterations=trace.n_iterations,
            gamma_ub=float(trace.objectives[-1]),
        )
    )
    return rows


def _render_bench_figure(rows: list[BenchRow], config: ExperimentConfig, output_dir: Path) -> Path | None:
    from matplotlib.figure import Figure

    labeled: dict[str, list[BenchRow]] = {}
    for row in rows:
        if row.axis_value is None:
            return None
        label = row.algorithm if row.algorithm == "bcd" else f"pcd ({row.cores} cores)"
        labeled.setdefault(label, []).append(row)
    fig = Figure(figsize=(7.0, 4.5))
    ax = fig.add_subplot(111)
    for label, group in labeled.items():
        group = sorted(group, key=lambda r: r.axis_value)
        ax.plot(
            [r.axis_value for r in group],
            [r.wall_time_s for r in group],
            marker="o",
            markersize=4,
            label=label,
        )
    ax.set_xlabel(f"sweep axis: {config.axis}")
    ax.set_ylabel("wall time (s)")
    ax.set_yscale("log")
    ax.set_title(f"{config.scenario} — solver wall time")
    ax.grid(alpha=0.3, which="both")
    ax.legend(fontsize=8)
    path = output_dir / f"{config.scenario}_bench.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    return path


def bench_pcd(
    config: ExperimentConfig,
    core_counts: tuple[int, ...] | list[int],
    *,
    output_dir: str | Path | None = None,
    write_outputs: bool = True,
) -> list[BenchRow]:
    """Time the parallel solver at each core count against the sequential one.

    Uses the config's sweep axis when present, otherwise the base system alone.
    The solvers run on the bound of the first configured CSI case; the bound
    shape (and hence the timing) is the same for both cases.
    """
    counts = tuple(int(c) for c in core_counts)
    if not counts or any(c < 1 for c in counts):
        raise ValueError(f"core_counts must be a non-empty list of positive ints, got {core_counts!r}")

    case = config.cases[0]
    rows: list[BenchRow] = []
    if config.axis is None:
        constants = derived_constants(config.params, case)
        rows.extend(_bench_instance(config.params, constants, None, config, counts))
    else:
        for axis_value in config.axis_values:
            params = config.params_at(axis_value)
            constants = derived_constants(params, case)
            rows.extend(_bench_instance(params, constants, axis_value, config, counts))

    if write_outputs:
        out = resolve_output_dir(config, output_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(bench_csv_path(config, out), BENCH_COLUMNS, [row.csv_cells() for row in rows])
        try:
            _render_bench_figure(rows, config, out)
        except Exception:  # figures are best-effort side outputs
            pass
    return rows
