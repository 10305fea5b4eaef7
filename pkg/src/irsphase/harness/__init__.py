"""Experiment harness: config files, sweep runner, benchmarks, and reports.

The harness wraps the library modules behind a declarative YAML configuration
(:mod:`irsphase.harness.config`), bundled example scenarios
(:mod:`irsphase.harness.presets`), a deterministic sweep runner that writes CSV
tables, JSON manifests and PNG figures (:mod:`irsphase.harness.sweep`), a
wall-clock benchmark for the two coordinate-descent modes
(:mod:`irsphase.harness.bench`), a moment-validation report
(:mod:`irsphase.harness.report`), and the ``irsphase`` command line interface
(:mod:`irsphase.harness.cli`).
"""

from .bench import BenchRow, bench_pcd
from .config import (
    AXIS_NAMES,
    SCHEME_NAMES,
    ConfigError,
    ExperimentConfig,
    GeometryConfig,
    config_from_dict,
    db_to_linear,
    dbm_to_watts,
    load_config,
    resolve_output_dir,
)
from .presets import PRESETS, get_preset
from .report import MomentRow, validate_report
from .sweep import SweepRow, run_sweep

__all__ = [
    "AXIS_NAMES",
    "SCHEME_NAMES",
    "BenchRow",
    "ConfigError",
    "ExperimentConfig",
    "GeometryConfig",
    "MomentRow",
    "PRESETS",
    "SweepRow",
    "bench_pcd",
    "config_from_dict",
    "db_to_linear",
    "dbm_to_watts",
    "get_preset",
    "load_config",
    "resolve_output_dir",
    "run_sweep",
    "validate_report",
]
