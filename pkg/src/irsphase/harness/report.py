"""Moment-validation report.

Compares the closed-form SINR numerator and denominator moments against
empirical averages for both CSI cases on a small grid of phase configurations
(all-zero phases, the signal-aligned phases, and one random draw), and flags
any |z| > 4.  This is the end-to-end sanity check that the analytical
constants and the channel sampler describe the same system.
"""

from __future__ import annotations

import dataclasses
import math
from pathlib import Path

from ..baseline import signal_only_phases
from ..channel import PhaseShiftMatrix
from ..optimizer import lambda_wrap
from ..rate import CsiCase, block_generator, derived_constants, validate_moments
from .config import ExperimentConfig, resolve_output_dir
from .tables import write_csv

__all__ = [
    "MomentRow",
    "MOMENT_COLUMNS",
    "VALIDATION_STREAM",
    "Z_FLAG_THRESHOLD",
    "validation_phases",
    "validate_report",
    "moments_csv_path",
]

#: Sample stream offset for the report's random phase draw.
VALIDATION_STREAM = 1 << 60

#: Moments with |z| above this are flagged as disagreements.
Z_FLAG_THRESHOLD = 4.0

MOMENT_COLUMNS = (
    "csi_case",
    "phi_label",
    "moment",
    "closed_form",
    "empirical",
    "standard_error",
    "z_score",
    "flagged",
)


@dataclasses.dataclass(frozen=True)
class MomentRow:
    """One closed-form-versus-empirical moment comparison."""

    csi_case: CsiCase
    phi_label: str
    moment: str
    closed_form: float
    empirical: float
    standard_error: float
    z_score: float
    flagged: bool

    def csv_cells(self) -> tuple:
        return (
            self.csi_case.value,
            self.phi_label,
            self.moment,
            self.closed_form,
            self.empirical,
            self.standard_error,
            self.z_score,
            self.flagged,
        )


def moments_csv_path(config: ExperimentConfig, output_dir: Path) -> Path:
    return output_dir / f"{config.scenario}_moments.csv"


def validation_phases(config: ExperimentConfig) -> list[tuple[str, PhaseShiftMatrix]]:
    """The fixed phase grid the report evaluates: zeros, signal-aligned, random."""
    params = config.params
    constants = derived_constants(params, CsiCase.INSTANT)
    rng = block_generator(config.seed, VALIDATION_STREAM)
    random_grid = lambda_wrap(rng.uniform(0.0, 2.0 * math.pi, size=(params.m_r, params.n_r)))
    return [
        ("zeros", PhaseShiftMatrix.zeros(params.m_r, params.n_r)),
        ("signal_only", signal_only_phases(constants)),
        ("random", PhaseShiftMatrix(random_grid)),
    ]


def validate_report(
    config: ExperimentConfig,
    *,
    n_samples: int | None = None,
    output_dir: str | Path | None = None,
    write_outputs: bool = True,
) -> tuple[list[MomentRow], bool]:
    """Run all moment checks; returns the rows and whether anything was flagged."""
    n = n_samples if n_samples is not None else max(config.n_samples, 1000)
    rows: list[MomentRow] = []
    for case in config.cases:
        for label, phi in validation_phases(config):
            for check in validate_moments(config.params, phi, case, n, config.seed):
                rows.append(
                    MomentRow(
                        csi_case=case,
                        phi_label=label,
                        moment=check.name,
                        closed_form=check.closed_form,
                        empirical=check.empirical,
                        standard_error=check.standard_error,
                        z_score=check.z_score,
                        flagged=abs(check.z_score) > Z_FLAG_THRESHOLD,
                    )
                )
    flagged = any(row.flagged for row in rows)

    if write_outputs:
        out = resolve_output_dir(config, output_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(moments_csv_path(config, out), MOMENT_COLUMNS, [row.csv_cells() for row in rows])
    return rows, flagged
