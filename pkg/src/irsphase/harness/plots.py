"""Figure rendering for sweep results.

Renders one PNG per CSI case next to the CSV: solid lines with markers show
the Monte Carlo rate of each scheme against the sweep axis, and dashed lines
of the same color show the closed-form upper bound where one exists.  Uses
matplotlib's object-oriented API with the Agg canvas, so no global backend
state is touched.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from matplotlib.figure import Figure

from ..rate import CsiCase

if TYPE_CHECKING:  # pragma: no cover
    from .config import ExperimentConfig
    from .sweep import SweepRow

__all__ = ["render_rate_figures"]

_AXIS_LABELS = {
    "m_r": "IRS side length $M_R$ ($=N_R$)",
    "p_i_dbm": "interference power $P_I$ (dBm)",
    "k_sr_db": "Rician factor $K_{SR}$ (dB)",
    "k_ru_db": "Rician factor $K_{RU}$ (dB)",
    "d_r": "IRS horizontal position $d_R$ (m)",
    "d_su": "user distance $d_{SU}$ (m)",
}

_CASE_TITLES = {
    CsiCase.INSTANT: "instantaneous CSI (average rate)",
    CsiCase.STATISTIC: "statistical CSI (ergodic rate)",
}


def _finite_points(rows: Iterable["SweepRow"], scheme: str, case: CsiCase):
    points = []
    for row in rows:
        if row.scheme != scheme or row.csi_case is not case or row.error is not None:
            continue
        if row.mc_mean is None or not math.isfinite(row.axis_value):
            continue
        points.append((row.axis_value, row.mc_mean, row.c_ub))
    points.sort(key=lambda p: p[0])
    return points


def render_rate_figures(
    rows: list["SweepRow"],
    config: "ExperimentConfig",
    output_dir: Path,
) -> list[Path]:
    """Write ``<scenario>_<case>.png`` for every CSI case with plottable rows."""
    paths: list[Path] = []
    for case in config.cases:
        fig = Figure(figsize=(7.0, 4.5))
        ax = fig.add_subplot(111)
        plotted = False
        for scheme in config.schemes:
            points = _finite_points(rows, scheme, case)
            if not points:
                continue
            xs = [p[0] for p in points]
            ys = [p[1] for p in points]
            (line,) = ax.plot(xs, ys, marker="o", markersize=4, label=scheme)
            bounds = [(p[0], p[2]) for p in points if p[2] is not None]
            if bounds:
                ax.plot(
                    [b[0] for b in bounds],
                    [b[1] for b in bounds],
                    linestyle="--",
                    alpha=0.6,
                    color=line.get_color(),
                    label=f"{scheme} (bound)",
                )
            plotted = True
        if not plotted:
            continue
        ax.set_xlabel(_AXIS_LABELS.get(config.axis or "", config.axis or "axis value"))
        ax.set_ylabel("rate (bit/s/Hz)")
        ax.set_title(f"{config.scenario} — {_CASE_TITLES[case]}")
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
        path = output_dir / f"{config.scenario}_{case.value}.png"
        fig.savefig(path, dpi=150, bbox_inches="tight")
        paths.append(path)
    return paths
