"""Bundled sweep scenarios.

Each preset is a plain config mapping (the same schema as a YAML config file)
so it can be loaded directly (``irsphase sweep fig3``) or used as a base via
``preset: fig3`` with overrides.  The family covers the standard evaluation
grid of the library: rate versus IRS size and versus interference power in the
two matched-arrival-angle regimes that admit closed-form optima, rate versus
each Rician factor and versus the two layout distances in the general regime,
and a runtime scenario for the optimizer benchmark.

Naming: ``fig3`` .. ``fig9`` index the scenario family; the ``_case_iii``
variants weaken the signal-side Rician factor so that interference dominates,
and ``fig8_dru30`` moves the IRS 30 m off the user axis instead of 20 m.
"""

from __future__ import annotations

import copy
import math
from typing import Any

__all__ = ["PRESETS", "get_preset"]

_SEED = 1729

#: Matched arrival angles at the IRS with strong LoS everywhere; with the
#: default powers this makes the signal-dominance discriminant positive, so the
#: interference-cancelling alignment is globally optimal in closed form.
_MATCHED_STRONG_LOS = {
    "delta_ir_h": math.pi / 6,
    "delta_ir_v": math.pi / 6,
    "k_sr_db": 20,
    "k_ir_db": 20,
    "k_ru_db": 20,
}

#: Matched arrival angles but a weak signal-side LoS component; the
#: discriminant flips sign and the paired-cancellation alignment is optimal.
_MATCHED_WEAK_SIGNAL = dict(_MATCHED_STRONG_LOS, k_sr_db=-20)

_ALL_SCHEMES = [
    "special_closed_form",
    "pcd",
    "bcd",
    "baseline1_no_irs",
    "baseline2_random",
    "baseline3_signal_only",
    "baseline4_instant_adaptive",
]

_GENERAL_SCHEMES = [
    "pcd",
    "bcd",
    "baseline1_no_irs",
    "baseline2_random",
    "baseline3_signal_only",
    "baseline4_instant_adaptive",
]


def _special_case_preset(scenario: str, system: dict, axis: str, values: list) -> dict:
    return {
        "scenario": scenario,
        "seed": _SEED,
        "n_samples": 10_000,
        "system": dict(system),
        "sweep": {"axis": axis, "values": list(values)},
        "schemes": list(_ALL_SCHEMES),
        "cases": ["instant", "statistic"],
    }


def _general_preset(scenario: str, axis: str, values: list, **extra: Any) -> dict:
    preset = {
        "scenario": scenario,
        "seed": _SEED,
        "n_samples": 10_000,
        "sweep": {"axis": axis, "values": list(values)},
        "schemes": list(_GENERAL_SCHEMES),
        "cases": ["instant", "statistic"],
    }
    preset.update(extra)
    return preset


PRESETS: dict[str, dict] = {
    # rate versus IRS side length, closed-form-optimal regimes
    "fig3": _special_case_preset("fig3", _MATCHED_STRONG_LOS, "m_r", [2, 4, 6, 8]),
    "fig3_case_iii": _special_case_preset(
        "fig3_case_iii", _MATCHED_WEAK_SIGNAL, "m_r", [2, 4, 6, 8]
    ),
    # rate versus interference power, closed-form-optimal regimes
    "fig4": _special_case_preset("fig4", _MATCHED_STRONG_LOS, "p_i_dbm", [20, 25, 30, 35]),
    "fig4_case_iii": _special_case_preset(
        "fig4_case_iii", _MATCHED_WEAK_SIGNAL, "p_i_dbm", [20, 25, 30, 35]
    ),
    # rate versus each Rician factor, general regime
    "fig5": _general_preset("fig5", "k_sr_db", [-20, -10, 0, 10, 20, 30]),
    "fig6": _general_preset("fig6", "k_ru_db", [-20, -10, 0, 10, 20, 30]),
    # rate versus layout distances, general regime
    "fig7": _general_preset("fig7", "d_r", [150, 200, 250, 300, 350]),
    "fig8": _general_preset("fig8", "d_su", [150, 200, 250, 300, 350]),
    "fig8_dru30": _general_preset(
        "fig8_dru30", "d_su", [150, 200, 250, 300, 350], geometry={"d_ru_vert": 30.0}
    ),
    # optimizer runtime versus IRS side length (pair with the bench command)
    "fig9": {
        "scenario": "fig9",
        "seed": _SEED,
        "n_samples": 2_000,
        "sweep": {"axis": "m_r", "values": [8, 16, 24, 32]},
        "schemes": ["pcd", "bcd"],
        "cases": ["statistic"],
    },
}


def get_preset(name: str) -> dict:
    """Deep copy of a bundled preset's config mapping."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r} (known: {', '.join(sorted(PRESETS))})")
    return copy.deepcopy(PRESETS[name])
