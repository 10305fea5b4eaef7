"""Quasi-static IRS phase-shift design in an interference-limited downlink.

The library models a single-user link assisted by an intelligent reflecting
surface (IRS) while a second base station interferes: Rician-faded BS-IRS-user
links, Rayleigh direct links, closed-form upper bounds on the average/ergodic
rate, globally optimal phase shifts in structured special cases, a
coordinate-descent optimizer for the general case, quantization degradation
bounds, and a closed-form IRS-versus-no-IRS comparison.

Modules:

* :mod:`irsphase.channel` — system parameters, steering vectors, channel law.
* :mod:`irsphase.rate` — SINR/rate bounds, Monte Carlo estimators, validation.
* :mod:`irsphase.optimizer` — special-case solutions, coordinate descent,
  phase quantization.
* :mod:`irsphase.baseline` — no-IRS counterpart, random/signal-only baselines,
  closed-form comparison predicates.
* :mod:`irsphase.harness` — YAML-configured sweeps, benchmarks, reports, CLI
  (imported lazily; pulls in matplotlib).
"""

from .baseline import (
    ComparisonVerdict,
    Verdict,
    compare,
    no_irs_monte_carlo,
    no_irs_sinr_ub,
    random_phase_rate,
    signal_only_phases,
)
from .channel import (
    DEFAULT_PATH_LOSS_EXPONENTS,
    INTERFERER_X,
    PURE_LOS,
    ChannelRealization,
    LosComponents,
    PhaseShiftMatrix,
    SystemParams,
    complex_normal,
    geometry_to_path_losses,
    los_components,
    los_weights,
    phase_offset,
    phase_offset_grid,
    sample_realization,
    steering_vector,
)
from .optimizer import (
    DEFAULT_ANGLE_TOL,
    Mode,
    OptimizationTrace,
    PcdConfig,
    SpecialCase,
    TerminationReason,
    classify,
    coordinate_optimum,
    degradation_bound,
    lambda_wrap,
    optimize_instant_adaptive,
    pcd,
    quantize,
    solve_special,
)
from .rate import (
    DEFAULT_MC_SAMPLES,
    MONTE_CARLO_BLOCK,
    CsiCase,
    DegenerateChannelError,
    DerivedConstants,
    MomentCheck,
    RateEstimate,
    Side,
    beamformer,
    block_generator,
    derived_constants,
    monte_carlo_rate,
    rate_upper_bound,
    sample_equivalent_rows,
    sinr_instant,
    sinr_statistic,
    sinr_upper_bound,
    validate_moments,
    y_los,
)

try:
    from importlib.metadata import PackageNotFoundError, version

    __version__ = version("irsphase")
except PackageNotFoundError:  # pragma: no cover - not installed
    __version__ = "0.0.0"

__all__ = [
    "__version__",
    # channel
    "DEFAULT_PATH_LOSS_EXPONENTS",
    "INTERFERER_X",
    "PURE_LOS",
    "ChannelRealization",
    "LosComponents",
    "PhaseShiftMatrix",
    "SystemParams",
    "complex_normal",
    "geometry_to_path_losses",
    "los_components",
    "los_weights",
    "phase_offset",
    "phase_offset_grid",
    "sample_realization",
    "steering_vector",
    # rate
    "DEFAULT_MC_SAMPLES",
    "MONTE_CARLO_BLOCK",
    "CsiCase",
    "DegenerateChannelError",
    "DerivedConstants",
    "MomentCheck",
    "RateEstimate",
    "Side",
    "beamformer",
    "block_generator",
    "derived_constants",
    "monte_carlo_rate",
    "rate_upper_bound",
    "sample_equivalent_rows",
    "sinr_instant",
    "sinr_statistic",
    "sinr_upper_bound",
    "validate_moments",
    "y_los",
    # optimizer
    "DEFAULT_ANGLE_TOL",
    "Mode",
    "OptimizationTrace",
    "PcdConfig",
    "SpecialCase",
    "TerminationReason",
    "classify",
    "coordinate_optimum",
    "degradation_bound",
    "lambda_wrap",
    "optimize_instant_adaptive",
    "pcd",
    "quantize",
    "solve_special",
    # baseline
    "ComparisonVerdict",
    "Verdict",
    "compare",
    "no_irs_monte_carlo",
    "no_irs_sinr_ub",
    "random_phase_rate",
    "signal_only_phases",
]
