r"""No-IRS counterpart system, IRS-vs-no-IRS decision predicates, and reference schemes.

The counterpart system removes the reflecting surface: the signal BS serves the
user over the direct Rayleigh link only (MRT beamforming with instant CSI, the
isotropic uniform beamformer with statistical CSI), and the interference term
averages to the deterministic ``p_i * alpha_iu + sigma2``.  Its rate upper bound
is ``log2(1 + a_su / a_iu)`` with the same constants as the IRS system.

Closed-form discriminants decide the comparison without simulation:

* ``xi_gt = (a_sru_los a_iu - a_iru_los a_su) (m_r n_r)^2 + a_sru_nlos a_iu - a_su a_iru_nlos``
* ``xi_lt = a_sru_los a_iu (m_r n_r)^2 + a_sru_nlos a_iu - a_su a_iru_nlos``

``xi_gt > 0`` certifies that the optimally configured IRS beats the no-IRS
system; ``xi_lt < 0`` certifies the opposite; in between the predicate is
indeterminate.  ``xi_gt`` is affine in the interference power:
``xi_gt = p_i * varsigma + sigma2 * (a_sru_los (m_r n_r)^2 + a_sru_nlos)``, so a
positive ``varsigma`` keeps the verdict IrsBetter for every interference power.

Reference schemes used by the experiment harness:

* random phases averaged over many uniform draws (:func:`random_phase_rate`),
* signal-only alignment that ignores interference (:func:`signal_only_phases`),
* the no-IRS system itself (:func:`no_irs_sinr_ub` / :func:`no_irs_monte_carlo`).

The per-realization adaptive scheme lives in
:func:`irsphase.optimizer.optimize_instant_adaptive`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import PhaseShiftMatrix, SystemParams, complex_normal
from .optimizer import SpecialCase, lambda_wrap, solve_special
from .rate import (
    MONTE_CARLO_BLOCK,
    CsiCase,
    DerivedConstants,
    RateEstimate,
    block_generator,
    derived_constants,
    monte_carlo_rate,
    rate_upper_bound,
)

__all__ = [
    "DEFAULT_PHASE_DRAWS",
    "Verdict",
    "ComparisonVerdict",
    "no_irs_sinr_ub",
    "no_irs_monte_carlo",
    "compare",
    "random_phase_rate",
    "signal_only_phases",
]

#: Default number of random phase configurations averaged by random_phase_rate.
DEFAULT_PHASE_DRAWS = 10_000

# Stream offsets keeping auxiliary draws disjoint from Monte Carlo sample blocks.
_PHASE_STREAM = 2**63
_SUBSEED_STREAM = 2**62


class Verdict(enum.Enum):
    """Outcome of the closed-form IRS-vs-no-IRS comparison."""

    IRS_BETTER = "irs_better"
    NO_IRS_BETTER = "no_irs_better"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ComparisonVerdict:
    r"""Discriminants and verdict of the IRS-vs-no-IRS comparison.

    ``xi_gt <= xi_lt`` always, with equality exactly when
    ``a_iru_los * a_su == 0`` (for instance ``p_i == 0``).  ``varsigma`` is the
    slope of ``xi_gt`` in the interference power.
    """

    xi_gt: float
    xi_lt: float
    varsigma: float
    verdict: Verdict

    def __post_init__(self) -> None:
        if not self.xi_gt <= self.xi_lt:
            raise ValueError(f"xi_gt ({self.xi_gt}) must not exceed xi_lt ({self.xi_lt})")
        expected = (
            Verdict.IRS_BETTER
            if self.xi_gt > 0.0
            else Verdict.NO_IRS_BETTER
            if self.xi_lt < 0.0
            else Verdict.INDETERMINATE
        )
        if self.verdict is not expected:
            raise ValueError(f"verdict {self.verdict} inconsistent with discriminants")


def no_irs_sinr_ub(params: SystemParams, case: CsiCase) -> float:
    """SINR upper bound of the no-IRS counterpart system, ``a_su / a_iu``."""
    constants = derived_constants(params, case)
    return constants.a_su / constants.a_iu


def no_irs_monte_carlo(
    params: SystemParams,
    case: CsiCase,
    n_samples: int,
    seed: int,
) -> RateEstimate:
    r"""Monte Carlo average rate of the no-IRS counterpart system.

    Instant case: MRT makes the per-sample SINR
    ``p_s ||h_su||^2 / (p_i alpha_iu + sigma2)``; statistic case the numerator is
    the uniform-beamformer projection ``p_s |sum(conj(h_su))|^2 / (m_s n_s)``.
    The interference-plus-noise term is deterministic in both cases because the
    interferer's beamformer is independent of the victim channel.

    Block draw order (fixed): the direct signal link, then the direct
    interference link; the latter is unused here but keeps the draws positionally
    aligned with the IRS-system sampler for same-seed paired comparisons.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if not isinstance(case, CsiCase):
        raise TypeError(f"case must be a CsiCase, got {case!r}")
    constants = derived_constants(params, case)
    den = constants.a_iu
    rates = np.empty(n_samples, dtype=np.float64)
    for start in range(0, n_samples, MONTE_CARLO_BLOCK):
        block = start // MONTE_CARLO_BLOCK
        keep = min(MONTE_CARLO_BLOCK, n_samples - start)
        rng = block_generator(seed, block)
        h_su = math.sqrt(params.alpha_su) * complex_normal(rng, (MONTE_CARLO_BLOCK, params.n_signal))
        complex_normal(rng, (MONTE_CARLO_BLOCK, params.n_interf))
        if case is CsiCase.INSTANT:
            num = params.p_s * np.sum(np.abs(h_su) ** 2, axis=1)
        else:
            num = params.p_s * np.abs(np.conj(h_su).sum(axis=1)) ** 2 / params.n_signal
        rates[start : start + keep] = np.log2(1.0 + num[:keep] / den)
    mean = float(np.mean(rates))
    se = 0.0 if n_samples == 1 else float(math.sqrt(np.var(rates, ddof=1) / n_samples))
    return RateEstimate(mean=mean, standard_error=se, n_samples=n_samples)


def compare(params: SystemParams, constants: DerivedConstants) -> ComparisonVerdict:
    r"""Closed-form comparison of the optimally configured IRS against no IRS.

    ``varsigma`` is obtained exactly from the affine decomposition
    ``xi_gt = p_i * varsigma + sigma2 * (a_sru_los (m_r n_r)^2 + a_sru_nlos)`` by
    evaluating the interference-side constants at unit interference power.
    """
    if constants.theta_sru.shape != (params.m_r, params.n_r):
        raise ValueError("constants and params describe different IRS shapes")
    q = float(constants.n_irs) ** 2
    xi_gt = (
        (constants.a_sru_los * constants.a_iu - constants.a_iru_los * constants.a_su) * q
        + constants.a_sru_nlos * constants.a_iu
        - constants.a_su * constants.a_iru_nlos
    )
    xi_lt = (
        constants.a_sru_los * constants.a_iu * q
        + constants.a_sru_nlos * constants.a_iu
        - constants.a_su * constants.a_iru_nlos
    )
    unit = derived_constants(params.replace(p_i=1.0), constants.csi_case)
    varsigma = params.alpha_iu * (constants.a_sru_los * q + constants.a_sru_nlos) - constants.a_su * (
        unit.a_iru_los * q + unit.a_iru_nlos
    )
    verdict = (
        Verdict.IRS_BETTER
        if xi_gt > 0.0
        else Verdict.NO_IRS_BETTER
        if xi_lt < 0.0
        else Verdict.INDETERMINATE
    )
    return ComparisonVerdict(xi_gt=xi_gt, xi_lt=xi_lt, varsigma=varsigma, verdict=verdict)


def _draw_subseed(seed: int, index: int) -> int:
    """Deterministic per-draw Monte Carlo seed from a dedicated stream."""
    rng = block_generator(seed, _SUBSEED_STREAM + index)
    return int(rng.integers(0, 2**63))


def random_phase_rate(
    params: SystemParams,
    case: CsiCase,
    n_phase_draws: int = DEFAULT_PHASE_DRAWS,
    n_samples: int | None = None,
    seed: int = 0,
) -> RateEstimate:
    r"""Average rate of uniformly random phase configurations.

    Draws ``n_phase_draws`` i.i.d. phase grids uniform on ``[0, 2*pi)`` from a
    dedicated stream of ``seed``.  With ``n_samples`` of ``None`` each draw is
    scored by the closed-form rate upper bound; otherwise each draw is scored by
    a Monte Carlo ergodic-rate estimate with ``n_samples`` channel samples (its
    seed derived deterministically per draw).  The returned estimate averages
    the per-draw scores; ``n_samples`` in the result counts the phase draws.
    """
    if n_phase_draws < 1:
        raise ValueError("n_phase_draws must be >= 1")
    constants = derived_constants(params, case)
    rng = block_generator(seed, _PHASE_STREAM)
    grids = rng.uniform(0.0, 2.0 * math.pi, size=(n_phase_draws, params.m_r, params.n_r))
    values = np.empty(n_phase_draws, dtype=np.float64)
    for t in range(n_phase_draws):
        phi = PhaseShiftMatrix(lambda_wrap(grids[t]))
        if n_samples is None:
            values[t] = rate_upper_bound(constants, phi)
        else:
            estimate = monte_carlo_rate(params, phi, case, n_samples, _draw_subseed(seed, t))
            values[t] = estimate.mean
    mean = float(np.mean(values))
    se = 0.0 if n_phase_draws == 1 else float(math.sqrt(np.var(values, ddof=1) / n_phase_draws))
    return RateEstimate(mean=mean, standard_error=se, n_samples=n_phase_draws)


def signal_only_phases(constants: DerivedConstants) -> PhaseShiftMatrix:
    """Phases aligning the signal reflected path only (interference-blind)."""
    return solve_special(SpecialCase.NO_INTERFERENCE, constants, 0.0)
