r"""SINR evaluation, ergodic-rate Monte Carlo estimation, and closed-form rate upper bounds.

Two CSI (channel state information) regimes are supported:

* ``CsiCase.INSTANT``: both base stations adapt maximum-ratio-transmission (MRT)
  beamformers to every channel realization.  The interfering beamformer is
  independent of the victim link, so averaging it out replaces the rank-1
  projector by ``I / (m_i * n_i)`` exactly; the per-realization SINR is

  ``p_s * ||e_s||^2 / (p_i / (m_i n_i) * ||e_i||^2 + sigma2)``

  with equivalent rows ``e_s = h^H_ru Phi H_sr + h^H_su`` and
  ``e_i = h^H_ru Phi H_ir + h^H_iu``.

* ``CsiCase.STATISTIC``: the signal BS beams along the deterministic LoS
  equivalent channel and the interfering BS uses the uniform vector; only the
  numerator stays random, the interference-plus-noise term is its exact
  expectation and is a deterministic function of the phase configuration.

For either case the average rate is upper-bounded in closed form by

``log2(1 + (a_sru_los * y_sru(phi) + a_sru_nlos + a_su)
        / (a_iru_los * y_iru(phi) + a_iru_nlos + a_iu))``

where ``y_cru(phi) = |sum_mn exp(1j * (theta_cru[m,n] + phi[m,n]))|^2`` collects
the whole phase dependence.  :func:`derived_constants` evaluates every constant
for a given :class:`~irsphase.channel.SystemParams` and CSI case; the constants
double as the optimization surface for the optimizer module.

Monte Carlo estimation draws the minimal sufficient statistics of the equivalent
rows instead of full BS-to-IRS matrices: conditionally on the IRS-to-user channel
``h_ru``, the row ``u H_tilde`` of a matrix with i.i.d. unit complex Gaussian
entries is distributed as ``norm(u) * g`` with ``g`` i.i.d. unit complex
Gaussian.  This is exact in distribution for every functional of ``(e_s, e_i)``
used anywhere in the package and draws an order of magnitude fewer gaussians.
Samples are indexed by ``(seed, block, offset)`` with one counter-based Philox
stream per 512-sample block, so serial and parallel schedules produce
bit-identical estimates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    ChannelRealization,
    LosComponents,
    PhaseShiftMatrix,
    SystemParams,
    complex_normal,
    los_components,
    los_weights,
    phase_offset_grid,
    steering_vector,
)

__all__ = [
    "MONTE_CARLO_BLOCK",
    "DEFAULT_MC_SAMPLES",
    "CsiCase",
    "Side",
    "DegenerateChannelError",
    "DerivedConstants",
    "RateEstimate",
    "MomentCheck",
    "derived_constants",
    "y_los",
    "sinr_upper_bound",
    "rate_upper_bound",
    "beamformer",
    "sinr_instant",
    "sinr_statistic",
    "monte_carlo_rate",
    "sample_equivalent_rows",
    "validate_moments",
    "block_generator",
]

#: Samples per counter-based RNG block; part of the reproducibility contract.
MONTE_CARLO_BLOCK = 512

#: Default Monte Carlo sample count.
DEFAULT_MC_SAMPLES = 10_000

_SEED_LIMIT = 2**64


class CsiCase(enum.Enum):
    """Which channel knowledge the beamformers adapt to."""

    INSTANT = "instant"
    STATISTIC = "statistic"


class Side(enum.Enum):
    """Which base station a beamformer belongs to."""

    SIGNAL = "signal"
    INTERFERENCE = "interference"


class DegenerateChannelError(ValueError):
    """Raised when a beamformer would be built from an exactly zero channel."""


@dataclass(frozen=True)
class DerivedConstants:
    r"""All closed-form constants of the rate upper bound for one CSI case.

    ``theta_sru`` and ``theta_iru`` are ``m_r x n_r`` grids of per-element phase
    offsets (IRS-to-user departure minus BS-to-IRS arrival); ``theta_ir`` is the
    ``m_i x n_i`` grid of interfering-BS departure offsets whose coherent sum
    power is ``y_ir``.  The ``a_*`` terms are linear watts; ``a_iu`` includes the
    noise floor.  ``eta`` is the signed discriminant
    ``a_sru_los * (a_iru_nlos + a_iu) - a_iru_los * (a_sru_nlos + a_su)`` whose
    sign orders the bound along the shared beam-alignment direction.
    """

    tau_sru: float
    tau_iru: float
    theta_sru: np.ndarray
    theta_iru: np.ndarray
    theta_ir: np.ndarray
    y_ir: float
    a_sru_los: float
    a_su: float
    a_iru_los: float
    a_iu: float
    a_sru_nlos: float
    a_iru_nlos: float
    eta: float
    csi_case: CsiCase

    def __post_init__(self) -> None:
        for name in ("theta_sru", "theta_iru", "theta_ir"):
            arr = np.array(getattr(self, name), dtype=np.float64, copy=True)
            if arr.ndim != 2:
                raise ValueError(f"{name} must be a 2-D grid")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.theta_sru.shape != self.theta_iru.shape:
            raise ValueError("theta_sru and theta_iru must have the same shape")
        for name in ("tau_sru", "tau_iru"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        n_interf = self.theta_ir.size
        if not 0.0 <= self.y_ir <= n_interf**2 * (1.0 + 1e-12):
            raise ValueError(f"y_ir out of range [0, {n_interf**2}]: {self.y_ir}")
        for name in ("a_sru_los", "a_su", "a_iru_los", "a_iu", "a_sru_nlos", "a_iru_nlos"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")

    @property
    def n_irs(self) -> int:
        """IRS element count (size of the theta grids)."""
        return self.theta_sru.size


@dataclass(frozen=True)
class RateEstimate:
    """Monte Carlo estimate of an average rate in bits/s/Hz."""

    mean: float
    standard_error: float
    n_samples: int

    def __post_init__(self) -> None:
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if not (math.isfinite(self.standard_error) and self.standard_error >= 0.0):
            raise ValueError("standard_error must be finite and >= 0")
        if not math.isfinite(self.mean):
            raise ValueError("mean must be finite")


@dataclass(frozen=True)
class MomentCheck:
    """One closed-form moment versus its empirical estimate."""

    name: str
    closed_form: float
    empirical: float
    standard_error: float
    z_score: float


def _shrink(k: float) -> float:
    """``k / (k + 1)`` with the pure-LoS sentinel mapping to exactly 1."""
    if math.isinf(k):
        return 1.0
    return k / (k + 1.0)


def _inv1p(k: float) -> float:
    """``1 / (k + 1)`` with the pure-LoS sentinel mapping to exactly 0."""
    if math.isinf(k):
        return 0.0
    return 1.0 / (k + 1.0)


def derived_constants(params: SystemParams, case: CsiCase) -> DerivedConstants:
    r"""Evaluate every closed-form constant of the rate upper bound.

    The Rician mixing coefficients enter through
    ``tau_cru = (k_cr / (k_cr + 1)) * (k_ru / (k_ru + 1))`` (pure-LoS sentinels
    contribute a factor of exactly 1).  The statistic-case interference NLoS
    constant uses the singularity-free form

    ``1 - tau_iru + (k_ir / ((k_ir + 1) (k_ru + 1))) * (y_ir - m_i n_i) / (m_i n_i)``

    which is exact for every ``k_ru >= 0`` including 0.
    """
    if not isinstance(case, CsiCase):
        raise TypeError(f"case must be a CsiCase, got {case!r}")
    d = params.d_over_lambda
    theta_ru = phase_offset_grid(d, params.phi_ru_h, params.phi_ru_v, params.m_r, params.n_r)
    theta_sru = theta_ru - phase_offset_grid(d, params.delta_sr_h, params.delta_sr_v, params.m_r, params.n_r)
    theta_iru = theta_ru - phase_offset_grid(d, params.delta_ir_h, params.delta_ir_v, params.m_r, params.n_r)
    theta_ir = phase_offset_grid(d, params.phi_ir_h, params.phi_ir_v, params.m_i, params.n_i)
    y_ir = float(abs(np.exp(1j * theta_ir).sum()) ** 2)

    tau_sru = _shrink(params.k_sr) * _shrink(params.k_ru)
    tau_iru = _shrink(params.k_ir) * _shrink(params.k_ru)
    n_s = params.n_signal
    n_i = params.n_interf
    n_r = params.n_irs
    reflected_s = params.alpha_sr * params.alpha_ru
    reflected_i = params.alpha_ir * params.alpha_ru

    a_sru_los = params.p_s * n_s * reflected_s * tau_sru
    a_iu = params.p_i * params.alpha_iu + params.sigma2
    if case is CsiCase.INSTANT:
        a_su = params.p_s * n_s * params.alpha_su
        a_iru_los = params.p_i * reflected_i * tau_iru
        a_sru_nlos = params.p_s * n_s * reflected_s * n_r * (1.0 - tau_sru)
        a_iru_nlos = params.p_i * reflected_i * n_r * (1.0 - tau_iru)
    else:
        a_su = params.p_s * params.alpha_su
        a_iru_los = params.p_i * reflected_i * tau_iru * y_ir / n_i
        # The subtractions below can leave a tiny negative float residue; clamp at 0.
        nlos_s = 1.0 - tau_sru - (n_s - 1) / n_s * _inv1p(params.k_sr)
        a_sru_nlos = params.p_s * n_s * reflected_s * n_r * max(0.0, nlos_s)
        nlos_i = 1.0 - tau_iru + _shrink(params.k_ir) * _inv1p(params.k_ru) * (y_ir - n_i) / n_i
        a_iru_nlos = params.p_i * reflected_i * n_r * max(0.0, nlos_i)
    eta = a_sru_los * (a_iru_nlos + a_iu) - a_iru_los * (a_sru_nlos + a_su)

    return DerivedConstants(
        tau_sru=tau_sru,
        tau_iru=tau_iru,
        theta_sru=theta_sru.reshape(params.m_r, params.n_r),
        theta_iru=theta_iru.reshape(params.m_r, params.n_r),
        theta_ir=theta_ir.reshape(params.m_i, params.n_i),
        y_ir=y_ir,
        a_sru_los=a_sru_los,
        a_su=a_su,
        a_iru_los=a_iru_los,
        a_iu=a_iu,
        a_sru_nlos=a_sru_nlos,
        a_iru_nlos=a_iru_nlos,
        eta=eta,
        csi_case=case,
    )


def y_los(phi, theta) -> float:
    r"""Coherent LoS sum power ``|sum_mn exp(1j (theta[m,n] + phi[m,n]))|^2``.

    ``phi`` may be a :class:`~irsphase.channel.PhaseShiftMatrix` or a plain grid
    of the same shape as ``theta``.  The value lies in ``[0, (m n)^2]``.
    """
    phi_arr = phi.phi if isinstance(phi, PhaseShiftMatrix) else np.asarray(phi, dtype=np.float64)
    theta_arr = np.asarray(theta, dtype=np.float64)
    if phi_arr.shape != theta_arr.shape:
        raise ValueError(f"phase grid shape {phi_arr.shape} != offset grid shape {theta_arr.shape}")
    return float(abs(np.exp(1j * (theta_arr + phi_arr)).sum()) ** 2)


def sinr_upper_bound(constants: DerivedConstants, phi) -> float:
    """Ratio of the closed-form SINR moments at the given phase configuration.

    Returns ``E[signal power] / E[interference-plus-noise power]``, the
    quantity the optimizers maximize.  Both moments are exact; see
    :func:`validate_moments`.  Note that the rate proxy built from this value
    (:func:`rate_upper_bound`) is an approximation rather than a guaranteed
    bound: ``E[log2(1 + N/D)] <= log2(1 + E[N]/E[D])`` can fail when the
    denominator is random, i.e. when interference is comparable to noise.
    """
    num = constants.a_sru_los * y_los(phi, constants.theta_sru) + constants.a_sru_nlos + constants.a_su
    den = constants.a_iru_los * y_los(phi, constants.theta_iru) + constants.a_iru_nlos + constants.a_iu
    return num / den


def rate_upper_bound(constants: DerivedConstants, phi) -> float:
    """Rate proxy ``log2(1 + sinr_upper_bound)`` in bits/s/Hz.

    This is the moment-matched approximation of the average rate that the
    phase-shift designs optimize.  It is an upper bound on the Monte Carlo
    average whenever noise dominates the interference (deterministic
    denominator, Jensen), and empirically tracks the average within a few
    hundredths of a bit elsewhere, but it is *not* a universal upper bound:
    with interference comparable to noise the random denominator adds positive
    curvature that can push the true average a small amount above this value
    (most visibly in the instantaneous-CSI case).  Use
    :func:`monte_carlo_rate` when a statistically controlled estimate of the
    achieved rate is needed.
    """
    return math.log2(1.0 + sinr_upper_bound(constants, phi))


def _equivalent_rows(realization: ChannelRealization, phi: PhaseShiftMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Equivalent rows (reflected path plus direct path) for one realization."""
    u = np.conj(realization.h_ru) * phi.coefficients()
    e_s = u @ realization.h_sr + np.conj(realization.h_su)
    e_i = u @ realization.h_ir + np.conj(realization.h_iu)
    return e_s, e_i


def beamformer(
    case: CsiCase,
    realization: ChannelRealization | None,
    los: LosComponents,
    phi: PhaseShiftMatrix,
    side: Side,
) -> np.ndarray:
    r"""Unit-norm transmit beamformer for one BS under the given CSI case.

    * instant / signal: MRT on the realized equivalent row ``h^H_ru Phi H_sr + h^H_su``.
    * instant / interference: MRT on the interferer's own-user channel ``h_iu_prime``.
    * statistic / signal: MRT on the LoS equivalent row ``hbar^H_ru Phi Hbar_sr``.
    * statistic / interference: the uniform vector ``1 / sqrt(m_i n_i)``.

    Raises :class:`DegenerateChannelError` when the channel being matched is
    exactly zero (possible only through exact LoS cancellation or zeroed links).
    """
    if side is Side.INTERFERENCE:
        if case is CsiCase.STATISTIC:
            n = los.h_bar_ir.shape[1] if realization is None else realization.h_iu.shape[0]
            return np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)
        if realization is None:
            raise ValueError("instant-case beamformers need a channel realization")
        norm = float(np.linalg.norm(realization.h_iu_prime))
        if norm == 0.0:
            raise DegenerateChannelError("interferer own-user channel is exactly zero")
        return realization.h_iu_prime / norm
    if case is CsiCase.INSTANT:
        if realization is None:
            raise ValueError("instant-case beamformers need a channel realization")
        row, _ = _equivalent_rows(realization, phi)
    else:
        row = (np.conj(los.h_bar_ru) * phi.coefficients()) @ los.h_bar_sr
    norm = float(np.linalg.norm(row))
    if norm == 0.0:
        raise DegenerateChannelError("equivalent signal channel is exactly zero")
    return np.conj(row) / norm


def sinr_instant(realization: ChannelRealization, phi: PhaseShiftMatrix, params: SystemParams) -> float:
    r"""Per-realization SINR with instant-CSI MRT at both base stations.

    The average over the interferer's own-user beamformer is carried out in
    closed form, leaving ``p_i / (m_i n_i)`` times the squared norm of the
    equivalent interference row.
    """
    e_s, e_i = _equivalent_rows(realization, phi)
    num = params.p_s * float(np.linalg.norm(e_s)) ** 2
    den = params.p_i / params.n_interf * float(np.linalg.norm(e_i)) ** 2 + params.sigma2
    return num / den


def sinr_statistic(
    realization: ChannelRealization,
    phi: PhaseShiftMatrix,
    params: SystemParams,
    los: LosComponents,
) -> float:
    r"""Per-realization SINR with statistics-adaptive beamformers.

    The numerator projects the realized equivalent row onto the LoS-matched
    beamformer; the interference-plus-noise term is its exact expectation, a
    deterministic function of the phase configuration.
    """
    w = beamformer(CsiCase.STATISTIC, realization, los, phi, Side.SIGNAL)
    e_s, _ = _equivalent_rows(realization, phi)
    constants = derived_constants(params, CsiCase.STATISTIC)
    num = params.p_s * float(abs(e_s @ w)) ** 2
    den = constants.a_iru_los * y_los(phi, constants.theta_iru) + constants.a_iru_nlos + constants.a_iu
    return num / den


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Counter-based generator for one sample block, keyed by ``(seed, block)``."""
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    if not 0 <= block < _SEED_LIMIT:
        raise ValueError(f"block index must fit in an unsigned 64-bit integer, got {block}")
    key = np.array([seed, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class _EquivalentSampler:
    """Precomputed quantities for block sampling of the equivalent rows."""

    params: SystemParams
    exp_phi: np.ndarray
    a_irs_sr_conj: np.ndarray
    a_bs_sr: np.ndarray
    a_irs_ir_conj: np.ndarray
    a_bs_ir: np.ndarray
    h_bar_ru: np.ndarray

    def sample_block(self, seed: int, block: int) -> tuple[np.ndarray, np.ndarray]:
        r"""Draw one full block of equivalent rows ``(e_s, e_i)``.

        Per-block draw order (fixed): direct signal link, direct interference
        link, IRS-to-user NLoS, signal reflected-path gaussian, interference
        reflected-path gaussian.  Always draws the full block; callers slice.
        """
        p = self.params
        rng = block_generator(seed, block)
        b = MONTE_CARLO_BLOCK
        h_su = math.sqrt(p.alpha_su) * complex_normal(rng, (b, p.n_signal))
        h_iu = math.sqrt(p.alpha_iu) * complex_normal(rng, (b, p.n_interf))
        ru_t = complex_normal(rng, (b, p.n_irs))
        g_s = complex_normal(rng, (b, p.n_signal))
        g_i = complex_normal(rng, (b, p.n_interf))

        a_ru, b_ru = los_weights(p.k_ru)
        h_ru = math.sqrt(p.alpha_ru) * (a_ru * self.h_bar_ru[None, :] + b_ru * ru_t)
        u = np.conj(h_ru) * self.exp_phi[None, :]
        u_norm = np.linalg.norm(u, axis=1)

        a_sr, b_sr = los_weights(p.k_sr)
        s_s = u @ self.a_irs_sr_conj
        e_s = (
            math.sqrt(p.alpha_sr)
            * (a_sr * s_s[:, None] * self.a_bs_sr[None, :] + b_sr * u_norm[:, None] * g_s)
            + np.conj(h_su)
        )
        a_ir, b_ir = los_weights(p.k_ir)
        s_i = u @ self.a_irs_ir_conj
        e_i = (
            math.sqrt(p.alpha_ir)
            * (a_ir * s_i[:, None] * self.a_bs_ir[None, :] + b_ir * u_norm[:, None] * g_i)
            + np.conj(h_iu)
        )
        return e_s, e_i


def _make_sampler(params: SystemParams, phi: PhaseShiftMatrix) -> _EquivalentSampler:
    if phi.phi.shape != (params.m_r, params.n_r):
        raise ValueError(
            f"phase grid shape {phi.phi.shape} does not match IRS shape {(params.m_r, params.n_r)}"
        )
    los = los_components(params)
    # The LoS matrices are rank-1 outer products; the sampler keeps the two
    # steering factors separate so the reflected path costs O(n) per draw.
    a_irs_sr = steering_vector(params.delta_sr_h, params.delta_sr_v, params.m_r, params.n_r, params.d_over_lambda)
    a_irs_ir = steering_vector(params.delta_ir_h, params.delta_ir_v, params.m_r, params.n_r, params.d_over_lambda)
    a_bs_sr = steering_vector(params.phi_sr_h, params.phi_sr_v, params.m_s, params.n_s, params.d_over_lambda)
    a_bs_ir = steering_vector(params.phi_ir_h, params.phi_ir_v, params.m_i, params.n_i, params.d_over_lambda)
    return _EquivalentSampler(
        params=params,
        exp_phi=phi.coefficients(),
        a_irs_sr_conj=np.conj(a_irs_sr),
        a_bs_sr=a_bs_sr,
        a_irs_ir_conj=np.conj(a_irs_ir),
        a_bs_ir=a_bs_ir,
        h_bar_ru=los.h_bar_ru,
    )


def sample_equivalent_rows(
    params: SystemParams, phi: PhaseShiftMatrix, n_samples: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    r"""Sample equivalent rows for ``n_samples`` draws.

    Returns ``(e_s, e_i)`` with shapes ``(n_samples, m_s n_s)`` and
    ``(n_samples, m_i n_i)``; row ``t`` depends only on ``(seed, t)``.  The
    distribution matches building the rows from
    :func:`~irsphase.channel.sample_realization` draws.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    sampler = _make_sampler(params, phi)
    e_s = np.empty((n_samples, params.n_signal), dtype=np.complex128)
    e_i = np.empty((n_samples, params.n_interf), dtype=np.complex128)
    for start in range(0, n_samples, MONTE_CARLO_BLOCK):
        block = start // MONTE_CARLO_BLOCK
        keep = min(MONTE_CARLO_BLOCK, n_samples - start)
        bs, bi = sampler.sample_block(seed, block)
        e_s[start : start + keep] = bs[:keep]
        e_i[start : start + keep] = bi[:keep]
    return e_s, e_i


def _statistic_numerator_beamformer(params: SystemParams, phi: PhaseShiftMatrix) -> np.ndarray:
    los = los_components(params)
    return beamformer(CsiCase.STATISTIC, None, los, phi, Side.SIGNAL)


def _gamma_samples(
    params: SystemParams,
    phi: PhaseShiftMatrix,
    case: CsiCase,
    e_s: np.ndarray,
    e_i: np.ndarray,
) -> np.ndarray:
    if case is CsiCase.INSTANT:
        num = params.p_s * np.sum(np.abs(e_s) ** 2, axis=1)
        den = params.p_i / params.n_interf * np.sum(np.abs(e_i) ** 2, axis=1) + params.sigma2
        return num / den
    w = _statistic_numerator_beamformer(params, phi)
    constants = derived_constants(params, CsiCase.STATISTIC)
    den = constants.a_iru_los * y_los(phi, constants.theta_iru) + constants.a_iru_nlos + constants.a_iu
    num = params.p_s * np.abs(e_s @ w) ** 2
    return num / den


def monte_carlo_rate(
    params: SystemParams,
    phi: PhaseShiftMatrix,
    case: CsiCase,
    n_samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
) -> RateEstimate:
    r"""Sample mean and standard error of ``log2(1 + sinr)`` over i.i.d. draws.

    Deterministic given ``seed``: sample ``t`` depends only on ``(seed, t)`` and
    the mean is reduced over a canonical sample-indexed array (numpy pairwise
    summation), so any parallel schedule that fills the same array bit-exactly
    reproduces the serial result.  ``standard_error`` is 0 when ``n_samples`` is 1.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if not isinstance(case, CsiCase):
        raise TypeError(f"case must be a CsiCase, got {case!r}")
    sampler = _make_sampler(params, phi)
    rates = np.empty(n_samples, dtype=np.float64)
    for start in range(0, n_samples, MONTE_CARLO_BLOCK):
        block = start // MONTE_CARLO_BLOCK
        keep = min(MONTE_CARLO_BLOCK, n_samples - start)
        e_s, e_i = sampler.sample_block(seed, block)
        gamma = _gamma_samples(params, phi, case, e_s[:keep], e_i[:keep])
        rates[start : start + keep] = np.log2(1.0 + gamma)
    mean = float(np.mean(rates))
    if n_samples == 1:
        se = 0.0
    else:
        se = float(math.sqrt(np.var(rates, ddof=1) / n_samples))
    return RateEstimate(mean=mean, standard_error=se, n_samples=n_samples)


def _moment_check(name: str, closed: float, samples: np.ndarray) -> MomentCheck:
    n = samples.size
    empirical = float(np.mean(samples))
    if n > 1:
        se = float(math.sqrt(np.var(samples, ddof=1) / n))
    else:
        se = 0.0
    diff = empirical - closed
    # Deterministic samples (e.g. every link pure-LoS) can carry a float-noise
    # spread many orders below the mean; a z-score of two roundoff residues is
    # meaningless, so classify those cases as exact/inexact instead.  Any
    # genuine Monte Carlo spread has se/mean >= ~1/sqrt(n), far above 1e-12.
    if se <= 1e-12 * max(abs(closed), abs(empirical)):
        z = 0.0 if math.isclose(empirical, closed, rel_tol=1e-9, abs_tol=1e-300) else math.inf
    else:
        z = diff / se
    return MomentCheck(name=name, closed_form=closed, empirical=empirical, standard_error=se, z_score=z)


def validate_moments(
    params: SystemParams,
    phi: PhaseShiftMatrix,
    case: CsiCase,
    n_samples: int = 100_000,
    seed: int = 0,
) -> list[MomentCheck]:
    r"""Compare the closed-form SINR moments against empirical estimates.

    For the given CSI case, checks the two moments that make up the SINR bound:
    the expected signal power (numerator) and the expected interference-plus-noise
    power (denominator), each against ``a_*`` constants evaluated at ``phi``.
    Returns one :class:`MomentCheck` per moment with its z-score
    ``(empirical - closed) / standard_error``.
    """
    if n_samples < 1000:
        raise ValueError("validate_moments needs n_samples >= 1000")
    constants = derived_constants(params, case)
    e_s, e_i = sample_equivalent_rows(params, phi, n_samples, seed)
    y_s = y_los(phi, constants.theta_sru)
    y_i = y_los(phi, constants.theta_iru)
    closed_signal = constants.a_sru_los * y_s + constants.a_sru_nlos + constants.a_su
    closed_interf = constants.a_iru_los * y_i + constants.a_iru_nlos + constants.a_iu
    if case is CsiCase.INSTANT:
        signal_samples = params.p_s * np.sum(np.abs(e_s) ** 2, axis=1)
        interf_samples = params.p_i / params.n_interf * np.sum(np.abs(e_i) ** 2, axis=1) + params.sigma2
    else:
        w_s = _statistic_numerator_beamformer(params, phi)
        n_i = params.n_interf
        w_i = np.full(n_i, 1.0 / math.sqrt(n_i), dtype=np.complex128)
        signal_samples = params.p_s * np.abs(e_s @ w_s) ** 2
        interf_samples = params.p_i * np.abs(e_i @ w_i) ** 2 + params.sigma2
    return [
        _moment_check("signal_power", closed_signal, signal_samples),
        _moment_check("interference_plus_noise", closed_interf, interf_samples),
    ]
