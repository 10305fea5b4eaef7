r"""Phase-shift optimization for the closed-form rate bound and per-realization SINR.

The bound's phase dependence enters only through the two coherent sums
``S_c(phi) = sum_mn exp(1j (theta_c[m,n] + phi[m,n]))`` (``c`` in {signal,
interference}).  Freezing every element except ``(m, n)`` reduces the bound to a
ratio of shifted cosines

``g(phi) = (b_num cos(phi + ang_num) + c_num) / (b_den cos(phi + ang_den) + c_den)``

whose stationary points on the circle solve
``b1 sin(phi) + b2 cos(phi) = b_num b_den sin(ang_num - ang_den) / (2 ...)``
after clearing the (strictly positive) denominator; concretely, with

``b1 = c_num b_den cos(ang_den) - b_num c_den cos(ang_num)``
``b2 = c_num b_den sin(ang_den) - b_num c_den sin(ang_num)``

the two candidates are ``atan2(b1, b2) +/- arccos(clip(c / hypot(b1, b2), -1, 1))``
with ``c = b_num b_den sin(ang_num - ang_den)``; evaluating both and keeping the
better one yields the exact per-coordinate maximizer.  The same solver drives:

* :func:`coordinate_optimum` / :func:`pcd`: maximize the closed-form SINR bound,
  either with relaxed simultaneous updates (parallel mode, diminishing stepsize
  ``rho0 / (t + 1)**kappa``) or exact row-major sweeps (sequential mode).
* :func:`optimize_instant_adaptive`: maximize one realization's instant-CSI SINR,
  whose per-coordinate restriction has the identical shifted-cosine shape.

Closed-form global optima exist in four special structures
(:func:`classify` / :func:`solve_special`), and uniform phase quantization
comes with closed-form degradation bounds (:func:`degradation_bound`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, PhaseShiftMatrix, SystemParams
from .rate import CsiCase, DerivedConstants, derived_constants

__all__ = [
    "DEFAULT_ANGLE_TOL",
    "SpecialCase",
    "Mode",
    "TerminationReason",
    "PcdConfig",
    "OptimizationTrace",
    "lambda_wrap",
    "classify",
    "solve_special",
    "coordinate_optimum",
    "pcd",
    "optimize_instant_adaptive",
    "quantize",
    "degradation_bound",
]

_TWO_PI = 2.0 * math.pi

#: Default tolerance for treating the two IRS-side arrival angles as equal.
DEFAULT_ANGLE_TOL = 1e-9


class SpecialCase(enum.Enum):
    """Structure tags with known globally optimal phase configurations."""

    SINGLE_ELEMENT = "single_element"
    SYMMETRIC_POSITIVE_ETA = "symmetric_positive_eta"
    SYMMETRIC_NONPOSITIVE_ETA = "symmetric_nonpositive_eta"
    NO_INTERFERENCE = "no_interference"
    GENERAL = "general"


class Mode(enum.Enum):
    """Coordinate-update schedule."""

    PARALLEL = "parallel"
    SEQUENTIAL = "sequential"


class TerminationReason(enum.Enum):
    """Why an optimization run stopped."""

    TOLERANCE = "tolerance"
    MAX_ITER = "max_iter"


@dataclass(frozen=True)
class PcdConfig:
    r"""Coordinate-descent settings.

    Parallel mode blends each coordinate toward its optimum with stepsize
    ``rho0 / (t + 1)**kappa``; ``kappa`` in ``(0.5, 1]`` makes the stepsizes
    non-summable with summable squares.  ``tol`` bounds the best single-coordinate
    improvement (parallel) or the per-sweep objective gain (sequential) at
    termination.
    """

    rho0: float = 1.0
    kappa: float = 0.75
    tol: float = 1e-6
    max_iter: int = 1000
    mode: Mode = Mode.PARALLEL

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rho0) and self.rho0 > 0.0):
            raise ValueError(f"rho0 must be > 0, got {self.rho0}")
        if not 0.5 < self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in (0.5, 1], got {self.kappa}")
        if not (math.isfinite(self.tol) and self.tol > 0.0):
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if not isinstance(self.mode, Mode):
            raise TypeError(f"mode must be a Mode, got {self.mode!r}")


@dataclass(frozen=True)
class OptimizationTrace:
    r"""Record of one optimizer run.

    ``objectives[0]`` is the objective at the initial point and
    ``objectives[k]`` the value after the ``k``-th applied update
    (iteration in parallel mode, sweep in sequential mode), recorded verbatim;
    parallel iterates may decrease transiently.  ``n_iterations`` counts applied
    updates, so ``len(objectives) == n_iterations + 1``.
    """

    n_iterations: int
    objectives: np.ndarray
    terminated_by: TerminationReason
    final_phases: PhaseShiftMatrix

    def __post_init__(self) -> None:
        arr = np.array(self.objectives, dtype=np.float64, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "objectives", arr)
        if arr.ndim != 1 or arr.size != self.n_iterations + 1:
            raise ValueError("objectives must hold n_iterations + 1 values")


def lambda_wrap(x):
    r"""Wrap angles to ``[0, 2*pi)`` via ``x - 2*pi*floor(x / (2*pi))``.

    A float result that rounds up to exactly ``2*pi`` is mapped to 0 so the
    codomain contract holds bit-for-bit.  Accepts scalars or arrays.
    """
    wrapped = np.mod(x, _TWO_PI)
    wrapped = np.where(wrapped >= _TWO_PI, wrapped - _TWO_PI, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def classify(
    params: SystemParams,
    constants: DerivedConstants,
    angle_tol: float = DEFAULT_ANGLE_TOL,
) -> SpecialCase:
    r"""Tag the instance with the strongest applicable special structure.

    Precedence: single element (one IRS element), then no interference
    (``p_i == 0``), then symmetric arrival angles (``delta_sr == delta_ir``
    componentwise within ``angle_tol``) split by the sign of ``constants.eta``.
    The symmetric nonpositive-eta solution pairs IRS columns, so it needs ``n_r``
    even; odd ``n_r`` falls through to general.
    """
    if params.m_r == 1 and params.n_r == 1:
        return SpecialCase.SINGLE_ELEMENT
    if params.p_i == 0.0:
        return SpecialCase.NO_INTERFERENCE
    symmetric = (
        abs(params.delta_sr_h - params.delta_ir_h) <= angle_tol
        and abs(params.delta_sr_v - params.delta_ir_v) <= angle_tol
    )
    if symmetric:
        if constants.eta > 0.0:
            return SpecialCase.SYMMETRIC_POSITIVE_ETA
        if params.n_r % 2 == 0:
            return SpecialCase.SYMMETRIC_NONPOSITIVE_ETA
    return SpecialCase.GENERAL


def solve_special(case: SpecialCase, constants: DerivedConstants, alpha: float = 0.0) -> PhaseShiftMatrix:
    r"""Globally optimal phases for a special-structure instance.

    * single element: any phase is optimal; returns zeros.
    * symmetric, positive eta: ``Lambda(alpha - theta_iru)`` aligns both coherent
      sums to their maximum ``(m_r n_r)**2``.
    * symmetric, nonpositive eta: column pairs ``(2i-1, 2i)`` are set exactly
      ``pi`` apart in the summed phase, cancelling the coherent sums to 0;
      requires an even number of IRS columns.
    * no interference: ``Lambda(alpha - theta_sru)`` maximizes the signal sum.

    ``alpha`` is a free common phase; choices differing in ``alpha`` give the
    same objective.  The ``case`` argument selects the formula (callers may
    apply the no-interference alignment as a heuristic on general instances);
    passing ``GENERAL`` is a usage error.
    """
    theta_sru = constants.theta_sru
    theta_iru = constants.theta_iru
    if case is SpecialCase.SINGLE_ELEMENT:
        return PhaseShiftMatrix(np.zeros_like(theta_sru))
    if case is SpecialCase.SYMMETRIC_POSITIVE_ETA:
        return PhaseShiftMatrix(lambda_wrap(alpha - theta_iru))
    if case is SpecialCase.SYMMETRIC_NONPOSITIVE_ETA:
        n_r = theta_iru.shape[1]
        if n_r % 2 != 0:
            raise ValueError("the paired cancellation solution needs an even column count")
        phi = np.empty_like(theta_iru)
        odd = theta_iru[:, 0::2]
        even = theta_iru[:, 1::2]
        phi[:, 0::2] = lambda_wrap(alpha - odd)
        phi[:, 1::2] = lambda_wrap(alpha - odd + math.pi - (even - odd))
        return PhaseShiftMatrix(phi)
    if case is SpecialCase.NO_INTERFERENCE:
        return PhaseShiftMatrix(lambda_wrap(alpha - theta_sru))
    raise ValueError("no closed form exists for the general case; use pcd")


def _best_phase(b_num, ang_num, c_num, b_den, ang_den, c_den, phi_cur):
    r"""Maximize ``(b_num cos(x + ang_num) + c_num) / (b_den cos(x + ang_den) + c_den)``.

    Vectorized over broadcastable array inputs.  The denominator must be
    strictly positive for all ``x`` (``c_den > b_den >= 0``).  Returns
    ``(x_best, value_best)`` with ``x_best`` wrapped to ``[0, 2*pi)``; where the
    objective is constant (or no stationary equation exists numerically) the
    current phase is kept.
    """
    b_num = np.asarray(b_num, dtype=np.float64)
    ang_num = np.asarray(ang_num, dtype=np.float64)
    c_num = np.asarray(c_num, dtype=np.float64)
    b_den = np.asarray(b_den, dtype=np.float64)
    ang_den = np.asarray(ang_den, dtype=np.float64)
    c_den = np.asarray(c_den, dtype=np.float64)
    phi_cur = np.asarray(phi_cur, dtype=np.float64)

    def value(x):
        return (b_num * np.cos(x + ang_num) + c_num) / (b_den * np.cos(x + ang_den) + c_den)

    b1 = c_num * b_den * np.cos(ang_den) - b_num * c_den * np.cos(ang_num)
    b2 = c_num * b_den * np.sin(ang_den) - b_num * c_den * np.sin(ang_num)
    c = b_num * b_den * np.sin(ang_num - ang_den)
    r = np.hypot(b1, b2)
    safe = r > 0.0
    ratio = np.clip(np.divide(c, r, out=np.zeros_like(r), where=safe), -1.0, 1.0)
    spread = np.arccos(ratio)
    chi = np.arctan2(b1, b2)
    cand_hi = chi + spread
    cand_lo = chi - spread

    val_cur = value(phi_cur)
    val_hi = value(cand_hi)
    val_lo = value(cand_lo)
    best = np.where(val_hi >= val_lo, cand_hi, cand_lo)
    best_val = np.maximum(val_hi, val_lo)
    # Keep the current phase when the subproblem is degenerate or (through
    # roundoff) no candidate beats it.
    keep = ~safe | (val_cur >= best_val)
    best = np.where(keep, phi_cur, best)
    best_val = np.where(keep, val_cur, best_val)
    return lambda_wrap(best), best_val


def _bound_terms(constants: DerivedConstants, phi_grid: np.ndarray):
    """Per-element phasors and totals of the two coherent sums."""
    term_s = np.exp(1j * (constants.theta_sru + phi_grid))
    term_i = np.exp(1j * (constants.theta_iru + phi_grid))
    return term_s, term_i, term_s.sum(), term_i.sum()


def _bound_value(constants: DerivedConstants, phi_grid: np.ndarray) -> float:
    s = np.exp(1j * (constants.theta_sru + phi_grid)).sum()
    si = np.exp(1j * (constants.theta_iru + phi_grid)).sum()
    num = constants.a_sru_los * float(abs(s)) ** 2 + constants.a_sru_nlos + constants.a_su
    den = constants.a_iru_los * float(abs(si)) ** 2 + constants.a_iru_nlos + constants.a_iu
    return num / den


def _bound_coordinate_inputs(constants: DerivedConstants, s_lo, i_lo, theta_s, theta_i):
    r"""Shifted-cosine coefficients of the bound in one (or each) coordinate.

    ``s_lo`` / ``i_lo`` are the leave-one-out coherent sums and ``theta_s`` /
    ``theta_i`` the offsets of the coordinate(s) being solved; scalars and
    same-shape arrays are both accepted.
    """
    abs_s = np.abs(s_lo)
    abs_i = np.abs(i_lo)
    b_num = 2.0 * constants.a_sru_los * abs_s
    c_num = constants.a_sru_los * (1.0 + abs_s**2) + constants.a_sru_nlos + constants.a_su
    b_den = 2.0 * constants.a_iru_los * abs_i
    c_den = constants.a_iru_los * (1.0 + abs_i**2) + constants.a_iru_nlos + constants.a_iu
    ang_num = theta_s - np.angle(s_lo)
    ang_den = theta_i - np.angle(i_lo)
    return b_num, ang_num, c_num, b_den, ang_den, c_den


def coordinate_optimum(phi: PhaseShiftMatrix, constants: DerivedConstants, m: int, n: int) -> float:
    r"""Exact maximizer of the SINR bound over element ``(m, n)``'s phase alone.

    ``m`` and ``n`` are 0-based grid indices.  All other phases are held at
    their values in ``phi``.  Returns a phase in ``[0, 2*pi)``; if the bound does
    not depend on this coordinate, the current phase is returned unchanged.
    """
    grid = phi.phi
    if not (0 <= m < grid.shape[0] and 0 <= n < grid.shape[1]):
        raise IndexError(f"element index ({m}, {n}) outside grid {grid.shape}")
    if grid.shape != constants.theta_sru.shape:
        raise ValueError("phase grid and constants describe different IRS shapes")
    term_s, term_i, s_tot, i_tot = _bound_terms(constants, grid)
    s_lo = s_tot - term_s[m, n]
    i_lo = i_tot - term_i[m, n]
    coeffs = _bound_coordinate_inputs(
        constants, s_lo, i_lo, constants.theta_sru[m, n], constants.theta_iru[m, n]
    )
    best, _ = _best_phase(*coeffs, grid[m, n])
    return float(best)


def _wrap_step(phi_bar: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Signed displacement to the representative of phi_bar within pi of phi."""
    return np.mod(phi_bar - phi + math.pi, _TWO_PI) - math.pi


def _pcd_parallel(constants: DerivedConstants, init: np.ndarray, config: PcdConfig):
    phi = init.copy()
    gamma = _bound_value(constants, phi)
    objectives = [gamma]
    terminated = TerminationReason.MAX_ITER
    for t in range(config.max_iter):
        term_s, term_i, s_tot, i_tot = _bound_terms(constants, phi)
        s_lo = s_tot - term_s
        i_lo = i_tot - term_i
        coeffs = _bound_coordinate_inputs(
            constants, s_lo, i_lo, constants.theta_sru, constants.theta_iru
        )
        phi_bar, best_val = _best_phase(*coeffs, phi)
        # best_val[m, n] is the bound after moving only (m, n) to its optimum;
        # stop when no single coordinate can improve by more than tol.
        if float(best_val.max()) - gamma <= config.tol:
            terminated = TerminationReason.TOLERANCE
            break
        rho = config.rho0 / (t + 1.0) ** config.kappa
        phi = lambda_wrap(phi + rho * _wrap_step(phi_bar, phi))
        gamma = _bound_value(constants, phi)
        objectives.append(gamma)
    return phi, objectives, terminated


def _pcd_sequential(constants: DerivedConstants, init: np.ndarray, config: PcdConfig):
    phi = init.copy()
    m_r, n_r = phi.shape
    gamma = _bound_value(constants, phi)
    objectives = [gamma]
    terminated = TerminationReason.MAX_ITER
    for _ in range(config.max_iter):
        gamma_old = gamma
        term_s, term_i, s_tot, i_tot = _bound_terms(constants, phi)
        for m in range(m_r):
            for n in range(n_r):
                s_lo = s_tot - term_s[m, n]
                i_lo = i_tot - term_i[m, n]
                coeffs = _bound_coordinate_inputs(
                    constants, s_lo, i_lo, constants.theta_sru[m, n], constants.theta_iru[m, n]
                )
                best, _ = _best_phase(*coeffs, phi[m, n])
                phi[m, n] = float(best)
                new_s = np.exp(1j * (constants.theta_sru[m, n] + phi[m, n]))
                new_i = np.exp(1j * (constants.theta_iru[m, n] + phi[m, n]))
                s_tot = s_lo + new_s
                i_tot = i_lo + new_i
                term_s[m, n] = new_s
                term_i[m, n] = new_i
        gamma = _bound_value(constants, phi)
        objectives.append(gamma)
        if gamma - gamma_old <= config.tol:
            terminated = TerminationReason.TOLERANCE
            break
    return phi, objectives, terminated


def pcd(
    params: SystemParams,
    constants: DerivedConstants,
    init: PhaseShiftMatrix,
    config: PcdConfig | None = None,
) -> tuple[PhaseShiftMatrix, OptimizationTrace]:
    r"""Coordinate descent on the closed-form SINR bound.

    Parallel mode computes every coordinate's exact optimum from the same
    iterate, then applies the relaxed update
    ``phi <- Lambda(phi + rho_t * step)`` where ``step`` is the on-circle
    displacement toward the optimum (representative within ``+-pi``) and
    ``rho_t = rho0 / (t + 1)**kappa``; it stops when the best single-coordinate
    improvement is at most ``tol``.  Sequential mode performs exact row-major
    sweeps (monotone) and stops when a full sweep gains at most ``tol``.

    Returns the final phases and a verbatim trace.
    """
    if config is None:
        config = PcdConfig()
    if init.phi.shape != (params.m_r, params.n_r):
        raise ValueError("init shape does not match the IRS dimensions in params")
    if constants.theta_sru.shape != (params.m_r, params.n_r):
        raise ValueError("constants and params describe different IRS shapes")
    if config.mode is Mode.PARALLEL:
        phi, objectives, terminated = _pcd_parallel(constants, init.phi, config)
    else:
        phi, objectives, terminated = _pcd_sequential(constants, init.phi, config)
    result = PhaseShiftMatrix(phi)
    trace = OptimizationTrace(
        n_iterations=len(objectives) - 1,
        objectives=np.asarray(objectives),
        terminated_by=terminated,
        final_phases=result,
    )
    return result, trace


class _InstantObjective:
    r"""One realization's instant-CSI SINR as a function of the phase grid.

    Maintains the running equivalent rows
    ``e_s = sum_k exp(1j phi_k) v_s[k] + conj(h_su)`` (and the interference
    analog), where ``v_c[k] = conj(h_ru)[k] * H_c[k, :]``.
    """

    def __init__(self, realization: ChannelRealization, params: SystemParams):
        self.p_s = params.p_s
        self.p_i_eff = params.p_i / params.n_interf
        self.sigma2 = params.sigma2
        u = np.conj(realization.h_ru)
        self.v_s = u[:, None] * realization.h_sr
        self.v_i = u[:, None] * realization.h_ir
        self.d_s = np.conj(realization.h_su)
        self.d_i = np.conj(realization.h_iu)
        self.v_s_norm2 = np.sum(np.abs(self.v_s) ** 2, axis=1)
        self.v_i_norm2 = np.sum(np.abs(self.v_i) ** 2, axis=1)

    def rows(self, phi_flat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        coeff = np.exp(1j * phi_flat)
        e_s = coeff @ self.v_s + self.d_s
        e_i = coeff @ self.v_i + self.d_i
        return e_s, e_i

    def gamma(self, phi_flat: np.ndarray) -> float:
        e_s, e_i = self.rows(phi_flat)
        num = self.p_s * float(np.linalg.norm(e_s)) ** 2
        den = self.p_i_eff * float(np.linalg.norm(e_i)) ** 2 + self.sigma2
        return num / den

    def coordinate_inputs(self, phi_flat: np.ndarray):
        """Vectorized leave-one-out cosine coefficients for all coordinates."""
        coeff = np.exp(1j * phi_flat)
        e_s = coeff @ self.v_s + self.d_s
        e_i = coeff @ self.v_i + self.d_i
        c_s = e_s[None, :] - coeff[:, None] * self.v_s
        c_i = e_i[None, :] - coeff[:, None] * self.v_i
        inner_s = np.sum(self.v_s * np.conj(c_s), axis=1)
        inner_i = np.sum(self.v_i * np.conj(c_i), axis=1)
        c_s_norm2 = np.sum(np.abs(c_s) ** 2, axis=1)
        c_i_norm2 = np.sum(np.abs(c_i) ** 2, axis=1)
        b_num = 2.0 * self.p_s * np.abs(inner_s)
        ang_num = np.angle(inner_s)
        c_num = self.p_s * (c_s_norm2 + self.v_s_norm2)
        b_den = 2.0 * self.p_i_eff * np.abs(inner_i)
        ang_den = np.angle(inner_i)
        c_den = self.p_i_eff * (c_i_norm2 + self.v_i_norm2) + self.sigma2
        return b_num, ang_num, c_num, b_den, ang_den, c_den


def _instant_sweep(obj: _InstantObjective, phi_flat: np.ndarray) -> float:
    """One exact in-place coordinate sweep; returns the best single improvement."""
    best_improvement = 0.0
    coeff = np.exp(1j * phi_flat)
    e_s = coeff @ obj.v_s + obj.d_s
    e_i = coeff @ obj.v_i + obj.d_i
    for k in range(phi_flat.size):
        ck = np.exp(1j * phi_flat[k])
        c_s = e_s - ck * obj.v_s[k]
        c_i = e_i - ck * obj.v_i[k]
        inner_s = np.sum(obj.v_s[k] * np.conj(c_s))
        inner_i = np.sum(obj.v_i[k] * np.conj(c_i))
        b_num = 2.0 * obj.p_s * abs(inner_s)
        c_num = obj.p_s * (float(np.linalg.norm(c_s)) ** 2 + obj.v_s_norm2[k])
        b_den = 2.0 * obj.p_i_eff * abs(inner_i)
        c_den = obj.p_i_eff * (float(np.linalg.norm(c_i)) ** 2 + obj.v_i_norm2[k]) + obj.sigma2
        ang_num = float(np.angle(inner_s))
        ang_den = float(np.angle(inner_i))

        def local(x):
            return (b_num * math.cos(x + ang_num) + c_num) / (b_den * math.cos(x + ang_den) + c_den)

        val_cur = local(phi_flat[k])
        best, val = _best_phase(b_num, ang_num, c_num, b_den, ang_den, c_den, phi_flat[k])
        phi_flat[k] = float(best)
        best_improvement = max(best_improvement, float(val) - val_cur)
        new_ck = np.exp(1j * phi_flat[k])
        e_s = c_s + new_ck * obj.v_s[k]
        e_i = c_i + new_ck * obj.v_i[k]
    return best_improvement


def optimize_instant_adaptive(
    realization: ChannelRealization,
    params: SystemParams,
    config: PcdConfig | None = None,
) -> PhaseShiftMatrix:
    r"""Maximize one realization's instant-CSI SINR over the phase grid.

    Starts from the signal-LoS-aligned phases (so the result can only improve on
    that heuristic).  Parallel mode applies relaxed simultaneous updates, but an
    update that would lower the SINR is rejected and replaced by one exact
    monotone sweep; sequential mode uses exact sweeps only.  Stops when no
    single coordinate can improve the SINR by more than ``tol``.
    """
    if config is None:
        config = PcdConfig(mode=Mode.SEQUENTIAL)
    constants = derived_constants(params, CsiCase.INSTANT)
    if constants.theta_sru.shape != realization_grid_shape(realization, params):
        raise ValueError("realization does not match the IRS dimensions in params")
    obj = _InstantObjective(realization, params)
    phi = lambda_wrap(-constants.theta_sru).reshape(-1)
    gamma = obj.gamma(phi)
    for t in range(config.max_iter):
        if config.mode is Mode.PARALLEL:
            coeffs = obj.coordinate_inputs(phi)
            phi_bar, best_val = _best_phase(*coeffs, phi)
            if float(np.max(best_val)) - gamma <= config.tol:
                break
            rho = config.rho0 / (t + 1.0) ** config.kappa
            candidate = lambda_wrap(phi + rho * _wrap_step(phi_bar, phi))
            gamma_new = obj.gamma(candidate)
            if gamma_new >= gamma:
                phi = candidate
                gamma = gamma_new
            else:
                improvement = _instant_sweep(obj, phi)
                gamma = obj.gamma(phi)
                if improvement <= config.tol:
                    break
        else:
            improvement = _instant_sweep(obj, phi)
            gamma = obj.gamma(phi)
            if improvement <= config.tol:
                break
    return PhaseShiftMatrix(phi.reshape(constants.theta_sru.shape))


def realization_grid_shape(realization: ChannelRealization, params: SystemParams) -> tuple[int, int]:
    """IRS grid shape implied by a realization, validated against params."""
    n_irs = realization.h_ru.shape[0]
    if n_irs != params.n_irs:
        raise ValueError(
            f"realization has {n_irs} IRS elements, params expect {params.n_irs}"
        )
    return (params.m_r, params.n_r)


def quantize(phi: PhaseShiftMatrix, b: int) -> PhaseShiftMatrix:
    r"""Snap every phase to the nearest point of ``{2 pi k / 2**b}`` on the circle.

    The quantization error never exceeds ``2*pi / 2**(b+1)`` in absolute value.
    """
    if b < 1:
        raise ValueError(f"bit width must be >= 1, got {b}")
    levels = 2**b
    step = _TWO_PI / levels
    k = np.round(phi.phi / step).astype(np.int64) % levels
    return PhaseShiftMatrix(k * step)


def degradation_bound(constants: DerivedConstants, b: int, case: SpecialCase) -> float:
    r"""Closed-form cap on the bound-rate loss from ``b``-bit phase quantization.

    The cap applies to ``rate_upper_bound`` at the case's optimal phases (PCD
    output for the general case).  With ``w = pi / 2**b`` (the worst per-element
    error), ``g = 4 * (floor(mn / 2))**2``, ``sn`` and ``in`` the phase-independent
    numerator and denominator constants:

    * single element: 0 (the bound does not depend on the phase).
    * symmetric positive eta / no interference: optimum at coherent sum
      ``(mn)**2``, quantized value at least ``g cos(w)**2``.
    * symmetric nonpositive eta: optimum at coherent sum 0, quantized value at
      most ``g sin(w)**2``.
    * general: first-order bound ``2 pi mn (mn - 1) |eta| / (2**b ln2 in (sn + in))``.
    """
    if b < 1:
        raise ValueError(f"bit width must be >= 1, got {b}")
    if not isinstance(case, SpecialCase):
        raise TypeError(f"case must be a SpecialCase, got {case!r}")
    mn = constants.n_irs
    sn = constants.a_sru_nlos + constants.a_su
    in_ = constants.a_iru_nlos + constants.a_iu
    a_sl = constants.a_sru_los
    a_il = constants.a_iru_los
    if case is SpecialCase.SINGLE_ELEMENT:
        return 0.0
    if case is SpecialCase.GENERAL:
        return (
            _TWO_PI * mn * (mn - 1) * abs(constants.eta)
            / (2.0**b * math.log(2.0) * in_ * (sn + in_))
        )
    g = 4.0 * (mn // 2) ** 2
    w = math.pi / 2.0**b
    if case is SpecialCase.SYMMETRIC_NONPOSITIVE_ETA:
        y_opt = 0.0
        y_deg = g * math.sin(w) ** 2
    else:
        y_opt = float(mn) ** 2
        y_deg = g * math.cos(w) ** 2
    r_opt = (a_sl * y_opt + sn) / (a_il * y_opt + in_)
    r_deg = (a_sl * y_deg + sn) / (a_il * y_deg + in_)
    return max(0.0, (math.log1p(r_opt) - math.log1p(r_deg)) / math.log(2.0))
