r"""Geometry, URA steering vectors, deterministic LoS components, and random channel sampling.

The scene is a two-cell downlink: a signal base station (BS) serves one user, an
interfering BS serves its own user, and an intelligent reflecting surface (IRS)
with ``m_r * n_r`` passive elements assists the signal link.  Every array is a
uniform rectangular array (URA) in the y-z plane with element spacing ``d`` and
carrier wavelength ``lambda``.

Conventions fixed here and reused by every other module:

* URA entries are row-vectorized: index ``(m, n)`` with ``m = 1..m_dim`` rows and
  ``n = 1..n_dim`` columns maps to flat position ``(m - 1) * n_dim + (n - 1)``
  (C order).  The first entry of every steering vector is exactly ``1 + 0j``.
* Channels that appear in the math as row vectors (``h^H_su``, ``h^H_ru``, ...)
  are stored as their conjugate column counterparts, so ``conj(h_su)`` is the row.
* Rician factors are linear; ``K = math.inf`` (:data:`PURE_LOS`) selects the
  deterministic pure-LoS channel exactly (the NLoS weight is exactly zero).
* All sampling is driven by an explicit :class:`numpy.random.Generator`; a fixed
  generator state yields a bit-identical realization.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PURE_LOS",
    "INTERFERER_X",
    "DEFAULT_PATH_LOSS_EXPONENTS",
    "SystemParams",
    "PhaseShiftMatrix",
    "ChannelRealization",
    "LosComponents",
    "phase_offset",
    "phase_offset_grid",
    "steering_vector",
    "los_components",
    "los_weights",
    "complex_normal",
    "sample_realization",
    "geometry_to_path_losses",
]

#: Sentinel Rician factor selecting a deterministic pure-LoS channel.
PURE_LOS = math.inf

#: x-coordinate of the interfering BS in the canonical plane layout (meters).
INTERFERER_X = 600.0

#: Default path-loss exponents per link family.
DEFAULT_PATH_LOSS_EXPONENTS = {
    "su": 3.7,
    "iu": 3.5,
    "sr": 2.0,
    "ir": 2.0,
    "ru": 3.0,
}

_TWO_PI = 2.0 * math.pi


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


@dataclass(frozen=True)
class SystemParams:
    r"""Immutable scenario description: array sizes, powers, path losses, angles.

    Antenna counts are URA rows/columns: the signal BS has ``m_s * n_s`` antennas,
    the interfering BS ``m_i * n_i``, the IRS ``m_r * n_r`` elements.  Powers
    (``p_s``, ``p_i``) and the noise floor ``sigma2`` are linear watts; path-loss
    gains ``alpha_*`` are linear.  Rician factors ``k_sr``, ``k_ir``, ``k_ru`` are
    linear with :data:`PURE_LOS` meaning a deterministic LoS-only link.  Angles are
    radians: ``delta_*`` are IRS-side arrival angles, ``phi_*`` departure angles;
    the ``_h``/``_v`` suffixes are the horizontal/vertical components.

    ``p_s``, ``p_i`` and the path losses may be zero (useful for switching a BS or
    the reflected path off); ``sigma2`` must be strictly positive.
    """

    m_s: int
    n_s: int
    m_i: int
    n_i: int
    m_r: int
    n_r: int
    d_over_lambda: float
    p_s: float
    p_i: float
    sigma2: float
    alpha_su: float
    alpha_iu: float
    alpha_iu_prime: float
    alpha_sr: float
    alpha_ir: float
    alpha_ru: float
    k_sr: float
    k_ir: float
    k_ru: float
    delta_sr_h: float
    delta_sr_v: float
    delta_ir_h: float
    delta_ir_v: float
    phi_sr_h: float
    phi_sr_v: float
    phi_ir_h: float
    phi_ir_v: float
    phi_ru_h: float
    phi_ru_v: float

    def __post_init__(self) -> None:
        for name in ("m_s", "n_s", "m_i", "n_i", "m_r", "n_r"):
            value = getattr(self, name)
            _require(
                isinstance(value, (int, np.integer)) and not isinstance(value, bool),
                f"{name} must be an integer, got {value!r}",
            )
            _require(value >= 1, f"{name} must be >= 1, got {value}")
        _require(self.m_s * self.n_s > 1, "signal BS needs m_s * n_s > 1 antennas")
        _require(self.m_i * self.n_i > 1, "interfering BS needs m_i * n_i > 1 antennas")
        _require(
            0.0 < self.d_over_lambda <= 0.5,
            f"d_over_lambda must lie in (0, 0.5], got {self.d_over_lambda}",
        )
        for name in ("p_s", "p_i"):
            value = getattr(self, name)
            _require(math.isfinite(value) and value >= 0.0, f"{name} must be finite and >= 0, got {value}")
        _require(
            math.isfinite(self.sigma2) and self.sigma2 > 0.0,
            f"sigma2 must be finite and > 0, got {self.sigma2}",
        )
        for name in ("alpha_su", "alpha_iu", "alpha_iu_prime", "alpha_sr", "alpha_ir", "alpha_ru"):
            value = getattr(self, name)
            _require(math.isfinite(value) and value >= 0.0, f"{name} must be finite and >= 0, got {value}")
        for name in ("k_sr", "k_ir", "k_ru"):
            value = getattr(self, name)
            # math.inf is the pure-LoS sentinel and is allowed; NaN and negatives are not.
            _require(not math.isnan(value) and value >= 0.0, f"{name} must be >= 0 (inf for pure LoS), got {value}")
        for name in (
            "delta_sr_h",
            "delta_sr_v",
            "delta_ir_h",
            "delta_ir_v",
            "phi_sr_h",
            "phi_sr_v",
            "phi_ir_h",
            "phi_ir_v",
            "phi_ru_h",
            "phi_ru_v",
        ):
            value = getattr(self, name)
            _require(math.isfinite(value), f"{name} must be a finite angle in radians, got {value}")

    @property
    def n_irs(self) -> int:
        """Total number of IRS elements ``m_r * n_r``."""
        return self.m_r * self.n_r

    @property
    def n_signal(self) -> int:
        """Signal-BS antenna count ``m_s * n_s``."""
        return self.m_s * self.n_s

    @property
    def n_interf(self) -> int:
        """Interfering-BS antenna count ``m_i * n_i``."""
        return self.m_i * self.n_i

    def replace(self, **changes) -> "SystemParams":
        """Return a copy with the given fields replaced (re-validated)."""
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class PhaseShiftMatrix:
    r"""IRS phase configuration: an ``m_r x n_r`` grid of phases in ``[0, 2*pi)``.

    The reflection coefficient of element ``(m, n)`` is ``exp(1j * phi[m-1, n-1])``
    (unit amplitude).  The stored array is read-only; build a new instance to
    change phases.
    """

    phi: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.phi, dtype=np.float64, copy=True)
        _require(arr.ndim == 2, f"phi must be a 2-D grid, got shape {arr.shape}")
        _require(arr.size >= 1, "phi must contain at least one element")
        _require(bool(np.all(np.isfinite(arr))), "phi entries must be finite")
        _require(
            bool(np.all((arr >= 0.0) & (arr < _TWO_PI))),
            "phi entries must lie in [0, 2*pi)",
        )
        arr.setflags(write=False)
        object.__setattr__(self, "phi", arr)

    @classmethod
    def zeros(cls, m_r: int, n_r: int) -> "PhaseShiftMatrix":
        """All-zero phases (identity reflection)."""
        return cls(np.zeros((m_r, n_r)))

    @property
    def m_r(self) -> int:
        return self.phi.shape[0]

    @property
    def n_r(self) -> int:
        return self.phi.shape[1]

    def flat(self) -> np.ndarray:
        """Phases row-vectorized to a length ``m_r * n_r`` vector (read-only)."""
        return self.phi.reshape(-1)

    def coefficients(self) -> np.ndarray:
        """Unit-modulus reflection coefficients ``exp(1j * phi)``, row-vectorized."""
        return np.exp(1j * self.phi.reshape(-1))


@dataclass(frozen=True)
class ChannelRealization:
    r"""One draw of every channel in the scene.

    Vectors that are rows in the math are stored as conjugate columns:

    * ``h_su``: signal BS to user, length ``m_s * n_s`` (``conj(h_su)`` is the row).
    * ``h_iu``: interfering BS to user, length ``m_i * n_i``.
    * ``h_iu_prime``: interfering BS to its own user, length ``m_i * n_i``.
    * ``h_sr``: signal BS to IRS, shape ``(m_r * n_r, m_s * n_s)``.
    * ``h_ir``: interfering BS to IRS, shape ``(m_r * n_r, m_i * n_i)``.
    * ``h_ru``: IRS to user, length ``m_r * n_r`` (``conj(h_ru)`` is the row).

    All arrays are read-only.
    """

    h_su: np.ndarray
    h_iu: np.ndarray
    h_iu_prime: np.ndarray
    h_sr: np.ndarray
    h_ir: np.ndarray
    h_ru: np.ndarray

    def __post_init__(self) -> None:
        arrays = {}
        for name in ("h_su", "h_iu", "h_iu_prime", "h_sr", "h_ir", "h_ru"):
            arr = np.array(getattr(self, name), dtype=np.complex128, copy=True)
            arr.setflags(write=False)
            arrays[name] = arr
            object.__setattr__(self, name, arr)
        _require(arrays["h_su"].ndim == 1, "h_su must be a vector")
        _require(arrays["h_iu"].ndim == 1, "h_iu must be a vector")
        _require(arrays["h_iu_prime"].ndim == 1, "h_iu_prime must be a vector")
        _require(arrays["h_ru"].ndim == 1, "h_ru must be a vector")
        _require(arrays["h_sr"].ndim == 2, "h_sr must be a matrix")
        _require(arrays["h_ir"].ndim == 2, "h_ir must be a matrix")
        n_irs = arrays["h_ru"].shape[0]
        _require(
            arrays["h_sr"].shape == (n_irs, arrays["h_su"].shape[0]),
            f"h_sr shape {arrays['h_sr'].shape} inconsistent with h_ru/h_su lengths",
        )
        _require(
            arrays["h_ir"].shape == (n_irs, arrays["h_iu"].shape[0]),
            f"h_ir shape {arrays['h_ir'].shape} inconsistent with h_ru/h_iu lengths",
        )
        _require(
            arrays["h_iu_prime"].shape == arrays["h_iu"].shape,
            "h_iu_prime must match h_iu in length",
        )

    def matches(self, params: SystemParams) -> bool:
        """True when every stored dimension matches ``params``."""
        return (
            self.h_su.shape == (params.n_signal,)
            and self.h_iu.shape == (params.n_interf,)
            and self.h_ru.shape == (params.n_irs,)
        )


@dataclass(frozen=True)
class LosComponents:
    r"""Deterministic normalized LoS parts of the IRS-adjacent links.

    ``h_bar_sr`` and ``h_bar_ir`` are rank-1 unit-modulus matrices (IRS-side
    steering column times BS-side steering row); ``h_bar_ru`` is the conjugate
    column of the IRS-to-user steering row, matching the storage convention of
    :class:`ChannelRealization`.
    """

    h_bar_sr: np.ndarray
    h_bar_ir: np.ndarray
    h_bar_ru: np.ndarray

    def __post_init__(self) -> None:
        for name in ("h_bar_sr", "h_bar_ir", "h_bar_ru"):
            arr = np.array(getattr(self, name), dtype=np.complex128, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def phase_offset(d_over_lambda, theta_h, theta_v, m, n):
    r"""URA per-element phase ``2*pi*(d/lambda)*sin(theta_v)*((m-1)*cos(theta_h) + (n-1)*sin(theta_h))``.

    ``m`` and ``n`` are 1-based element indices.  The result is unreduced (it may
    leave ``[0, 2*pi)``).  Accepts scalars or broadcastable arrays.
    """
    m = np.asarray(m)
    n = np.asarray(n)
    if np.any(m < 1) or np.any(n < 1):
        raise ValueError("element indices m, n are 1-based and must be >= 1")
    value = (
        _TWO_PI
        * d_over_lambda
        * np.sin(theta_v)
        * ((m - 1) * np.cos(theta_h) + (n - 1) * np.sin(theta_h))
    )
    if np.ndim(value) == 0:
        return float(value)
    return value


def phase_offset_grid(d_over_lambda: float, theta_h: float, theta_v: float, m_dim: int, n_dim: int) -> np.ndarray:
    r"""All ``m_dim * n_dim`` element phases, row-vectorized (C order over ``(m, n)``).

    Entry ``(m - 1) * n_dim + (n - 1)`` equals
    ``phase_offset(d_over_lambda, theta_h, theta_v, m, n)``; the first entry is 0.
    """
    if m_dim < 1 or n_dim < 1:
        raise ValueError("array dimensions must be >= 1")
    m_idx, n_idx = np.meshgrid(
        np.arange(1, m_dim + 1), np.arange(1, n_dim + 1), indexing="ij"
    )
    grid = phase_offset(d_over_lambda, theta_h, theta_v, m_idx, n_idx)
    return np.asarray(grid, dtype=np.float64).reshape(-1)


def steering_vector(theta_h: float, theta_v: float, m_dim: int, n_dim: int, d_over_lambda: float) -> np.ndarray:
    r"""URA steering (row) vector of length ``m_dim * n_dim``.

    Entries are ``exp(1j * phase_offset(...))`` in row-vectorized order; every
    entry has unit modulus and the first is exactly ``1 + 0j``.
    """
    offsets = phase_offset_grid(d_over_lambda, theta_h, theta_v, m_dim, n_dim)
    vec = np.exp(1j * offsets)
    vec[0] = 1.0 + 0.0j
    return vec


def los_components(params: SystemParams) -> LosComponents:
    r"""Deterministic unit-modulus LoS components of the three IRS-adjacent links.

    The BS-to-IRS matrices are outer products of the IRS-side arrival steering
    column and the BS-side departure steering row, hence rank 1.  ``h_bar_ru`` is
    stored as the conjugate column of the IRS-to-user departure steering row.
    """
    a_irs_sr = steering_vector(params.delta_sr_h, params.delta_sr_v, params.m_r, params.n_r, params.d_over_lambda)
    a_irs_ir = steering_vector(params.delta_ir_h, params.delta_ir_v, params.m_r, params.n_r, params.d_over_lambda)
    a_bs_sr = steering_vector(params.phi_sr_h, params.phi_sr_v, params.m_s, params.n_s, params.d_over_lambda)
    a_bs_ir = steering_vector(params.phi_ir_h, params.phi_ir_v, params.m_i, params.n_i, params.d_over_lambda)
    a_ru = steering_vector(params.phi_ru_h, params.phi_ru_v, params.m_r, params.n_r, params.d_over_lambda)
    return LosComponents(
        h_bar_sr=np.outer(np.conj(a_irs_sr), a_bs_sr),
        h_bar_ir=np.outer(np.conj(a_irs_ir), a_bs_ir),
        h_bar_ru=np.conj(a_ru),
    )


def los_weights(k: float) -> tuple[float, float]:
    r"""Rician mixing weights ``(sqrt(K/(K+1)), sqrt(1/(K+1)))``.

    For the :data:`PURE_LOS` sentinel the weights are exactly ``(1.0, 0.0)``, so
    pure-LoS channels are reproduced without floating-point residue.
    """
    if math.isinf(k):
        return 1.0, 0.0
    if k < 0.0:
        raise ValueError(f"Rician factor must be >= 0, got {k}")
    return math.sqrt(k / (k + 1.0)), math.sqrt(1.0 / (k + 1.0))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    r"""I.i.d. circularly symmetric complex Gaussian entries, unit variance.

    Drawn as ``(re + 1j * im) / sqrt(2)`` with the real block drawn before the
    imaginary block; this layout is part of the determinism contract.
    """
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / math.sqrt(2.0)


def sample_realization(params: SystemParams, rng: np.random.Generator) -> ChannelRealization:
    r"""Draw one realization of all six channels.

    Direct links are Rayleigh: ``sqrt(alpha) * tilde`` with ``tilde`` i.i.d. unit
    complex Gaussian.  IRS-adjacent links are Rician:
    ``sqrt(alpha) * (sqrt(K/(K+1)) * los + sqrt(1/(K+1)) * tilde)``.
    Draw order (fixed): ``h_su``, ``h_iu``, ``h_iu_prime``, ``h_sr`` NLoS,
    ``h_ir`` NLoS, ``h_ru`` NLoS.  The same generator state yields a bit-identical
    realization; pure-LoS sentinels keep the draws (stream layout is independent
    of the Rician factors) but the NLoS weight is exactly zero.
    """
    los = los_components(params)
    h_su = math.sqrt(params.alpha_su) * complex_normal(rng, params.n_signal)
    h_iu = math.sqrt(params.alpha_iu) * complex_normal(rng, params.n_interf)
    h_iu_prime = math.sqrt(params.alpha_iu_prime) * complex_normal(rng, params.n_interf)

    a_sr, b_sr = los_weights(params.k_sr)
    tilde_sr = complex_normal(rng, (params.n_irs, params.n_signal))
    h_sr = math.sqrt(params.alpha_sr) * (a_sr * los.h_bar_sr + b_sr * tilde_sr)

    a_ir, b_ir = los_weights(params.k_ir)
    tilde_ir = complex_normal(rng, (params.n_irs, params.n_interf))
    h_ir = math.sqrt(params.alpha_ir) * (a_ir * los.h_bar_ir + b_ir * tilde_ir)

    a_ru, b_ru = los_weights(params.k_ru)
    tilde_ru = complex_normal(rng, params.n_irs)
    h_ru = math.sqrt(params.alpha_ru) * (a_ru * los.h_bar_ru + b_ru * tilde_ru)

    return ChannelRealization(
        h_su=h_su,
        h_iu=h_iu,
        h_iu_prime=h_iu_prime,
        h_sr=h_sr,
        h_ir=h_ir,
        h_ru=h_ru,
    )


def geometry_to_path_losses(d_su: float, d_r: float, d_ru_vert: float, exponents: dict | None = None) -> dict[str, float]:
    r"""Path-loss gains ``alpha = 1 / (1000 * d**exponent)`` from the plane layout.

    Layout: signal BS at ``(0, 0)``, interfering BS at ``(600, 0)``, user at
    ``(d_su, 0)``, IRS at ``(d_r, d_ru_vert)``.  ``exponents`` may override any of
    the keys in :data:`DEFAULT_PATH_LOSS_EXPONENTS` (``su``, ``iu``, ``sr``,
    ``ir``, ``ru``).  Returns the six ``alpha_*`` fields of :class:`SystemParams`
    with ``alpha_iu_prime`` set equal to ``alpha_iu``.

    Raises ``ValueError`` if any input or derived link distance is not strictly
    positive.
    """
    exp = dict(DEFAULT_PATH_LOSS_EXPONENTS)
    if exponents:
        unknown = set(exponents) - set(exp)
        if unknown:
            raise ValueError(f"unknown path-loss exponent keys: {sorted(unknown)}")
        exp.update(exponents)
    for name, value in (("d_su", d_su), ("d_r", d_r), ("d_ru_vert", d_ru_vert)):
        if not (math.isfinite(value) and value > 0.0):
            raise ValueError(f"{name} must be finite and > 0, got {value}")
    distances = {
        "su": d_su,
        "iu": abs(INTERFERER_X - d_su),
        "sr": math.hypot(d_r, d_ru_vert),
        "ir": math.hypot(INTERFERER_X - d_r, d_ru_vert),
        "ru": math.hypot(d_su - d_r, d_ru_vert),
    }
    for link, dist in distances.items():
        if dist <= 0.0:
            raise ValueError(f"degenerate geometry: link '{link}' has distance {dist}")
    alpha = {link: 1.0 / (1000.0 * dist ** exp[link]) for link, dist in distances.items()}
    return {
        "alpha_su": alpha["su"],
        "alpha_iu": alpha["iu"],
        "alpha_iu_prime": alpha["iu"],
        "alpha_sr": alpha["sr"],
        "alpha_ir": alpha["ir"],
        "alpha_ru": alpha["ru"],
    }
