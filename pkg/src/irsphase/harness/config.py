"""Declarative experiment configuration.

Configs are YAML mappings with nested sections (``system``, ``geometry``,
``sweep``, ``baseline2``, ``baseline4``, ``optimizer``).  Unknown keys are
rejected, every diagnostic carries a ``file:line`` locus when the key came from
a file, and ``seed`` is mandatory so that every run is reproducible.  Powers
are given in dBm and Rician factors in dB at this boundary only; the resolved
:class:`~irsphase.channel.SystemParams` always carries linear units.  A config
may start from a bundled preset (``preset: fig3``) and override any subset of
keys; passing a preset name directly to :func:`load_config` also works.
"""

from __future__ import annotations

import copy
import dataclasses
import hashlib
import json
import math
import os
from pathlib import Path
from typing import Any, Mapping

import yaml

from ..channel import (
    DEFAULT_PATH_LOSS_EXPONENTS,
    INTERFERER_X,
    SystemParams,
    geometry_to_path_losses,
)
from ..optimizer import DEFAULT_ANGLE_TOL, PcdConfig
from ..rate import CsiCase
from .presets import PRESETS, get_preset

__all__ = [
    "AXIS_NAMES",
    "SCHEME_NAMES",
    "OUTPUT_DIR_ENV",
    "ConfigError",
    "GeometryConfig",
    "ExperimentConfig",
    "config_from_dict",
    "load_config",
    "resolve_output_dir",
    "dbm_to_watts",
    "db_to_linear",
]

#: Sweepable quantities: IRS side length, interference power, the two Rician
#: factors the rate is most sensitive to, and the two layout distances.
AXIS_NAMES = ("m_r", "p_i_dbm", "k_sr_db", "k_ru_db", "d_r", "d_su")

#: Phase-shift design schemes a sweep can evaluate.
SCHEME_NAMES = (
    "special_closed_form",
    "pcd",
    "bcd",
    "baseline1_no_irs",
    "baseline2_random",
    "baseline3_signal_only",
    "baseline4_instant_adaptive",
)

#: Environment variable giving the default output directory.
OUTPUT_DIR_ENV = "IRSPHASE_OUTPUT_DIR"

_CASE_NAMES = tuple(case.value for case in CsiCase)

_SYSTEM_KEYS = (
    "m_s",
    "n_s",
    "m_i",
    "n_i",
    "m_r",
    "n_r",
    "d_over_lambda",
    "p_s_dbm",
    "p_i_dbm",
    "sigma2_dbm",
    "k_sr_db",
    "k_ir_db",
    "k_ru_db",
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
)

_ANGLE_KEYS = _SYSTEM_KEYS[13:]

# Allowed keys per section; a nested dict means a nested mapping section.
_SCHEMA: dict[str, Any] = {
    "scenario": None,
    "preset": None,
    "seed": None,
    "output_dir": None,
    "n_samples": None,
    "schemes": None,
    "cases": None,
    "sweep": {"axis": None, "values": None},
    "system": {key: None for key in _SYSTEM_KEYS},
    "geometry": {
        "d_su": None,
        "d_r": None,
        "d_ru_vert": None,
        "exponents": {key: None for key in DEFAULT_PATH_LOSS_EXPONENTS},
    },
    "baseline2": {"n_phase_draws": None, "n_mc_phase_draws": None},
    "baseline4": {"n_samples": None},
    "optimizer": {
        "rho0": None,
        "kappa": None,
        "tol": None,
        "max_iter": None,
        "angle_tol": None,
    },
}

_SYSTEM_DEFAULTS: dict[str, float] = {
    "m_s": 4,
    "n_s": 4,
    "m_i": 4,
    "n_i": 4,
    "m_r": 8,
    "n_r": 8,
    "d_over_lambda": 0.5,
    "p_s_dbm": 30.0,
    "p_i_dbm": 30.0,
    "sigma2_dbm": -104.0,
    "k_sr_db": 20.0,
    "k_ir_db": 10.0,
    "k_ru_db": 20.0,
    "delta_sr_h": math.pi / 6,
    "delta_sr_v": math.pi / 6,
    "delta_ir_h": math.pi / 8,
    "delta_ir_v": math.pi / 8,
    "phi_sr_h": math.pi / 3,
    "phi_sr_v": math.pi / 3,
    "phi_ir_h": math.pi / 8,
    "phi_ir_v": math.pi / 8,
    "phi_ru_h": math.pi / 6,
    "phi_ru_v": math.pi / 6,
}

_GEOMETRY_DEFAULTS = {"d_su": 250.0, "d_r": 250.0, "d_ru_vert": 20.0}

_DEFAULT_SCHEMES = ("pcd", "bcd", "baseline1_no_irs")

_SEED_LIMIT = 2**64


class ConfigError(ValueError):
    """A configuration file or mapping is malformed or out of range."""


def dbm_to_watts(dbm: float) -> float:
    """Convert a power in dBm to watts (``-inf`` maps to 0)."""
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db: float) -> float:
    """Convert a ratio in dB to linear scale (``inf`` and ``-inf`` map through)."""
    if math.isinf(db):
        return math.inf if db > 0 else 0.0
    return 10.0 ** (db / 10.0)


@dataclasses.dataclass(frozen=True)
class GeometryConfig:
    """One-dimensional network layout on the signal-BS -> interferer axis.

    The signal BS sits at the origin, the interferer at ``x = 600`` m, the user
    at ``x = d_su``, and the IRS at ``(d_r, d_ru_vert)``.  ``exponents`` maps
    link tags (``su``, ``iu``, ``sr``, ``ir``, ``ru``) to path-loss exponents.
    """

    d_su: float = _GEOMETRY_DEFAULTS["d_su"]
    d_r: float = _GEOMETRY_DEFAULTS["d_r"]
    d_ru_vert: float = _GEOMETRY_DEFAULTS["d_ru_vert"]
    exponents: Mapping[str, float] = dataclasses.field(
        default_factory=lambda: dict(DEFAULT_PATH_LOSS_EXPONENTS)
    )

    def path_losses(self, *, d_su: float | None = None, d_r: float | None = None) -> dict[str, float]:
        """Resolved path losses, optionally with one distance overridden."""
        return geometry_to_path_losses(
            self.d_su if d_su is None else d_su,
            self.d_r if d_r is None else d_r,
            self.d_ru_vert,
            dict(self.exponents),
        )


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment description.

    ``params`` holds the base system in linear units; :meth:`params_at` applies
    one sweep-axis value.  ``axis`` may be ``None`` for configs that are only
    used with the ``solve`` and ``validate`` entry points.
    """

    scenario: str
    seed: int
    params: SystemParams
    geometry: GeometryConfig
    axis: str | None
    axis_values: tuple[float, ...]
    schemes: tuple[str, ...]
    cases: tuple[CsiCase, ...]
    n_samples: int
    n_phase_draws: int
    n_mc_phase_draws: int
    n_adapt_samples: int
    pcd_config: PcdConfig
    angle_tol: float
    output_dir: str | None

    def params_at(self, value: float) -> SystemParams:
        """System parameters with the sweep axis set to ``value``."""
        if self.axis is None:
            raise ConfigError("config has no sweep section")
        if self.axis == "m_r":
            side = int(round(value))
            return self.params.replace(m_r=side, n_r=side)
        if self.axis == "p_i_dbm":
            return self.params.replace(p_i=dbm_to_watts(value))
        if self.axis == "k_sr_db":
            return self.params.replace(k_sr=db_to_linear(value))
        if self.axis == "k_ru_db":
            return self.params.replace(k_ru=db_to_linear(value))
        if self.axis == "d_r":
            return self.params.replace(**self.geometry.path_losses(d_r=value))
        if self.axis == "d_su":
            return self.params.replace(**self.geometry.path_losses(d_su=value))
        raise ConfigError(f"unknown sweep axis {self.axis!r}")

    def canonical(self) -> dict[str, Any]:
        """JSON-serializable resolved view; the basis of :meth:`config_hash`."""
        params = {
            field.name: getattr(self.params, field.name)
            for field in dataclasses.fields(self.params)
        }
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "axis": self.axis,
            "axis_values": list(self.axis_values),
            "schemes": list(self.schemes),
            "cases": [case.value for case in self.cases],
            "n_samples": self.n_samples,
            "system": params,
            "geometry": {
                "d_su": self.geometry.d_su,
                "d_r": self.geometry.d_r,
                "d_ru_vert": self.geometry.d_ru_vert,
                "exponents": dict(self.geometry.exponents),
            },
            "baseline2": {
                "n_phase_draws": self.n_phase_draws,
                "n_mc_phase_draws": self.n_mc_phase_draws,
            },
            "baseline4": {"n_samples": self.n_adapt_samples},
            "optimizer": {
                "rho0": self.pcd_config.rho0,
                "kappa": self.pcd_config.kappa,
                "tol": self.pcd_config.tol,
                "max_iter": self.pcd_config.max_iter,
                "angle_tol": self.angle_tol,
            },
        }

    def config_hash(self) -> str:
        """SHA-256 of the canonical resolved config (formatting-independent)."""
        blob = json.dumps(self.canonical(), sort_keys=True)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def resolve_output_dir(config: ExperimentConfig, override: str | os.PathLike | None = None) -> Path:
    """Output directory precedence: explicit override, config, environment, cwd."""
    if override is not None:
        return Path(override)
    if config.output_dir is not None:
        return Path(config.output_dir)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env)
    return Path(".")


# --------------------------------------------------------------------------
# parsing helpers
# --------------------------------------------------------------------------


class _Source:
    """Raw mapping plus key->line loci for diagnostics."""

    def __init__(self, data: dict, loci: dict[tuple, int], filename: str):
        self.data = data
        self.loci = loci
        self.filename = filename

    def locus(self, path: tuple) -> str:
        line = self.loci.get(path)
        return f"{self.filename}:{line}" if line is not None else self.filename

    def fail(self, path: tuple, message: str) -> None:
        raise ConfigError(f"{self.locus(path)}: {message}")


def _collect_loci(text: str) -> dict[tuple, int]:
    node = yaml.compose(text, Loader=yaml.SafeLoader)
    loci: dict[tuple, int] = {}

    def walk(current, path: tuple) -> None:
        if isinstance(current, yaml.MappingNode):
            for key_node, value_node in current.value:
                sub = path + (str(key_node.value),)
                loci[sub] = key_node.start_mark.line + 1
                walk(value_node, sub)
        elif isinstance(current, yaml.SequenceNode):
            for index, item in enumerate(current.value):
                sub = path + (index,)
                loci[sub] = item.start_mark.line + 1
                walk(item, sub)

    if node is not None:
        walk(node, ())
    return loci


def _check_structure(data: Any, schema: dict, src: _Source, path: tuple) -> None:
    if not isinstance(data, dict):
        src.fail(path, f"expected a mapping for {'.'.join(map(str, path)) or 'the config'}")
    for key, value in data.items():
        sub = path + (str(key),)
        if key not in schema:
            section = ".".join(map(str, path)) or "top level"
            known = ", ".join(sorted(schema))
            src.fail(sub, f"unknown key {key!r} in {section} (known keys: {known})")
        if isinstance(schema[key], dict) and value is not None:
            _check_structure(value, schema[key], src, sub)


def _deep_merge(base: dict, override: dict) -> dict:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _get_section(src: _Source, key: str) -> dict:
    value = src.data.get(key)
    if value is None:
        return {}
    return value


def _read_number(section: Mapping, key: str, default: float, src: _Source, path: tuple) -> float:
    value = section.get(key, default)
    if not _is_number(value):
        src.fail(path + (key,), f"{key} must be a number, got {value!r}")
    return float(value)


def _read_finite(section: Mapping, key: str, default: float, src: _Source, path: tuple) -> float:
    value = _read_number(section, key, default, src, path)
    if not math.isfinite(value):
        src.fail(path + (key,), f"{key} must be finite, got {value!r}")
    return value


def _read_int(section: Mapping, key: str, default: int, src: _Source, path: tuple, *, minimum: int = 1) -> int:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        src.fail(path + (key,), f"{key} must be an integer, got {value!r}")
    if value < minimum:
        src.fail(path + (key,), f"{key} must be >= {minimum}, got {value}")
    return value


def _read_rician_db(section: Mapping, key: str, default: float, src: _Source, path: tuple) -> float:
    """Rician factor in dB; the string ``inf`` (or ``.inf``) selects pure LoS."""
    value = section.get(key, default)
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return math.inf
        src.fail(path + (key,), f"{key} must be a number in dB or 'inf', got {value!r}")
    if not _is_number(value):
        src.fail(path + (key,), f"{key} must be a number in dB or 'inf', got {value!r}")
    return db_to_linear(float(value))


def _read_interference_dbm(section: Mapping, key: str, default: float, src: _Source, path: tuple) -> float:
    """Interference power in dBm; the string ``off`` (or ``-inf``) disables it."""
    value = section.get(key, default)
    if isinstance(value, str):
        if value.strip().lower() == "off":
            return 0.0
        src.fail(path + (key,), f"{key} must be a number in dBm or 'off', got {value!r}")
    if not _is_number(value):
        src.fail(path + (key,), f"{key} must be a number in dBm or 'off', got {value!r}")
    return dbm_to_watts(float(value))


def _parse_axis_value(axis: str, value: Any, src: _Source, path: tuple) -> float:
    if axis == "m_r":
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            src.fail(path, f"m_r values must be integers >= 1, got {value!r}")
        return float(value)
    if axis == "p_i_dbm":
        if isinstance(value, str) and value.strip().lower() == "off":
            return -math.inf
        if not _is_number(value):
            src.fail(path, f"p_i_dbm values must be numbers in dBm or 'off', got {value!r}")
        return float(value)
    if axis in ("k_sr_db", "k_ru_db"):
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity"):
            return math.inf
        if not _is_number(value):
            src.fail(path, f"{axis} values must be numbers in dB or 'inf', got {value!r}")
        return float(value)
    # remaining axes are distances in meters
    if not _is_number(value) or not math.isfinite(float(value)) or float(value) <= 0.0:
        src.fail(path, f"{axis} values must be positive distances in meters, got {value!r}")
    if axis == "d_su" and float(value) == INTERFERER_X:
        src.fail(path, f"d_su = {value} puts the user on top of the interferer")
    return float(value)


def _resolve(src: _Source, default_scenario: str) -> ExperimentConfig:
    data = src.data
    _check_structure(data, _SCHEMA, src, ())

    if "seed" not in data:
        raise ConfigError(f"{src.filename}: missing required key 'seed'")
    seed = data["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < _SEED_LIMIT:
        src.fail(("seed",), f"seed must be an integer in [0, 2**64), got {seed!r}")

    scenario = data.get("scenario", default_scenario)
    if not isinstance(scenario, str) or not scenario:
        src.fail(("scenario",), f"scenario must be a non-empty string, got {scenario!r}")
    if any(ch in scenario for ch in "/\\") or scenario in (".", ".."):
        src.fail(("scenario",), f"scenario {scenario!r} is not usable as a file name stem")

    output_dir = data.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        src.fail(("output_dir",), f"output_dir must be a string, got {output_dir!r}")

    n_samples = _read_int(data, "n_samples", 10_000, src, ())

    # ---- schemes and CSI cases ----
    schemes_raw = data.get("schemes", list(_DEFAULT_SCHEMES))
    if not isinstance(schemes_raw, list) or not schemes_raw:
        src.fail(("schemes",), "schemes must be a non-empty list")
    schemes: list[str] = []
    for index, name in enumerate(schemes_raw):
        if name not in SCHEME_NAMES:
            src.fail(
                ("schemes", index),
                f"unknown scheme {name!r} (known: {', '.join(SCHEME_NAMES)})",
            )
        if name in schemes:
            src.fail(("schemes", index), f"duplicate scheme {name!r}")
        schemes.append(name)

    cases_raw = data.get("cases", list(_CASE_NAMES))
    if not isinstance(cases_raw, list) or not cases_raw:
        src.fail(("cases",), "cases must be a non-empty list")
    cases: list[CsiCase] = []
    for index, name in enumerate(cases_raw):
        if name not in _CASE_NAMES:
            src.fail(("cases", index), f"unknown CSI case {name!r} (known: {', '.join(_CASE_NAMES)})")
        case = CsiCase(name)
        if case in cases:
            src.fail(("cases", index), f"duplicate CSI case {name!r}")
        cases.append(case)

    # ---- sweep ----
    axis: str | None = None
    axis_values: tuple[float, ...] = ()
    sweep = data.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict):
            src.fail(("sweep",), "sweep must be a mapping with 'axis' and 'values'")
        if "axis" not in sweep or "values" not in sweep:
            src.fail(("sweep",), "sweep needs both 'axis' and 'values'")
        axis = sweep["axis"]
        if axis not in AXIS_NAMES:
            src.fail(("sweep", "axis"), f"unknown axis {axis!r} (known: {', '.join(AXIS_NAMES)})")
        values_raw = sweep["values"]
        if not isinstance(values_raw, list) or not values_raw:
            src.fail(("sweep", "values"), "sweep values must be a non-empty list")
        parsed = [
            _parse_axis_value(axis, value, src, ("sweep", "values", index))
            for index, value in enumerate(values_raw)
        ]
        if len(set(parsed)) != len(parsed):
            src.fail(("sweep", "values"), "sweep values must be distinct")
        axis_values = tuple(parsed)

    # ---- geometry ----
    geo = _get_section(src, "geometry")
    d_su = _read_finite(geo, "d_su", _GEOMETRY_DEFAULTS["d_su"], src, ("geometry",))
    d_r = _read_finite(geo, "d_r", _GEOMETRY_DEFAULTS["d_r"], src, ("geometry",))
    d_ru_vert = _read_finite(geo, "d_ru_vert", _GEOMETRY_DEFAULTS["d_ru_vert"], src, ("geometry",))
    for key, value in (("d_su", d_su), ("d_r", d_r), ("d_ru_vert", d_ru_vert)):
        if value <= 0.0:
            src.fail(("geometry", key), f"{key} must be positive, got {value}")
    if d_su == INTERFERER_X:
        src.fail(("geometry", "d_su"), f"d_su = {d_su} puts the user on top of the interferer")
    exponents = dict(DEFAULT_PATH_LOSS_EXPONENTS)
    for key in exponents:
        exponents[key] = _read_finite(
            geo.get("exponents", {}), key, exponents[key], src, ("geometry", "exponents")
        )
        if exponents[key] <= 0.0:
            src.fail(("geometry", "exponents", key), f"exponent {key} must be positive")
    geometry = GeometryConfig(d_su=d_su, d_r=d_r, d_ru_vert=d_ru_vert, exponents=exponents)

    # ---- system ----
    system = _get_section(src, "system")
    spath = ("system",)
    dims = {
        key: _read_int(system, key, _SYSTEM_DEFAULTS[key], src, spath)
        for key in ("m_s", "n_s", "m_i", "n_i", "m_r", "n_r")
    }
    d_over_lambda = _read_finite(system, "d_over_lambda", _SYSTEM_DEFAULTS["d_over_lambda"], src, spath)
    p_s_dbm = _read_number(system, "p_s_dbm", _SYSTEM_DEFAULTS["p_s_dbm"], src, spath)
    if math.isnan(p_s_dbm) or p_s_dbm == math.inf:
        src.fail(spath + ("p_s_dbm",), f"p_s_dbm must be < inf, got {p_s_dbm}")
    sigma2_dbm = _read_finite(system, "sigma2_dbm", _SYSTEM_DEFAULTS["sigma2_dbm"], src, spath)
    angles = {key: _read_finite(system, key, _SYSTEM_DEFAULTS[key], src, spath) for key in _ANGLE_KEYS}
    p_i = _read_interference_dbm(system, "p_i_dbm", _SYSTEM_DEFAULTS["p_i_dbm"], src, spath)
    k_sr = _read_rician_db(system, "k_sr_db", _SYSTEM_DEFAULTS["k_sr_db"], src, spath)
    k_ir = _read_rician_db(system, "k_ir_db", _SYSTEM_DEFAULTS["k_ir_db"], src, spath)
    k_ru = _read_rician_db(system, "k_ru_db", _SYSTEM_DEFAULTS["k_ru_db"], src, spath)

    try:
        params = SystemParams(
            **dims,
            d_over_lambda=d_over_lambda,
            p_s=dbm_to_watts(p_s_dbm),
            p_i=p_i,
            sigma2=dbm_to_watts(sigma2_dbm),
            k_sr=k_sr,
            k_ir=k_ir,
            k_ru=k_ru,
            **geometry.path_losses(),
            **angles,
        )
    except ValueError as exc:
        raise ConfigError(f"{src.locus(spath)}: {exc}") from exc

    # ---- auxiliary sections ----
    baseline2 = _get_section(src, "baseline2")
    n_phase_draws = _read_int(baseline2, "n_phase_draws", 10_000, src, ("baseline2",))
    n_mc_phase_draws = _read_int(baseline2, "n_mc_phase_draws", 100, src, ("baseline2",))
    baseline4 = _get_section(src, "baseline4")
    n_adapt_samples = _read_int(baseline4, "n_samples", 200, src, ("baseline4",))

    optimizer = _get_section(src, "optimizer")
    opath = ("optimizer",)
    angle_tol = _read_finite(optimizer, "angle_tol", DEFAULT_ANGLE_TOL, src, opath)
    if angle_tol < 0.0:
        src.fail(opath + ("angle_tol",), f"angle_tol must be >= 0, got {angle_tol}")
    try:
        pcd_config = PcdConfig(
            rho0=_read_finite(optimizer, "rho0", 1.0, src, opath),
            kappa=_read_finite(optimizer, "kappa", 0.75, src, opath),
            tol=_read_finite(optimizer, "tol", 1e-6, src, opath),
            max_iter=_read_int(optimizer, "max_iter", 1000, src, opath),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{src.locus(opath)}: {exc}") from exc

    return ExperimentConfig(
        scenario=scenario,
        seed=seed,
        params=params,
        geometry=geometry,
        axis=axis,
        axis_values=axis_values,
        schemes=tuple(schemes),
        cases=tuple(cases),
        n_samples=n_samples,
        n_phase_draws=n_phase_draws,
        n_mc_phase_draws=n_mc_phase_draws,
        n_adapt_samples=n_adapt_samples,
        pcd_config=pcd_config,
        angle_tol=angle_tol,
        output_dir=output_dir,
    )


def config_from_dict(data: Mapping[str, Any], *, name: str = "custom") -> ExperimentConfig:
    """Resolve an in-memory mapping (same schema as a YAML file)."""
    if not isinstance(data, Mapping):
        raise ConfigError(f"<{name}>: config must be a mapping, got {type(data).__name__}")
    merged = dict(copy.deepcopy(dict(data)))
    default_scenario = name
    preset_name = merged.pop("preset", None)
    if preset_name is not None:
        if preset_name not in PRESETS:
            raise ConfigError(
                f"<{name}>: unknown preset {preset_name!r} (known: {', '.join(sorted(PRESETS))})"
            )
        merged = _deep_merge(get_preset(preset_name), merged)
        merged.pop("preset", None)
        default_scenario = preset_name
    return _resolve(_Source(merged, {}, f"<{name}>"), default_scenario)


def load_config(source: str | os.PathLike) -> ExperimentConfig:
    """Load a config from a YAML file path or a bundled preset name."""
    path = Path(source)
    if not path.exists():
        name = str(source)
        if name in PRESETS:
            return config_from_dict(get_preset(name), name=name)
        raise ConfigError(
            f"{name}: no such config file or preset (presets: {', '.join(sorted(PRESETS))})"
        )

    text = path.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
        loci = _collect_loci(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        locus = f"{path}:{mark.line + 1}" if mark is not None else str(path)
        raise ConfigError(f"{locus}: invalid YAML ({exc})") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a YAML mapping")

    default_scenario = "custom"
    preset_name = data.pop("preset", None)
    if preset_name is not None:
        if preset_name not in PRESETS:
            raise ConfigError(
                f"{path}:{loci.get(('preset',), 1)}: unknown preset {preset_name!r} "
                f"(known: {', '.join(sorted(PRESETS))})"
            )
        data = _deep_merge(get_preset(preset_name), data)
        data.pop("preset", None)
        default_scenario = preset_name

    return _resolve(_Source(data, loci, str(path)), default_scenario)
