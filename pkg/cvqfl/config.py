"""JSON run configuration validated with voluptuous."""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import logging
from pathlib import Path
from typing import Any

import voluptuous as vol

from .const import (
    CONF_ALPHA,
    CONF_AMPLITUDE,
    CONF_CENTER,
    CONF_CLASSICAL_MASK,
    CONF_COMPILE_INTERFEROMETERS,
    CONF_COMPONENTS,
    CONF_CUTOFF_COLS,
    CONF_CUTOFF_ROWS,
    CONF_DT,
    CONF_KIND,
    CONF_MASK,
    CONF_MATRIX,
    CONF_MAX_SQUEEZE,
    CONF_NOISE_STD,
    CONF_PEAKS,
    CONF_PGM,
    CONF_RADIUS,
    CONF_SCALE,
    CONF_SEED,
    CONF_SEEDS,
    CONF_SIZE,
    CONF_SIZES,
    CONF_STEPS,
    CONF_TOLERANCES,
    CONF_UNITARY,
    CONF_WIDTH,
    CONF_WORKERS,
    DEFAULT_ALPHA,
    DEFAULT_CUTOFF,
    DEFAULT_DT,
    DEFAULT_HEAT_SIZE,
    DEFAULT_MAX_SQUEEZE,
    DEFAULT_NOISE_STD,
    DEFAULT_SEED,
    DEFAULT_SIGNAL_COMPONENTS,
    DEFAULT_SIGNAL_SIZE,
    DEFAULT_STEPS,
    DEFAULT_TOLERANCES,
    MASK_CIRCULAR,
    MASK_RECTANGULAR,
    TOL_ORACLE,
    TOL_PHYSICALITY,
    TOL_RECONSTRUCTION,
    TOL_ROUND_TRIP,
)
from .exceptions import InvalidConfig
from .numerics import is_power_of_two
from .spectral import GaussianPeak, HeatParams, MaskSpec, SignalSpec

_LOGGER = logging.getLogger(__name__)

COMMAND_ENCODE = "encode"
COMMAND_QFT = "qft"
COMMAND_FILTER = "filter"
COMMAND_HEAT = "heat"
COMMAND_COMPILE = "compile"
COMMAND_REPORT = "report"

DEFAULT_REPORT_SIZES = [2, 4, 8, 16, 32, 64]


def power_of_two(value: Any) -> int:
    """Voluptuous validator for 1, 2, 4, ..."""
    value = int(value)
    if not is_power_of_two(value):
        raise vol.Invalid(f"{value} is not a power of two")
    return value


NON_NEGATIVE = vol.All(vol.Coerce(float), vol.Range(min=0))
POSITIVE = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))

TOLERANCES_SCHEMA = vol.Schema(
    {vol.Optional(key): NON_NEGATIVE for key in DEFAULT_TOLERANCES}
)

MASK_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_KIND, default=MASK_RECTANGULAR): vol.In(
            [MASK_RECTANGULAR, MASK_CIRCULAR]
        ),
        vol.Optional(CONF_CUTOFF_ROWS, default=DEFAULT_CUTOFF): NON_NEGATIVE,
        vol.Optional(CONF_CUTOFF_COLS, default=DEFAULT_CUTOFF): NON_NEGATIVE,
        vol.Optional(CONF_RADIUS, default=DEFAULT_CUTOFF): NON_NEGATIVE,
    }
)

PEAK_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_CENTER): vol.ExactSequence([vol.Coerce(float), vol.Coerce(float)]),
        vol.Required(CONF_WIDTH): POSITIVE,
        vol.Optional(CONF_AMPLITUDE, default=1.0): vol.Coerce(float),
    }
)

COMMON = {
    vol.Optional(CONF_TOLERANCES, default={}): TOLERANCES_SCHEMA,
    vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.Coerce(int),
    vol.Optional(CONF_SCALE): POSITIVE,
    vol.Optional(CONF_PGM, default=False): bool,
}

SCHEMAS: dict[str, vol.Schema] = {
    COMMAND_ENCODE: vol.Schema(
        {
            **COMMON,
            vol.Optional(CONF_MATRIX): str,
            vol.Optional(CONF_SIZE, default=8): vol.All(vol.Coerce(int), vol.Range(min=1)),
            vol.Optional(CONF_MAX_SQUEEZE, default=DEFAULT_MAX_SQUEEZE): POSITIVE,
            vol.Optional(CONF_COMPILE_INTERFEROMETERS, default=False): bool,
        }
    ),
    COMMAND_QFT: vol.Schema(
        {
            **COMMON,
            vol.Optional(CONF_MATRIX): str,
            vol.Optional(CONF_SIZE, default=8): power_of_two,
        }
    ),
    COMMAND_FILTER: vol.Schema(
        {
            **COMMON,
            vol.Optional(CONF_SIZE, default=DEFAULT_SIGNAL_SIZE): power_of_two,
            vol.Optional(CONF_COMPONENTS, default=list(DEFAULT_SIGNAL_COMPONENTS)): [
                vol.ExactSequence([vol.Coerce(int), vol.Coerce(int), vol.Coerce(float)])
            ],
            vol.Optional(CONF_NOISE_STD, default=DEFAULT_NOISE_STD): NON_NEGATIVE,
            vol.Optional(CONF_MASK, default={}): MASK_SCHEMA,
            vol.Optional(CONF_CLASSICAL_MASK, default={CONF_KIND: MASK_CIRCULAR}): MASK_SCHEMA,
            vol.Optional(CONF_SEEDS): vol.All(vol.Coerce(int), vol.Range(min=1)),
            vol.Optional(CONF_WORKERS, default=1): vol.All(vol.Coerce(int), vol.Range(min=1)),
        }
    ),
    COMMAND_HEAT: vol.Schema(
        {
            **COMMON,
            vol.Optional(CONF_SIZE, default=DEFAULT_HEAT_SIZE): power_of_two,
            vol.Optional(CONF_ALPHA, default=DEFAULT_ALPHA): POSITIVE,
            vol.Optional(CONF_DT, default=DEFAULT_DT): POSITIVE,
            vol.Optional(CONF_STEPS, default=DEFAULT_STEPS): vol.All(
                vol.Coerce(int), vol.Range(min=0)
            ),
            vol.Optional(CONF_PEAKS): [PEAK_SCHEMA],
        }
    ),
    COMMAND_COMPILE: vol.Schema(
        {
            **COMMON,
            vol.Optional(CONF_UNITARY): str,
            vol.Optional(CONF_SIZE, default=8): vol.All(vol.Coerce(int), vol.Range(min=1)),
        }
    ),
    COMMAND_REPORT: vol.Schema(
        {
            **COMMON,
            vol.Optional(CONF_SIZES, default=DEFAULT_REPORT_SIZES): [power_of_two],
        }
    ),
}


def get_value(config: dict | None, param: str, default=None):
    """Get current value for configuration parameter.

    :param config: dict|None: validated configuration
    :param param: str: parameter name for getting value
    :param default: default value for parameter, defaults to None
    :returns: parameter value, or default value or None
    """
    if config is not None:
        return config.get(param, default)
    return default


@dataclass(frozen=True)
class Tolerances:
    """Pass/fail thresholds of a run."""

    round_trip: float = DEFAULT_TOLERANCES[TOL_ROUND_TRIP]
    oracle: float = DEFAULT_TOLERANCES[TOL_ORACLE]
    physicality: float = DEFAULT_TOLERANCES[TOL_PHYSICALITY]
    reconstruction: float = DEFAULT_TOLERANCES[TOL_RECONSTRUCTION]

    @classmethod
    def from_config(cls, config: dict | None) -> Tolerances:
        """Overrides from the `tolerances` object, module constants otherwise."""
        overrides = get_value(config, CONF_TOLERANCES, {}) or {}
        return cls(**{key: overrides.get(key, value) for key, value in DEFAULT_TOLERANCES.items()})


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""

    command: str
    options: dict[str, Any] = field(default_factory=dict)
    out_dir: Path = Path(".")
    seed: int = DEFAULT_SEED
    scale: float | None = None
    size: int | None = None
    pgm: bool = False
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __str__(self) -> str:
        """Return the run configuration as JSON."""
        return json.dumps(
            {
                "command": self.command,
                "options": self.options,
                "out_dir": str(self.out_dir),
                "seed": self.seed,
                "scale": self.scale,
                "size": self.size,
            },
            indent=4,
            sort_keys=True,
            default=str,
        )


def validate_config(command: str, raw: dict | None) -> dict:
    """Apply the schema of command to raw, filling defaults.

    :raises InvalidConfig: when raw does not match the schema
    """
    try:
        return SCHEMAS[command](raw or {})
    except vol.Invalid as e:
        _LOGGER.error(f"Invalid {command} configuration: {e}")
        raise InvalidConfig(f"invalid {command} configuration: {e}") from e


def load_config(command: str, path: str | Path | None) -> dict:
    """Read and validate a JSON configuration; defaults only when path is None.

    :raises InvalidConfig: on unreadable JSON or schema mismatch
    """
    if path is None:
        return validate_config(command, {})
    try:
        with open(path) as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        _LOGGER.error(f"Cannot read configuration {path}: {e}")
        raise InvalidConfig(f"cannot read {path}: {e}") from e
    return validate_config(command, raw)


def build_run_config(
    command: str,
    config_path: str | Path | None = None,
    out_dir: str | Path = ".",
    seed: int | None = None,
    scale: float | None = None,
    size: int | None = None,
    pgm: bool = False,
) -> RunConfig:
    """Merge flags over the JSON file over defaults.

    :raises InvalidConfig: on any validation failure
    """
    raw: dict = {}
    if config_path is not None:
        raw = dict(load_config(command, config_path))
    for key, value in ((CONF_SEED, seed), (CONF_SCALE, scale), (CONF_SIZE, size)):
        if value is not None:
            raw[key] = value
    if pgm:
        raw[CONF_PGM] = True
    options = validate_config(command, raw)
    return RunConfig(
        command=command,
        options=options,
        out_dir=Path(out_dir),
        seed=get_value(options, CONF_SEED, DEFAULT_SEED),
        scale=get_value(options, CONF_SCALE),
        size=get_value(options, CONF_SIZE),
        pgm=get_value(options, CONF_PGM, False),
        tolerances=Tolerances.from_config(options),
    )


def signal_spec_from_config(options: dict) -> SignalSpec:
    """SignalSpec of a validated filter configuration."""
    return SignalSpec(
        size=get_value(options, CONF_SIZE, DEFAULT_SIGNAL_SIZE),
        components=tuple(tuple(c) for c in get_value(options, CONF_COMPONENTS, [])),
        noise_std=get_value(options, CONF_NOISE_STD, DEFAULT_NOISE_STD),
        seed=get_value(options, CONF_SEED, DEFAULT_SEED),
    )


def mask_from_config(options: dict, key: str = CONF_MASK) -> MaskSpec:
    """MaskSpec of a validated mask object."""
    mask = get_value(options, key) or MASK_SCHEMA({})
    return MaskSpec(
        kind=mask[CONF_KIND],
        cutoff_rows=mask[CONF_CUTOFF_ROWS],
        cutoff_cols=mask[CONF_CUTOFF_COLS],
        radius=mask[CONF_RADIUS],
    )


def heat_params_from_config(options: dict) -> HeatParams:
    """HeatParams of a validated heat configuration."""
    peaks = get_value(options, CONF_PEAKS)
    return HeatParams(
        size=get_value(options, CONF_SIZE, DEFAULT_HEAT_SIZE),
        alpha=get_value(options, CONF_ALPHA, DEFAULT_ALPHA),
        dt=get_value(options, CONF_DT, DEFAULT_DT),
        steps=get_value(options, CONF_STEPS, DEFAULT_STEPS),
        peaks=None
        if peaks is None
        else tuple(
            GaussianPeak(tuple(p[CONF_CENTER]), p[CONF_WIDTH], p[CONF_AMPLITUDE]) for p in peaks
        ),
    )
