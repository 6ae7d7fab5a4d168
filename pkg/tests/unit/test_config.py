"""Tests for run configuration."""
import json

import pytest
import voluptuous as vol

from cvqfl.config import (
    COMMAND_COMPILE,
    COMMAND_ENCODE,
    COMMAND_FILTER,
    COMMAND_HEAT,
    COMMAND_QFT,
    COMMAND_REPORT,
    DEFAULT_REPORT_SIZES,
    Tolerances,
    build_run_config,
    get_value,
    heat_params_from_config,
    load_config,
    mask_from_config,
    power_of_two,
    signal_spec_from_config,
    validate_config,
)
from cvqfl.const import (
    CONF_CLASSICAL_MASK,
    DEFAULT_SIGNAL_COMPONENTS,
    MASK_CIRCULAR,
    MASK_RECTANGULAR,
    ORACLE_TOLERANCE,
    ROUND_TRIP_TOLERANCE,
)
from cvqfl.exceptions import InvalidConfig
from cvqfl.spectral import GaussianPeak

get_value_data = [
    (None, "seed", None, None),
    (None, "seed", 7, 7),
    ({"seed": 3}, "seed", 7, 3),
    ({}, "seed", 7, 7),
]

defaults = [
    (COMMAND_ENCODE, "size", 8),
    (COMMAND_QFT, "size", 8),
    (COMMAND_FILTER, "size", 64),
    (COMMAND_FILTER, "noise_std", 1.0),
    (COMMAND_HEAT, "size", 32),
    (COMMAND_HEAT, "steps", 4),
    (COMMAND_COMPILE, "size", 8),
    (COMMAND_REPORT, "sizes", DEFAULT_REPORT_SIZES),
]

invalid = [
    (COMMAND_QFT, {"size": 6}),
    (COMMAND_FILTER, {"noise_std": -0.1}),
    (COMMAND_FILTER, {"mask": {"kind": "hexagonal"}}),
    (COMMAND_HEAT, {"alpha": 0}),
    (COMMAND_HEAT, {"peaks": [{"center": [1.0], "width": 1.0}]}),
    (COMMAND_ENCODE, {"lambda": -1.0}),
    (COMMAND_ENCODE, {"unknown": 1}),
    (COMMAND_REPORT, {"sizes": [4, 5]}),
    (COMMAND_ENCODE, {"tolerances": {"round_trip": -1}}),
]


@pytest.mark.parametrize("config, param, default, expected", get_value_data)
def test_get_value(config, param, default, expected):
    """Test configuration getter."""
    assert get_value(config, param, default) == expected


@pytest.mark.parametrize("command, key, expected", defaults)
def test_defaults(command, key, expected):
    """Test values filled in by the schemas."""
    assert validate_config(command, {})[key] == expected


@pytest.mark.parametrize("command, raw", invalid)
def test_invalid(command, raw):
    """Test schema violations."""
    with pytest.raises(InvalidConfig):
        validate_config(command, raw)


@pytest.mark.parametrize("value, expected", [(1, 1), ("16", 16), (64.0, 64)])
def test_power_of_two(value, expected):
    """Test the power-of-two validator."""
    assert power_of_two(value) == expected


def test_power_of_two_rejects():
    """Test a non power of two."""
    with pytest.raises(vol.Invalid):
        power_of_two(24)


@pytest.mark.parametrize("fixture_path", ["filter_small.json"], indirect=True)
def test_load_filter_config(fixture_path):
    """Test a filter configuration file."""
    options = load_config(COMMAND_FILTER, fixture_path)
    spec = signal_spec_from_config(options)
    mask = mask_from_config(options)
    classical = mask_from_config(options, CONF_CLASSICAL_MASK)

    assert spec.size == 16
    assert spec.components == ((1, 1, 1.0), (2, 0, 0.5))
    assert spec.seed == 3
    assert mask.kind == MASK_RECTANGULAR and mask.cutoff_rows == 3
    assert classical.kind == MASK_CIRCULAR and classical.radius == 3
    assert Tolerances.from_config(options).oracle == 1e-9


@pytest.mark.parametrize("fixture_path", ["heat_small.json"], indirect=True)
def test_load_heat_config(fixture_path):
    """Test a heat configuration file."""
    params = heat_params_from_config(load_config(COMMAND_HEAT, fixture_path))
    assert params.size == 8
    assert params.steps == 2
    assert params.peaks == (GaussianPeak((3.0, 4.0), 1.5, 2.0),)


def test_heat_config_default_peaks():
    """Test that omitted peaks fall back to the default pair."""
    params = heat_params_from_config(validate_config(COMMAND_HEAT, {}))
    assert params.peaks is None
    assert len(params.initial_peaks) == 2


def test_filter_config_defaults():
    """Test the default signal and masks."""
    options = validate_config(COMMAND_FILTER, {})
    assert signal_spec_from_config(options).components == DEFAULT_SIGNAL_COMPONENTS
    assert mask_from_config(options).kind == MASK_RECTANGULAR
    assert mask_from_config(options, CONF_CLASSICAL_MASK).kind == MASK_CIRCULAR


@pytest.mark.parametrize("fixture_path", ["not_json.json", "bad_mask.json"], indirect=True)
def test_load_config_rejects(fixture_path):
    """Test unreadable and invalid files."""
    with pytest.raises(InvalidConfig):
        load_config(COMMAND_FILTER, fixture_path)


def test_load_config_missing(tmp_path):
    """Test a missing file."""
    with pytest.raises(InvalidConfig):
        load_config(COMMAND_FILTER, tmp_path / "absent.json")


@pytest.mark.parametrize("fixture_path", ["filter_small.json"], indirect=True)
def test_flags_override_file(fixture_path, tmp_path):
    """Test flag precedence over the configuration file."""
    config = build_run_config(
        COMMAND_FILTER, fixture_path, out_dir=tmp_path, seed=11, size=32, scale=0.5
    )
    assert config.seed == 11
    assert config.size == 32
    assert config.scale == 0.5
    assert config.options["noise_std"] == 0.5
    assert config.out_dir == tmp_path
    assert '"command": "filter"' in str(config)


def test_tolerances_default():
    """Test tolerance defaults."""
    tolerances = Tolerances.from_config(None)
    assert tolerances.round_trip == ROUND_TRIP_TOLERANCE
    assert tolerances.oracle == ORACLE_TOLERANCE


@pytest.mark.parametrize(
    "command, fixture_path, fixture_text",
    [
        (COMMAND_FILTER, "filter_small.json", "filter_small.json"),
        (COMMAND_HEAT, "heat_small.json", "heat_small.json"),
    ],
    indirect=["fixture_path", "fixture_text"],
)
def test_load_config_matches_validate(command, fixture_path, fixture_text):
    """Test that loading a file equals validating its parsed content."""
    raw = json.loads(fixture_text)
    assert load_config(command, fixture_path) == validate_config(command, raw)
