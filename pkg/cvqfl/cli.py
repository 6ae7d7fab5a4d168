"""Command-line entry point."""

from __future__ import annotations

import argparse
import csv
import logging
import sys

import numpy as np
import voluptuous as vol

from .clements import clements_decompose
from .config import (
    COMMAND_COMPILE,
    COMMAND_ENCODE,
    COMMAND_FILTER,
    COMMAND_HEAT,
    COMMAND_QFT,
    COMMAND_REPORT,
    RunConfig,
    build_run_config,
    get_value,
    heat_params_from_config,
    mask_from_config,
    signal_spec_from_config,
)
from .const import (
    CONF_CLASSICAL_MASK,
    CONF_COMPILE_INTERFEROMETERS,
    CONF_MATRIX,
    CONF_MAX_SQUEEZE,
    CONF_SEEDS,
    CONF_SIZES,
    CONF_UNITARY,
    CONF_WORKERS,
    DEFAULT_MAX_SQUEEZE,
    EXIT_BAD_INPUT,
    EXIT_OK,
    EXIT_TOLERANCE,
    GATES_FILE,
    MESH_FILE,
    SPECTRUM_IM_FILE,
    SPECTRUM_RE_FILE,
    VERSION,
)
from .encoder import (
    EncodingConfig,
    default_scale,
    encode,
    encoding_gate_report,
    entanglement_spectrum,
    read_encoded,
)
from .exceptions import CvQflError
from .gaussian import check_physicality, register_entropy, unitarity_deviation
from .numerics import dft_matrix, fft2_oracle, svd
from .qft import apply_qft2d, qft_gate_report, read_spectrum
from .report import read_matrix_csv, write_matrix_csv, write_report
from .spectral import run_filter_pipeline, run_heat_pipeline, snr_sweep

_LOGGER = logging.getLogger(__name__)

GATES_HEADER = [
    "size",
    "qft_gates",
    "qft_depth",
    "fft_butterflies",
    "tms",
    "bs_ps_pairs",
    "encoding_depth",
    "svd_cost",
]


def _load_matrix(config: RunConfig, key: str, dtype: type = float) -> np.ndarray:
    path = get_value(config.options, key)
    if path is not None:
        return read_matrix_csv(path, dtype)
    size = config.size or 8
    if dtype is complex:
        _LOGGER.info(f"No {key} given, using the {size}-point DFT matrix")
        return dft_matrix(size)
    _LOGGER.info(f"No {key} given, using a seeded random {size}x{size} matrix")
    return np.random.default_rng(config.seed).uniform(-1.0, 1.0, (size, size))


def _physical(state, config: RunConfig) -> bool:
    check = check_physicality(state, config.tolerances.physicality)
    if not check.passed:
        _LOGGER.warning(f"Uncertainty relation violated: min eigenvalue {check.min_eigenvalue:.3e}")
    return check.passed


def cmd_encode(config: RunConfig) -> int:
    """Encode a matrix and report the round trip, entanglement and gate counts."""
    matrix = _load_matrix(config, CONF_MATRIX)
    m, n = matrix.shape
    scale = config.scale or default_scale(svd(matrix).singular_values)
    encoding = EncodingConfig(
        scale,
        m,
        n,
        max_squeeze=get_value(config.options, CONF_MAX_SQUEEZE, DEFAULT_MAX_SQUEEZE),
        compile_interferometers=get_value(config.options, CONF_COMPILE_INTERFEROMETERS, False),
    )
    encoded = encode(matrix, encoding)
    error = float(np.max(np.abs(read_encoded(encoded) - matrix)))
    spectrum = entanglement_spectrum(encoded)
    gates = encoding_gate_report(m, n)

    print(f"matrix: {m}x{n}, lambda: {scale!r}")
    print(f"round-trip error: {error:.3e}")
    print(f"entanglement (nats): {float(np.sum(spectrum))!r}")
    print(f"register entropy (nats): {register_entropy(encoded.state, encoded.layout)!r}")
    print(f"tms: {gates.tms}, bs/ps pairs: {gates.bs_ps_pairs}, depth: {gates.depth}")
    print(f"svd cost: {gates.svd_cost}")

    passed = _physical(encoded.state, config) and error <= config.tolerances.round_trip
    return EXIT_OK if passed else EXIT_TOLERANCE


def cmd_qft(config: RunConfig) -> int:
    """Transform a matrix optically and compare with the FFT."""
    matrix = _load_matrix(config, CONF_MATRIX)
    m, n = matrix.shape
    transformed = apply_qft2d(encode(matrix, scale=config.scale))
    readout = read_spectrum(transformed)
    error = float(np.max(np.abs(readout.spectrum - fft2_oracle(matrix))))
    gates = qft_gate_report(m, n)

    config.out_dir.mkdir(parents=True, exist_ok=True)
    write_matrix_csv(config.out_dir / SPECTRUM_RE_FILE, readout.spectrum.real)
    write_matrix_csv(config.out_dir / SPECTRUM_IM_FILE, readout.spectrum.imag)

    print(f"max error vs fft2: {error:.3e}")
    print(f"redundant block error: {readout.redundant_block_error():.3e}")
    print(f"gates: {gates.gate_count}, depth: {gates.depth}")
    print(f"classical butterflies: {gates.classical_butterflies}")

    passed = _physical(transformed.state, config) and error <= config.tolerances.round_trip
    return EXIT_OK if passed else EXIT_TOLERANCE


def _finish_experiment(report, config: RunConfig) -> int:
    write_report(report, config.out_dir, pgm=config.pgm)
    print(report)
    physical = report.min_uncertainty_eigenvalue >= -config.tolerances.physicality
    if not physical:
        _LOGGER.warning(
            f"Uncertainty relation violated: {report.min_uncertainty_eigenvalue:.3e}"
        )
    if report.max_error > config.tolerances.oracle:
        _LOGGER.warning(f"CV vs oracle error {report.max_error:.3e} above tolerance")
        return EXIT_TOLERANCE
    return EXIT_OK if physical else EXIT_TOLERANCE


def cmd_filter(config: RunConfig) -> int:
    """Low-pass filtering experiment, optionally swept over seeds."""
    spec = signal_spec_from_config(config.options)
    mask = mask_from_config(config.options)
    classical_mask = mask_from_config(config.options, CONF_CLASSICAL_MASK)
    report = run_filter_pipeline(spec, mask, classical_mask, scale=config.scale)

    seeds = get_value(config.options, CONF_SEEDS)
    if seeds:
        sweep = snr_sweep(
            spec,
            mask,
            seeds,
            classical_mask,
            workers=get_value(config.options, CONF_WORKERS, 1),
        )
        print(f"seeds: {len(sweep.seeds)}, mean SNR in: {sweep.mean_snr_in:.2f} dB")
        print(f"mean improvement classical: {sweep.mean_classical_improvement:+.2f} dB")
        print(f"mean improvement CV-QFL: {sweep.mean_cv_improvement:+.2f} dB")
    return _finish_experiment(report, config)


def cmd_heat(config: RunConfig) -> int:
    """Heat-equation experiment."""
    params = heat_params_from_config(config.options)
    return _finish_experiment(run_heat_pipeline(params, scale=config.scale), config)


def cmd_compile(config: RunConfig) -> int:
    """Decompose a unitary into a mesh and write mesh.txt."""
    unitary = _load_matrix(config, CONF_UNITARY, complex)
    mesh = clements_decompose(unitary)
    error = float(np.max(np.abs(mesh.reconstruct() - unitary)))

    config.out_dir.mkdir(parents=True, exist_ok=True)
    (config.out_dir / MESH_FILE).write_text(mesh.to_text())

    print(f"size: {mesh.size}, pairs: {mesh.pair_count}, depth: {mesh.depth}")
    print(f"reconstruction error: {error:.3e}")
    print(f"input unitarity deviation: {unitarity_deviation(unitary):.3e}")
    return EXIT_OK if error <= config.tolerances.reconstruction else EXIT_TOLERANCE


def cmd_report(config: RunConfig) -> int:
    """Gate-count table for square power-of-two sizes."""
    rows = [GATES_HEADER]
    for size in get_value(config.options, CONF_SIZES, []):
        qft = qft_gate_report(size, size)
        enc = encoding_gate_report(size, size)
        rows.append(
            [
                size,
                qft.gate_count,
                qft.depth,
                qft.classical_butterflies,
                enc.tms,
                enc.bs_ps_pairs,
                enc.depth,
                enc.svd_cost,
            ]
        )
    config.out_dir.mkdir(parents=True, exist_ok=True)
    with open(config.out_dir / GATES_FILE, "w", newline="") as f:
        csv.writer(f, lineterminator="\n").writerows(rows)
    for row in rows:
        print(",".join(str(value) for value in row))
    return EXIT_OK


COMMANDS = {
    COMMAND_ENCODE: cmd_encode,
    COMMAND_QFT: cmd_qft,
    COMMAND_FILTER: cmd_filter,
    COMMAND_HEAT: cmd_heat,
    COMMAND_COMPILE: cmd_compile,
    COMMAND_REPORT: cmd_report,
}

INPUT_ARGUMENTS = {
    COMMAND_ENCODE: (CONF_MATRIX, "matrix CSV, random seeded matrix when omitted"),
    COMMAND_QFT: (CONF_MATRIX, "matrix CSV, random seeded matrix when omitted"),
    COMMAND_COMPILE: (CONF_UNITARY, "unitary CSV, DFT matrix when omitted"),
}


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per experiment."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--lambda", dest="scale", type=float, help="encoding scale factor")
    common.add_argument("--size", type=int, help="matrix or grid size")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--pgm", action="store_true", help="also write PGM images")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="cvqfl", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, handler in COMMANDS.items():
        sub = subparsers.add_parser(command, parents=[common], help=handler.__doc__)
        if command in INPUT_ARGUMENTS:
            name, help_text = INPUT_ARGUMENTS[command]
            sub.add_argument(name, nargs="?", help=help_text)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        config = build_run_config(
            args.command,
            config_path=args.config,
            out_dir=args.out,
            seed=args.seed,
            scale=args.scale,
            size=args.size,
            pgm=args.pgm,
        )
        input_key = INPUT_ARGUMENTS.get(args.command, (None,))[0]
        if input_key and getattr(args, input_key, None):
            config.options[input_key] = getattr(args, input_key)
        _LOGGER.debug(f"Run configuration: {config}")
        return COMMANDS[args.command](config)
    except (CvQflError, vol.Invalid, OSError, ValueError) as e:
        _LOGGER.error(f"{args.command} failed: {e}")
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
