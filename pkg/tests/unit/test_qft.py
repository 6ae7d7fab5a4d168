"""Tests for the optical Fourier layer."""
import math

import numpy as np
from numpy.testing import assert_allclose
import pytest

from cvqfl.circuit import CircuitProgram, apply_program, program_to_unitary
from cvqfl.const import DFT_TOLERANCE, ROUND_TRIP_TOLERANCE
from cvqfl.encoder import encode, read_encoded
from cvqfl.exceptions import InvalidSize, InvalidTargets
from cvqfl.gaussian import RegisterLayout, check_physicality
from cvqfl.numerics import dft_matrix, fft2_oracle
from cvqfl.qft import (
    apply_inverse_qft2d,
    apply_qft2d,
    build_ct_qft_1d,
    butterfly_block,
    classical_fft_cost,
    qft_gate_report,
    qft_program_2d,
    read_spectrum,
)
from cvqfl.report import read_matrix_csv

shapes = [(1, 1), (2, 2), (4, 4), (8, 8), (4, 8), (8, 2)]

spectrum_grid = [
    pytest.param(size, seed, marks=[pytest.mark.slow] if size >= 32 else [])
    for size in (8, 16, 32, 64)
    for seed in range(5)
]
"""(size, seed): 20 random matrices up to 64×64."""

gate_reports = [
    (2, 2, 4, 2, 4),
    (4, 4, 16, 3, 32),
    (8, 8, 48, 4, 192),
    (4, 16, 72, 5, 192),
]
"""(m, n, gate_count, depth, classical_butterflies)."""


@pytest.mark.parametrize("size", [1, 2, 4, 8, 16, 32, 64])
def test_register_unitary_is_dft(size):
    """Test that the one-register program realises the unitary DFT."""
    program = build_ct_qft_1d(tuple(range(size)))
    error = np.max(np.abs(program_to_unitary(program) - dft_matrix(size)))
    assert error <= DFT_TOLERANCE


def test_register_offset_modes():
    """Test a register placed after other modes."""
    program = build_ct_qft_1d((3, 4, 5, 6), total_modes=8)
    assert program.total_modes == 8
    assert program.support == {3, 4, 5, 6}
    assert_allclose(program_to_unitary(program, (3, 4, 5, 6)), dft_matrix(4), atol=1e-12)


@pytest.mark.parametrize("size", [0, 3, 12])
def test_register_size_rejects(size):
    """Test power-of-two check."""
    with pytest.raises(InvalidSize):
        build_ct_qft_1d(tuple(range(size)))


def test_butterfly_block():
    """Test (a, b) ↦ ((a + ωb)/√2, (a − ωb)/√2)."""
    phi = -math.pi / 4
    program = CircuitProgram(2)
    butterfly_block(program, 0, 1, phi)
    omega = np.exp(1j * phi)
    expected = np.array([[1.0, omega], [1.0, -omega]]) / math.sqrt(2)

    assert program.gate_count == 2
    assert_allclose(program_to_unitary(program), expected, atol=1e-15)


def test_butterfly_block_rejects_same_mode():
    """Test distinct modes."""
    with pytest.raises(InvalidTargets):
        butterfly_block(CircuitProgram(2), 1, 1, 0.0)


@pytest.mark.parametrize("shape", shapes)
def test_spectrum_matches_fft2(rng, shape):
    """Test that the cross block after the layer is λ·F_m·D·F_nᵀ."""
    matrix = rng.uniform(-1.0, 1.0, shape)
    transformed = apply_qft2d(encode(matrix))
    readout = read_spectrum(transformed)

    assert_allclose(readout.spectrum, fft2_oracle(matrix), atol=1e-10)
    assert readout.redundant_block_error() < 1e-10
    assert check_physicality(transformed.state).passed


@pytest.mark.parametrize("size, seed", spectrum_grid)
def test_square_spectrum_matches_fft2(size, seed):
    """Test the optical spectrum of seeded square matrices against fft2."""
    matrix = np.random.default_rng(seed).uniform(-1.0, 1.0, (size, size))
    transformed = apply_qft2d(encode(matrix))

    error = np.max(np.abs(read_spectrum(transformed).spectrum - fft2_oracle(matrix)))
    assert error <= ROUND_TRIP_TOLERANCE
    assert check_physicality(transformed.state).passed


@pytest.mark.parametrize("fixture_path", ["delta4.csv"], indirect=True)
def test_delta_spectrum(fixture_path):
    """Test that an impulse has a flat spectrum."""
    matrix = read_matrix_csv(fixture_path)
    readout = read_spectrum(apply_qft2d(encode(matrix)))
    assert_allclose(readout.spectrum, np.full((4, 4), 0.25), atol=1e-12)


def test_spectrum_scale_independent(rng):
    """Test that λ cancels in the readout."""
    matrix = rng.normal(size=(4, 4))
    small = read_spectrum(apply_qft2d(encode(matrix, scale=0.05))).spectrum
    large = read_spectrum(apply_qft2d(encode(matrix, scale=0.4))).spectrum
    assert_allclose(small, large, atol=1e-10)


def test_rows_only(rng):
    """Test the layer on r₁ alone."""
    matrix = rng.normal(size=(4, 2))
    encoded = encode(matrix, scale=0.5)
    program = qft_program_2d(encoded.layout, cols=False)
    readout = read_spectrum(encoded.with_state(apply_program(encoded.state, program)))
    assert_allclose(readout.spectrum, dft_matrix(4) @ matrix, atol=1e-12)


def test_inverse_restores_matrix(rng):
    """Test that the inverse layer undoes the forward one."""
    matrix = rng.normal(size=(8, 4))
    encoded = encode(matrix)
    restored = apply_inverse_qft2d(apply_qft2d(encoded))

    assert_allclose(read_encoded(restored), matrix, atol=1e-10)
    assert_allclose(restored.state.cov, encoded.state.cov, atol=1e-10)


def test_read_spectrum_before_layer(rng):
    """Test that the readout of a fresh encoding is D itself."""
    matrix = rng.normal(size=(2, 4))
    assert_allclose(read_spectrum(encode(matrix)).spectrum, matrix, atol=1e-12)


@pytest.mark.parametrize("m, n, gates, depth, butterflies", gate_reports)
def test_gate_report(m, n, gates, depth, butterflies):
    """Test N·log₂N gates per register and depth log₂N + 1."""
    report = qft_gate_report(m, n)
    assert report.gate_count == gates
    assert report.depth == depth
    assert report.classical_butterflies == butterflies


def test_gate_count_64():
    """Test the 64-mode register."""
    program = build_ct_qft_1d(tuple(range(64)))
    assert program.gate_count == 384
    assert program.depth == 7


def test_layout_rejects_non_power_of_two():
    """Test the two-register builder."""
    with pytest.raises(InvalidSize):
        qft_program_2d(RegisterLayout(4, 6))


def test_classical_fft_cost():
    """Test row–column butterfly count."""
    assert classical_fft_cost(64, 64) == 2 * 64 * 32 * 6
