"""Tests for the classical reference layer."""
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
import numpy as np
from numpy.testing import assert_allclose
import pytest

from cvqfl.const import DFT_TOLERANCE, ORTHOGONALITY_TOLERANCE
from cvqfl.exceptions import InvalidParameter, InvalidSize
from cvqfl.numerics import (
    bit_reversal_permutation,
    centered_frequencies,
    dft_matrix,
    fft2_oracle,
    ifft2_oracle,
    is_power_of_two,
    svd,
)

shapes = [(1, 1), (3, 3), (5, 2), (2, 5), (1, 4), (7, 7), (8, 3)]

bit_reversal_data = [
    (1, (0,)),
    (2, (0, 1)),
    (4, (0, 2, 1, 3)),
    (8, (0, 4, 2, 6, 1, 5, 3, 7)),
]

low_rank_data = [(4, 1), (8, 1), (16, 1), (32, 1), (8, 2), (16, 3)]
"""(size, rank)."""

power_of_two_data = [
    (1, True),
    (2, True),
    (64, True),
    (0, False),
    (3, False),
    (12, False),
    (-4, False),
]


def _assert_orthogonal(matrix):
    assert_allclose(matrix.T @ matrix, np.eye(matrix.shape[0]), atol=ORTHOGONALITY_TOLERANCE)


@pytest.mark.parametrize("shape", shapes)
def test_svd_factors(rng, shape):
    """Test that U·Σ·Vᵀ reproduces the input with orthogonal factors."""
    matrix = rng.normal(size=shape)
    result = svd(matrix)

    assert result.shape == shape
    assert result.u.shape == (shape[0], shape[0])
    assert result.v.shape == (shape[1], shape[1])
    _assert_orthogonal(result.u)
    _assert_orthogonal(result.v)
    assert_allclose(result.reconstruct(), matrix, atol=1e-10)
    assert_allclose(
        result.singular_values, np.linalg.svd(matrix, compute_uv=False), atol=1e-10
    )


def test_svd_sorted_descending(rng):
    """Test singular value order."""
    sigma = svd(rng.normal(size=(6, 4))).singular_values
    assert np.all(np.diff(sigma) <= 0)
    assert np.all(sigma >= 0)


def test_svd_rank_deficient():
    """Test that the null space still completes U to an orthogonal matrix."""
    matrix = np.outer([1.0, 2.0, 3.0], [1.0, -1.0, 0.5])
    result = svd(matrix)

    assert_allclose(result.singular_values[1:], 0.0, atol=1e-12)
    _assert_orthogonal(result.u)
    assert_allclose(result.reconstruct(), matrix, atol=1e-12)


def test_svd_duplicate_columns():
    """Test two equal columns, which leave one column of rounding noise."""
    matrix = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 1.0], [-1.0, -1.0, 3.0]])
    result = svd(matrix)

    assert result.singular_values[-1] == 0.0
    _assert_orthogonal(result.u)
    assert_allclose(result.reconstruct(), matrix, atol=1e-12)


@pytest.mark.parametrize("size, rank", low_rank_data)
def test_svd_low_rank(rng, size, rank):
    """Test square matrices of low rank, rank one included."""
    matrix = rng.normal(size=(size, rank)) @ rng.normal(size=(rank, size))
    result = svd(matrix)

    assert np.count_nonzero(result.singular_values) == rank
    _assert_orthogonal(result.u)
    _assert_orthogonal(result.v)
    assert_allclose(result.reconstruct(), matrix, atol=1e-10)


def test_svd_zero_matrix():
    """Test the all-zero input."""
    result = svd(np.zeros((3, 2)))

    assert_allclose(result.singular_values, 0.0)
    _assert_orthogonal(result.u)
    assert_allclose(result.reconstruct(), 0.0)


@pytest.mark.parametrize(
    "matrix, error",
    [
        ([[1.0, np.nan], [0.0, 1.0]], InvalidParameter),
        ([[np.inf]], InvalidParameter),
        ([1.0, 2.0], InvalidSize),
        (np.zeros((0, 3)), InvalidSize),
    ],
)
def test_svd_rejects(matrix, error):
    """Test invalid inputs."""
    with pytest.raises(error):
        svd(matrix)


@settings(max_examples=40, deadline=None)
@given(
    matrix=arrays(
        np.float64,
        st.tuples(st.integers(1, 6), st.integers(1, 6)),
        elements=st.integers(-1000, 1000).map(lambda k: k / 100),
    )
)
def test_svd_hypothesis(matrix):
    """Test reconstruction on arbitrary small matrices."""
    result = svd(matrix)
    assert np.allclose(result.reconstruct(), matrix, atol=1e-9)
    assert np.allclose(result.u.T @ result.u, np.eye(matrix.shape[0]), atol=1e-9)


@pytest.mark.parametrize("size", [1, 2, 5, 8])
def test_dft_matrix_unitary(size):
    """Test that the DFT matrix is unitary and matches numpy's FFT."""
    f = dft_matrix(size)
    assert_allclose(f.conj().T @ f, np.eye(size), atol=DFT_TOLERANCE)
    assert_allclose(f, np.fft.fft(np.eye(size), norm="ortho"), atol=DFT_TOLERANCE)


def test_dft_matrix_rejects_zero():
    """Test the empty transform."""
    with pytest.raises(InvalidSize):
        dft_matrix(0)


def test_fft2_oracle(rng):
    """Test F_m·M·F_nᵀ and its inverse."""
    field = rng.normal(size=(4, 8))
    expected = dft_matrix(4) @ field @ dft_matrix(8).T

    assert_allclose(fft2_oracle(field), expected, atol=DFT_TOLERANCE)
    assert_allclose(ifft2_oracle(expected), field, atol=DFT_TOLERANCE)


def test_fft2_oracle_delta():
    """Test that a unit impulse spreads evenly over all bins."""
    field = np.zeros((4, 4))
    field[0, 0] = 1.0
    assert_allclose(fft2_oracle(field), np.full((4, 4), 0.25))


@settings(max_examples=40, deadline=None)
@given(
    field=arrays(
        np.float64,
        st.tuples(st.integers(1, 8), st.integers(1, 8)),
        elements=st.floats(-10.0, 10.0),
    )
)
def test_fft2_oracle_parseval(field):
    """Test that the unitary transform keeps the Frobenius norm."""
    energy = np.sum(np.abs(fft2_oracle(field)) ** 2)
    assert energy == pytest.approx(np.sum(field**2), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("size, expected", bit_reversal_data)
def test_bit_reversal(size, expected):
    """Test bit-reversal tables."""
    assert tuple(bit_reversal_permutation(size)) == expected


@given(bits=st.integers(1, 6))
def test_bit_reversal_involution(bits):
    """Test that reversing twice is the identity for N = 2 .. 64."""
    permutation = bit_reversal_permutation(2**bits)
    assert np.array_equal(permutation[permutation], np.arange(2**bits))


@pytest.mark.parametrize("size", [0, 3, 6])
def test_bit_reversal_rejects(size):
    """Test non-power-of-two sizes."""
    with pytest.raises(InvalidSize):
        bit_reversal_permutation(size)


@pytest.mark.parametrize("size, expected", power_of_two_data)
def test_is_power_of_two(size, expected):
    """Test power-of-two detection."""
    assert is_power_of_two(size) is expected


def test_centered_frequencies():
    """Test bin-to-frequency mapping."""
    assert list(centered_frequencies(8)) == [0, 1, 2, 3, 4, -3, -2, -1]
    assert list(centered_frequencies(5)) == [0, 1, 2, -2, -1]
