"""Classical reference layer: dense linear algebra, DFT oracles and index helpers.

Everything optical in this package is checked against the functions here.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging

import numpy as np
import numpy.typing as npt
from scipy.linalg import dft, null_space

from .const import JACOBI_EPSILON, JACOBI_MAX_SWEEPS
from .exceptions import ConvergenceError, InvalidParameter, InvalidSize

_LOGGER = logging.getLogger(__name__)

RealMatrix = npt.NDArray[np.float64]
ComplexField = npt.NDArray[np.complex128]
IndexVector = npt.NDArray[np.intp]


@dataclass(frozen=True)
class SvdResult:
    """Factors of D = U·Σ·Vᵀ with U (m×m) and V (n×n) orthogonal."""

    u: RealMatrix
    singular_values: npt.NDArray[np.float64]
    v: RealMatrix

    @property
    def shape(self) -> tuple[int, int]:
        """Shape of the factorised matrix."""
        return self.u.shape[0], self.v.shape[0]

    def sigma(self) -> RealMatrix:
        """Rectangular m×n diagonal matrix of singular values."""
        m, n = self.shape
        result = np.zeros((m, n))
        k = len(self.singular_values)
        result[np.arange(k), np.arange(k)] = self.singular_values
        return result

    def reconstruct(self) -> RealMatrix:
        """Return U·Σ·Vᵀ."""
        return self.u @ self.sigma() @ self.v.T


def is_power_of_two(size: int) -> bool:
    """Check that size is 1, 2, 4, ..."""
    return size >= 1 and size & (size - 1) == 0


def _as_finite_matrix(matrix) -> RealMatrix:
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or min(a.shape) < 1:
        raise InvalidSize(f"expected a non-empty 2D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameter(f"{a.shape[0]}x{a.shape[1]} matrix has non-finite entries")
    return a


def _rank_floor(a: RealMatrix) -> float:
    """Column norm below which a column is rounding noise of a rank-deficient input."""
    m, n = a.shape
    return float(JACOBI_EPSILON * m * n * np.linalg.norm(a))


def _one_sided_jacobi(a: RealMatrix) -> tuple[RealMatrix, RealMatrix]:
    """Orthogonalise the columns of a (m ≥ n) by plane rotations.

    :param a: RealMatrix: input, not modified
    :returns: (W, V) with A·V = W and the columns of W mutually orthogonal
    :raises ConvergenceError: when JACOBI_MAX_SWEEPS sweeps are not enough
    """
    m, n = a.shape
    w = a.copy()
    v = np.eye(n)
    threshold = JACOBI_EPSILON * m
    negligible = _rank_floor(a) ** 2

    for sweep in range(1, JACOBI_MAX_SWEEPS + 1):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = w[:, p] @ w[:, p]
                beta = w[:, q] @ w[:, q]
                gamma = w[:, p] @ w[:, q]
                if min(alpha, beta) <= negligible:
                    continue
                if gamma == 0.0 or abs(gamma) <= threshold * np.sqrt(alpha) * np.sqrt(beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                rotation = np.array([[c, s], [-s, c]])
                w[:, [p, q]] = w[:, [p, q]] @ rotation
                v[:, [p, q]] = v[:, [p, q]] @ rotation
        if not rotated:
            _LOGGER.debug(f"Jacobi SVD of {m}x{n} converged after {sweep} sweeps")
            return w, v

    raise ConvergenceError(
        f"one-sided Jacobi SVD of a {m}x{n} matrix did not converge "
        f"after {JACOBI_MAX_SWEEPS} sweeps"
    )


def svd(matrix) -> SvdResult:
    """Singular value decomposition of a real matrix by one-sided Jacobi.

    Singular values are non-negative and sorted in descending order; sign
    freedom is absorbed into U.

    :param matrix: real m×n matrix, finite
    :returns: SvdResult with orthogonal U (m×m) and V (n×n)
    :raises InvalidSize: for empty or non-2D input
    :raises ConvergenceError: when the rotations do not settle
    """
    a = _as_finite_matrix(matrix)
    m, n = a.shape
    if m < n:
        transposed = svd(a.T)
        return SvdResult(
            u=transposed.v, singular_values=transposed.singular_values, v=transposed.u
        )

    w, v = _one_sided_jacobi(a)
    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    w = w[:, order]
    v = v[:, order]

    sigma[sigma <= _rank_floor(a)] = 0.0
    rank = int(np.count_nonzero(sigma))
    u_range = w[:, :rank] / sigma[:rank]
    u = np.hstack([u_range, null_space(u_range.T)]) if rank else np.eye(m)

    return SvdResult(u=u, singular_values=sigma, v=v)


def dft_matrix(size: int) -> ComplexField:
    """Unitary DFT matrix (F)_kj = e^{-2πi jk/l}/√l.

    :param size: int: l ≥ 1
    :raises InvalidSize: when l < 1
    """
    if size < 1:
        raise InvalidSize(f"DFT size must be at least 1, got {size}")
    return dft(size, scale="sqrtn")


def fft2_oracle(field) -> ComplexField:
    """Two-dimensional unitary DFT, F_m·M·F_nᵀ."""
    return np.fft.fft2(np.asarray(field), norm="ortho")


def ifft2_oracle(spectrum) -> ComplexField:
    """Inverse of fft2_oracle."""
    return np.fft.ifft2(np.asarray(spectrum), norm="ortho")


def bit_reversal_permutation(size: int) -> IndexVector:
    """Index j mapped to j with its log₂N bits reversed.

    :param size: int: N, a power of two
    :raises InvalidSize: for any other N
    """
    if not is_power_of_two(size):
        raise InvalidSize(f"bit reversal needs a power of two, got {size}")
    bits = size.bit_length() - 1
    if bits == 0:
        return np.zeros(1, dtype=np.intp)
    return np.array(
        [int(format(j, f"0{bits}b")[::-1], 2) for j in range(size)], dtype=np.intp
    )


def centered_frequencies(size: int) -> npt.NDArray[np.int64]:
    """Centered integer frequency of each FFT bin: i for i ≤ N/2, i − N above."""
    if size < 1:
        raise InvalidSize(f"frequency grid needs at least one bin, got {size}")
    index = np.arange(size)
    return np.where(index <= size / 2, index, index - size)
