"""Gaussian backend: mean vector and covariance matrix in xxpp ordering.

Quadratures are ordered (x_1..x_n, p_1..p_n) with ħ = 2, so the vacuum has
identity covariance and a physical state satisfies cov + iΩ ⪰ 0 with
Ω = [[0, I], [-I, 0]].
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import Sequence

import numpy as np
import numpy.typing as npt
from scipy.linalg import eigvalsh
from scipy.special import xlogy

from .const import (
    HBAR,
    PHYSICALITY_TOLERANCE,
    SYMMETRY_TOLERANCE,
    UNITARITY_TOLERANCE,
)
from .exceptions import InvalidSize, InvalidState, InvalidTargets, PhysicalityError
from .numerics import ComplexField, RealMatrix

_LOGGER = logging.getLogger(__name__)

SymplecticMatrix = RealMatrix


@dataclass(frozen=True)
class RegisterLayout:
    """Register r₁ holds the m row modes, r₂ the n column modes after it."""

    m: int
    n: int

    def __post_init__(self) -> None:
        """Reject empty registers."""
        if self.m < 1 or self.n < 1:
            raise InvalidSize(f"registers need at least one mode, got {self.m=}, {self.n=}")

    @property
    def total_modes(self) -> int:
        """Modes in both registers."""
        return self.m + self.n

    @property
    def row_modes(self) -> tuple[int, ...]:
        """Mode indices of r₁."""
        return tuple(range(self.m))

    @property
    def col_modes(self) -> tuple[int, ...]:
        """Mode indices of r₂."""
        return tuple(range(self.m, self.m + self.n))


@dataclass
class GaussianState:
    """First and second moments of an n-mode bosonic state."""

    num_modes: int
    mean: npt.NDArray[np.float64]
    cov: RealMatrix

    def __post_init__(self) -> None:
        """Coerce to float arrays and validate."""
        self.mean = np.array(self.mean, dtype=float)
        self.cov = np.array(self.cov, dtype=float)
        self.validate()

    def validate(self) -> None:
        """Check shapes, finiteness and symmetry.

        :raises InvalidState: when the moments are malformed
        """
        dim = 2 * self.num_modes
        if self.num_modes < 1:
            raise InvalidState(f"a state needs at least one mode, got {self.num_modes}")
        if self.mean.shape != (dim,):
            raise InvalidState(
                f"invalid mean shape; expected={(dim,)}, actual={self.mean.shape}"
            )
        if self.cov.shape != (dim, dim):
            raise InvalidState(
                f"invalid cov shape; expected={(dim, dim)}, actual={self.cov.shape}"
            )
        if not (np.all(np.isfinite(self.mean)) and np.all(np.isfinite(self.cov))):
            raise InvalidState("state moments must be finite")
        scale = max(1.0, float(np.max(np.abs(self.cov))))
        if np.max(np.abs(self.cov - self.cov.T)) > SYMMETRY_TOLERANCE * scale:
            raise InvalidState("the covariance matrix is not symmetric")

    def copy(self) -> GaussianState:
        """Independent copy."""
        return GaussianState(self.num_modes, self.mean.copy(), self.cov.copy())


@dataclass(frozen=True)
class PhysicalityCheck:
    """Outcome of the uncertainty-relation test."""

    passed: bool
    min_eigenvalue: float


@dataclass(frozen=True)
class CrossBlocks:
    """Inter-register blocks of the covariance matrix, each m×n."""

    xx: RealMatrix
    xp: RealMatrix
    px: RealMatrix
    pp: RealMatrix

    def __iter__(self):
        """Unpack as (xx, xp)."""
        return iter((self.xx, self.xp))


def symplectic_form(num_modes: int) -> RealMatrix:
    """Block form Ω = [[0, I], [-I, 0]]."""
    identity = np.eye(num_modes)
    zero = np.zeros((num_modes, num_modes))
    return np.block([[zero, identity], [-identity, zero]])


def is_symplectic(matrix: RealMatrix, tolerance: float = UNITARITY_TOLERANCE) -> bool:
    """Check S·Ω·Sᵀ = Ω entrywise."""
    matrix = np.asarray(matrix)
    omega = symplectic_form(matrix.shape[0] // 2)
    return bool(np.max(np.abs(matrix @ omega @ matrix.T - omega)) <= tolerance)


def xxpp_indices(modes: Sequence[int], total_modes: int) -> npt.NDArray[np.intp]:
    """Quadrature rows of the given modes: all x first, then all p."""
    modes = np.asarray(modes, dtype=np.intp)
    return np.concatenate([modes, modes + total_modes])


def _check_targets(modes: Sequence[int], total_modes: int) -> None:
    if len(set(modes)) != len(modes):
        raise InvalidTargets(f"targets must be distinct, got {tuple(modes)}")
    if any(not 0 <= mode < total_modes for mode in modes):
        raise InvalidTargets(f"targets {tuple(modes)} outside 0..{total_modes - 1}")


def expand_symplectic(
    local: SymplecticMatrix, modes: Sequence[int], total_modes: int
) -> SymplecticMatrix:
    """Embed a local symplectic acting on modes into the full phase space.

    :param local: 2k×2k matrix in the local xxpp ordering of modes
    :param modes: the k target modes
    :param total_modes: register size n
    :returns: 2n×2n matrix acting as identity on the other modes
    """
    _check_targets(modes, total_modes)
    full = np.eye(2 * total_modes)
    index = xxpp_indices(modes, total_modes)
    full[np.ix_(index, index)] = local
    return full


def vacuum(num_modes: int) -> GaussianState:
    """Vacuum state: zero mean, identity covariance.

    :raises InvalidSize: when num_modes < 1
    """
    if num_modes < 1:
        raise InvalidSize(f"vacuum needs at least one mode, got {num_modes}")
    return GaussianState(
        num_modes, np.zeros(2 * num_modes), HBAR / 2 * np.eye(2 * num_modes)
    )


def apply_symplectic(state: GaussianState, matrix: SymplecticMatrix) -> GaussianState:
    """Return the state evolved by a full 2n×2n symplectic matrix.

    :raises InvalidState: when the dimensions disagree
    """
    matrix = np.asarray(matrix, dtype=float)
    dim = 2 * state.num_modes
    if matrix.shape != (dim, dim):
        raise InvalidState(
            f"symplectic of shape {matrix.shape} cannot act on a state of dimension {dim}"
        )
    cov = matrix @ state.cov @ matrix.T
    return GaussianState(state.num_modes, matrix @ state.mean, 0.5 * (cov + cov.T))


def apply_local_symplectic_inplace(
    state: GaussianState, local: SymplecticMatrix, modes: Sequence[int]
) -> None:
    """Mutate state by a symplectic acting on a few modes only.

    Touches 2k rows and columns, then symmetrises them.
    """
    index = xxpp_indices(modes, state.num_modes)
    cov = state.cov
    cov[index, :] = local @ cov[index, :]
    cov[:, index] = cov[:, index] @ local.T
    cov[index, :] = 0.5 * (cov[index, :] + cov[:, index].T)
    cov[:, index] = cov[index, :].T
    state.mean[index] = local @ state.mean[index]


def apply_local_symplectic(
    state: GaussianState, local: SymplecticMatrix, modes: Sequence[int]
) -> GaussianState:
    """Return a new state evolved by a symplectic acting on modes."""
    _check_targets(modes, state.num_modes)
    local = np.asarray(local, dtype=float)
    if local.shape != (2 * len(modes), 2 * len(modes)):
        raise InvalidState(
            f"local symplectic of shape {local.shape} does not match {len(modes)} modes"
        )
    result = state.copy()
    apply_local_symplectic_inplace(result, local, modes)
    return result


def unitarity_deviation(unitary: ComplexField) -> float:
    """max |U†U − I|."""
    unitary = np.asarray(unitary)
    return float(np.max(np.abs(unitary.conj().T @ unitary - np.eye(unitary.shape[0]))))


def symplectic_from_unitary(
    unitary: ComplexField,
    modes: Sequence[int] | None = None,
    total_modes: int | None = None,
) -> SymplecticMatrix:
    """Phase-space action S_U = [[Re U, -Im U], [Im U, Re U]] of a passive unitary.

    :param unitary: k×k unitary acting on annihilation operators as a ↦ U·a
    :param modes: target modes; the local 2k×2k matrix is returned when omitted
    :param total_modes: register size for the embedding
    :raises PhysicalityError: when U is not unitary to UNITARITY_TOLERANCE
    """
    unitary = np.asarray(unitary, dtype=complex)
    if unitary.ndim != 2 or unitary.shape[0] != unitary.shape[1]:
        raise InvalidState(f"a unitary must be square, got shape {unitary.shape}")
    deviation = unitarity_deviation(unitary)
    if deviation > UNITARITY_TOLERANCE:
        raise PhysicalityError("matrix is not unitary", deviation)

    local = np.block([[unitary.real, -unitary.imag], [unitary.imag, unitary.real]])
    if modes is None:
        return local
    if len(modes) != unitary.shape[0]:
        raise InvalidTargets(
            f"{unitary.shape[0]}x{unitary.shape[0]} unitary given {len(modes)} targets"
        )
    return expand_symplectic(local, modes, total_modes or len(modes))


def check_physicality(
    state: GaussianState, tolerance: float = PHYSICALITY_TOLERANCE
) -> PhysicalityCheck:
    """Uncertainty relation cov + iΩ ⪰ 0, up to -tolerance."""
    hermitian = state.cov + 1j * symplectic_form(state.num_modes)
    min_eigenvalue = float(eigvalsh(hermitian, subset_by_index=[0, 0])[0])
    return PhysicalityCheck(passed=min_eigenvalue >= -tolerance, min_eigenvalue=min_eigenvalue)


def cross_blocks(state: GaussianState, layout: RegisterLayout) -> CrossBlocks:
    """Read the inter-register blocks σ_{q r₁, q' r₂}.

    :raises InvalidState: when the layout does not cover the state
    """
    total = state.num_modes
    if layout.total_modes != total:
        raise InvalidState(
            f"layout {layout.m}+{layout.n} does not match a {total}-mode state"
        )
    rows = np.asarray(layout.row_modes)
    cols = np.asarray(layout.col_modes)
    cov = state.cov
    return CrossBlocks(
        xx=cov[np.ix_(rows, cols)].copy(),
        xp=cov[np.ix_(rows, cols + total)].copy(),
        px=cov[np.ix_(rows + total, cols)].copy(),
        pp=cov[np.ix_(rows + total, cols + total)].copy(),
    )


def symplectic_eigenvalues(cov: RealMatrix) -> npt.NDArray[np.float64]:
    """Williamson spectrum ν_k (each ≥ 1 for a physical ħ = 2 state), ascending."""
    cov = np.asarray(cov, dtype=float)
    omega = symplectic_form(cov.shape[0] // 2)
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * omega @ cov)))
    return moduli[::2]


def register_entropy(
    state: GaussianState, layout: RegisterLayout, register: int = 1
) -> float:
    """Von Neumann entropy (nats) of one register's reduced state."""
    modes = layout.row_modes if register == 1 else layout.col_modes
    index = xxpp_indices(modes, state.num_modes)
    nu = symplectic_eigenvalues(state.cov[np.ix_(index, index)])
    upper = (nu + 1.0) / 2.0
    lower = np.clip((nu - 1.0) / 2.0, 0.0, None)
    return float(np.sum(xlogy(upper, upper) - xlogy(lower, lower)))
