"""Photonic gate set: symplectic constructors, mode maps and the loss channel."""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
import math
from typing import Sequence

import numpy as np

from .const import (
    GATE_BEAMSPLITTER,
    GATE_INTERFEROMETER,
    GATE_LOSS,
    GATE_PERMUTATION,
    GATE_ROTATION,
    GATE_TMS,
    PASSIVE_GATES,
)
from .exceptions import InvalidGate, InvalidParameter, InvalidTargets
from .gaussian import (
    GaussianState,
    SymplecticMatrix,
    _check_targets,
    expand_symplectic,
    symplectic_from_unitary,
)
from .numerics import ComplexField

_LOGGER = logging.getLogger(__name__)

GATE_ARITY: dict[str, int | None] = {
    GATE_TMS: 2,
    GATE_ROTATION: 1,
    GATE_BEAMSPLITTER: 2,
    GATE_LOSS: 1,
    GATE_INTERFEROMETER: None,
    GATE_PERMUTATION: None,
}
"""Number of targets per gate kind; None means any."""


def _tms_local(r: float, phi: float = 0.0) -> SymplecticMatrix:
    if phi != 0.0:
        raise NotImplementedError("two-mode squeezing is only defined for phi = 0")
    if not math.isfinite(r):
        raise InvalidParameter(f"squeezing must be finite, got {r=}")
    ch, sh = math.cosh(r), math.sinh(r)
    return np.array(
        [
            [ch, sh, 0.0, 0.0],
            [sh, ch, 0.0, 0.0],
            [0.0, 0.0, ch, -sh],
            [0.0, 0.0, -sh, ch],
        ]
    )


def rotation_map(phi: float) -> ComplexField:
    """Mode map a ↦ e^{iφ}a."""
    return np.array([[np.exp(1j * phi)]])


def beamsplitter_map(theta: float, phi: float) -> ComplexField:
    """Mode map [[cosθ, -e^{-iφ}sinθ], [e^{iφ}sinθ, cosθ]] on (a, b).

    At (π/4, 0) this gives a′ = (a − b)/√2, b′ = (a + b)/√2.
    """
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [[c, -np.exp(-1j * phi) * s], [np.exp(1j * phi) * s, c]], dtype=complex
    )


def permutation_map(permutation: Sequence[int]) -> ComplexField:
    """Matrix P with P[t, π(t)] = 1, i.e. slot t receives the amplitude of π(t)."""
    size = len(permutation)
    result = np.zeros((size, size), dtype=complex)
    result[np.arange(size), np.asarray(permutation)] = 1.0
    return result


def tms_symplectic(
    r: float, modes: tuple[int, int], total_modes: int, phi: float = 0.0
) -> SymplecticMatrix:
    """Two-mode squeezer on (i, j) embedded in 2n×2n.

    :param r: squeezing parameter
    :param modes: (i, j), distinct
    :param total_modes: n
    :param phi: squeezing phase; only 0 is supported
    :raises InvalidTargets: when i = j
    :raises NotImplementedError: for phi ≠ 0
    """
    _check_pair(modes)
    return expand_symplectic(_tms_local(r, phi), modes, total_modes)


def rotation_symplectic(phi: float, mode: int, total_modes: int) -> SymplecticMatrix:
    """Phase rotation a ↦ e^{iφ}a on one mode."""
    return symplectic_from_unitary(rotation_map(phi), (mode,), total_modes)


def beamsplitter_symplectic(
    theta: float, phi: float, modes: tuple[int, int], total_modes: int
) -> SymplecticMatrix:
    """Beam splitter on (i, j), see beamsplitter_map for the convention."""
    _check_pair(modes)
    return symplectic_from_unitary(beamsplitter_map(theta, phi), modes, total_modes)


def permutation_symplectic(
    permutation: Sequence[int], modes: Sequence[int], total_modes: int
) -> SymplecticMatrix:
    """Relabel modes: slot modes[t] receives mode modes[π(t)]."""
    _check_permutation(permutation, len(modes))
    return symplectic_from_unitary(permutation_map(permutation), modes, total_modes)


def _check_pair(modes: Sequence[int]) -> None:
    if len(modes) != 2 or modes[0] == modes[1]:
        raise InvalidTargets(f"a two-mode gate needs two distinct modes, got {tuple(modes)}")


def _check_permutation(permutation: Sequence[int], size: int) -> None:
    if sorted(int(p) for p in permutation) != list(range(size)):
        raise InvalidParameter(f"{tuple(permutation)} is not a permutation of {size} modes")


def _check_transmissivity(transmissivity: float) -> None:
    if not 0.0 <= transmissivity <= 1.0:
        raise InvalidParameter(f"transmissivity must lie in [0, 1], got {transmissivity}")


def apply_loss_inplace(state: GaussianState, mode: int, transmissivity: float) -> None:
    """Mutate state by a loss channel; see apply_loss."""
    _check_transmissivity(transmissivity)
    index = [mode, mode + state.num_modes]
    amplitude = math.sqrt(transmissivity)
    state.cov[index, :] *= amplitude
    state.cov[:, index] *= amplitude
    state.cov[index, index] += 1.0 - transmissivity
    state.mean[index] *= amplitude


def apply_loss(state: GaussianState, mode: int, transmissivity: float) -> GaussianState:
    """Attenuate one mode: σ → Tσ + (1−T)I and μ → √T·μ on its quadratures.

    Correlations with other modes shrink by √T; T = 0 replaces the mode by vacuum.

    :param state: GaussianState: input, left untouched
    :param mode: int: target mode
    :param transmissivity: float: T in [0, 1]
    :returns: new state
    :raises InvalidParameter: when T is outside [0, 1]
    :raises InvalidTargets: when mode is outside the state
    """
    _check_targets((mode,), state.num_modes)
    result = state.copy()
    apply_loss_inplace(result, mode, transmissivity)
    return result


@dataclass(frozen=True, eq=False)
class GateOp:
    """One gate of a circuit program.

    params hold (r,) for tms, (φ,) for rotation, (θ, φ) for beamsplitter and
    (T,) for loss; interferometers carry a unitary and permutations a
    permutation instead.
    """

    kind: str
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()
    unitary: ComplexField | None = field(default=None, repr=False)
    permutation: tuple[int, ...] | None = None

    @classmethod
    def tms(cls, r: float, i: int, j: int) -> GateOp:
        """Two-mode squeezer on (i, j)."""
        return cls(GATE_TMS, (i, j), (float(r),))

    @classmethod
    def rotation(cls, phi: float, mode: int) -> GateOp:
        """Phase rotation."""
        return cls(GATE_ROTATION, (mode,), (float(phi),))

    @classmethod
    def beamsplitter(cls, theta: float, phi: float, i: int, j: int) -> GateOp:
        """Beam splitter."""
        return cls(GATE_BEAMSPLITTER, (i, j), (float(theta), float(phi)))

    @classmethod
    def loss(cls, transmissivity: float, mode: int) -> GateOp:
        """Loss channel."""
        return cls(GATE_LOSS, (mode,), (float(transmissivity),))

    @classmethod
    def interferometer(cls, unitary: ComplexField, modes: Sequence[int]) -> GateOp:
        """Arbitrary passive unitary on modes."""
        return cls(
            GATE_INTERFEROMETER, tuple(modes), unitary=np.array(unitary, dtype=complex)
        )

    @classmethod
    def mode_permutation(cls, permutation: Sequence[int], modes: Sequence[int]) -> GateOp:
        """Relabel modes by a permutation."""
        return cls(
            GATE_PERMUTATION,
            tuple(modes),
            permutation=tuple(int(p) for p in permutation),
        )

    @property
    def is_passive(self) -> bool:
        """Photon-number preserving gate with a unitary mode map."""
        return self.kind in PASSIVE_GATES

    def validate(self, total_modes: int) -> None:
        """Check kind, targets and parameters against a register of total_modes.

        :raises InvalidGate: unknown kind or wrong arity
        :raises InvalidTargets: repeated or out-of-range targets
        :raises InvalidParameter: out-of-range parameters
        """
        if self.kind not in GATE_ARITY:
            raise InvalidGate(f"unknown gate kind {self.kind!r}")
        arity = GATE_ARITY[self.kind]
        if arity is not None and len(self.targets) != arity:
            raise InvalidGate(
                f"{self.kind} acts on {arity} modes, got targets {self.targets}"
            )
        _check_targets(self.targets, total_modes)
        if not all(math.isfinite(p) for p in self.params):
            raise InvalidParameter(f"{self.kind} parameters must be finite, got {self.params}")
        if self.kind == GATE_LOSS:
            _check_transmissivity(self.params[0])
        elif self.kind == GATE_INTERFEROMETER:
            if self.unitary is None or self.unitary.shape != (len(self.targets),) * 2:
                raise InvalidGate(f"interferometer on {self.targets} needs a matching unitary")
        elif self.kind == GATE_PERMUTATION:
            _check_permutation(self.permutation or (), len(self.targets))

    def mode_map(self) -> ComplexField:
        """Complex k×k matrix acting on the targets' annihilation operators.

        :raises InvalidGate: for active or non-unitary gates
        """
        if self.kind == GATE_ROTATION:
            return rotation_map(self.params[0])
        if self.kind == GATE_BEAMSPLITTER:
            return beamsplitter_map(*self.params)
        if self.kind == GATE_INTERFEROMETER:
            return self.unitary
        if self.kind == GATE_PERMUTATION:
            return permutation_map(self.permutation)
        raise InvalidGate(f"{self.kind} has no unitary mode map")

    def local_symplectic(self) -> SymplecticMatrix:
        """2k×2k symplectic in the targets' local xxpp ordering.

        :raises InvalidGate: for the loss channel
        """
        if self.kind == GATE_TMS:
            return _tms_local(self.params[0])
        if self.kind == GATE_LOSS:
            raise InvalidGate("the loss channel is not symplectic")
        return symplectic_from_unitary(self.mode_map())

    def adjoint(self) -> GateOp:
        """Inverse gate.

        :raises InvalidGate: for the loss channel
        """
        if self.kind == GATE_TMS:
            return GateOp.tms(-self.params[0], *self.targets)
        if self.kind == GATE_ROTATION:
            return GateOp.rotation(-self.params[0], self.targets[0])
        if self.kind == GATE_BEAMSPLITTER:
            theta, phi = self.params
            return GateOp.beamsplitter(-theta, phi, *self.targets)
        if self.kind == GATE_INTERFEROMETER:
            return GateOp.interferometer(self.unitary.conj().T, self.targets)
        if self.kind == GATE_PERMUTATION:
            return GateOp.mode_permutation(np.argsort(self.permutation), self.targets)
        raise InvalidGate("the loss channel has no adjoint")

    def to_line(self) -> str:
        """Serialise as `gate <kind> <targets> <params>`."""
        targets = ",".join(str(t) for t in self.targets)
        if self.kind == GATE_INTERFEROMETER:
            flat = (*self.unitary.real.ravel(), *self.unitary.imag.ravel())
            values = [repr(float(v)) for v in flat]
        elif self.kind == GATE_PERMUTATION:
            values = [str(int(p)) for p in self.permutation]
        else:
            values = [repr(float(p)) for p in self.params]
        return " ".join(["gate", self.kind, targets, *values])

    @classmethod
    def from_line(cls, line: str) -> GateOp:
        """Parse a line written by to_line.

        :raises InvalidGate: when the line is not a gate line
        """
        parts = line.split()
        if len(parts) < 3 or parts[0] != "gate":
            raise InvalidGate(f"not a gate line: {line!r}")
        kind = parts[1]
        targets = tuple(int(t) for t in parts[2].split(","))
        values = parts[3:]
        if kind == GATE_PERMUTATION:
            return cls.mode_permutation([int(v) for v in values], targets)
        if kind == GATE_INTERFEROMETER:
            k = len(targets)
            flat = np.array([float(v) for v in values])
            if flat.size != 2 * k * k:
                raise InvalidGate(f"interferometer line needs {2 * k * k} values")
            unitary = flat[: k * k].reshape(k, k) + 1j * flat[k * k :].reshape(k, k)
            return cls.interferometer(unitary, targets)
        return cls(kind, targets, tuple(float(v) for v in values))

    def __str__(self) -> str:
        """Return the serialised line."""
        return self.to_line()
