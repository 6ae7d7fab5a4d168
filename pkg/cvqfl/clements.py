"""Rectangular beam-splitter mesh decomposition of passive unitaries.

Each element T(θ, φ) acts on neighbouring modes (k, k+1) as
[[e^{iφ}cosθ, -sinθ], [e^{iφ}sinθ, cosθ]], i.e. Rotation(φ) on k followed by
BeamSplitter(θ, 0) on (k, k+1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
import math
from typing import Iterator, Sequence

import numpy as np

from .circuit import CircuitProgram
from .const import UNITARITY_TOLERANCE
from .exceptions import InvalidGate, InvalidSize, PhysicalityError
from .gates import GateOp
from .gaussian import unitarity_deviation
from .numerics import ComplexField

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeshElement:
    """One beam-splitter/phase-shifter pair on modes (mode, mode + 1)."""

    layer: int
    mode: int
    theta: float
    phi: float


@dataclass
class ClementsMesh:
    """Mesh of size ℓ: elements in application order, then output phases."""

    size: int
    elements: list[MeshElement] = field(default_factory=list)
    output_phases: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def pair_count(self) -> int:
        """Number of beam-splitter/phase-shifter pairs."""
        return len(self.elements)

    @property
    def depth(self) -> int:
        """Number of mesh columns."""
        return max((element.layer for element in self.elements), default=0)

    def reconstruct(self) -> ComplexField:
        """Unitary realised by the mesh."""
        return clements_reconstruct(self)

    def to_ops(self, modes: Sequence[int]) -> list[GateOp]:
        """Compile to Rotation and BeamSplitter gates on the given modes."""
        if len(modes) != self.size:
            raise InvalidGate(f"mesh of size {self.size} given {len(modes)} modes")
        ops: list[GateOp] = []
        for element in self.elements:
            upper, lower = modes[element.mode], modes[element.mode + 1]
            ops.append(GateOp.rotation(element.phi, upper))
            ops.append(GateOp.beamsplitter(element.theta, 0.0, upper, lower))
        ops.extend(
            GateOp.rotation(float(phase), mode)
            for phase, mode in zip(self.output_phases, modes)
        )
        return ops

    def to_program(self, modes: Sequence[int], total_modes: int) -> CircuitProgram:
        """Compile into a program with one stage per mesh column plus the output phases."""
        program = CircuitProgram(total_modes)
        ops = self.to_ops(modes)
        for index, element in enumerate(self.elements):
            program.append(ops[2 * index], element.layer)
            program.append(ops[2 * index + 1], element.layer)
        for op in ops[2 * self.pair_count :]:
            program.append(op, self.depth + 1)
        return program

    def to_text(self) -> str:
        """Line format: `clements ℓ`, `layer k,k+1 theta phi` per pair, `outphases ...`."""
        lines = [f"clements {self.size}"]
        lines.extend(
            f"{e.layer} {e.mode},{e.mode + 1} {float(e.theta)!r} {float(e.phi)!r}"
            for e in self.elements
        )
        lines.append(" ".join(["outphases", *(repr(float(p)) for p in self.output_phases)]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> ClementsMesh:
        """Parse the line format written by to_text.

        :raises InvalidGate: on malformed input
        """
        lines = [line.split() for line in text.splitlines() if line.strip()]
        try:
            if lines[0][0] != "clements" or lines[-1][0] != "outphases":
                raise InvalidGate("mesh text must start with 'clements' and end with 'outphases'")
            size = int(lines[0][1])
            elements = []
            for layer, pair, theta, phi in lines[1:-1]:
                upper, lower = (int(k) for k in pair.split(","))
                if lower != upper + 1:
                    raise InvalidGate(f"mesh pairs must be neighbours, got {pair}")
                elements.append(MeshElement(int(layer), upper, float(theta), float(phi)))
            phases = np.array([float(p) for p in lines[-1][1:]])
        except (IndexError, ValueError) as e:
            raise InvalidGate(f"malformed mesh text: {e}") from e
        if phases.size != size:
            raise InvalidGate(f"expected {size} output phases, got {phases.size}")
        return cls(size, elements, phases)


def _right_null(a: complex, b: complex) -> tuple[float, float]:
    """Angles of T such that [a, b]·T⁻¹ has a zero first entry."""
    return math.atan2(abs(a), abs(b)), float(np.angle(a) - np.angle(b))


def _left_null(a: complex, b: complex) -> tuple[float, float]:
    """Angles of T such that T·[a, b]ᵀ has a zero second entry."""
    return math.atan2(abs(b), abs(a)), float(math.pi + np.angle(b) - np.angle(a))


def _element_matrix(theta: float, phi: float) -> ComplexField:
    c, s = math.cos(theta), math.sin(theta)
    phase = np.exp(1j * phi)
    return np.array([[phase * c, -s], [phase * s, c]])


def _assign_layers(pairs: list[tuple[int, float, float]], size: int) -> list[MeshElement]:
    """ASAP layering of pairs on neighbouring modes."""
    busy = [0] * size
    elements = []
    for mode, theta, phi in pairs:
        layer = max(busy[mode], busy[mode + 1]) + 1
        busy[mode] = busy[mode + 1] = layer
        elements.append(MeshElement(layer, mode, theta, phi))
    return elements


def _nulling_schedule(size: int) -> Iterator[tuple[bool, int, int]]:
    """Yield (from_right, row, col) of each element to null, in order."""
    for i in range(1, size):
        if i % 2:
            for j in range(i):
                yield True, size - 1 - j, i - 1 - j
        else:
            for j in range(1, i + 1):
                yield False, size + j - i - 1, j - 1


def mesh_depth(size: int) -> int:
    """Columns of the mesh for an ℓ-mode unitary, independent of its angles."""
    right = [col for from_right, _, col in _nulling_schedule(size) if from_right]
    left = [row - 1 for from_right, row, _ in _nulling_schedule(size) if not from_right]
    pairs = [(mode, 0.0, 0.0) for mode in right + left[::-1]]
    return max((element.layer for element in _assign_layers(pairs, size)), default=0)


def clements_decompose(unitary: ComplexField) -> ClementsMesh:
    """Decompose an ℓ×ℓ unitary into ℓ(ℓ−1)/2 pairs and ℓ output phases.

    Alternating column and row nulling of the lower triangle leaves a
    diagonal; the row operations are then pushed through it.

    :param unitary: ComplexField: ℓ×ℓ unitary
    :returns: ClementsMesh whose reconstruction is the input
    :raises PhysicalityError: when the input is not unitary to UNITARITY_TOLERANCE
    """
    work = np.array(unitary, dtype=complex)
    if work.ndim != 2 or work.shape[0] != work.shape[1] or work.shape[0] < 1:
        raise InvalidSize(f"expected a non-empty square matrix, got shape {work.shape}")
    deviation = unitarity_deviation(work)
    if deviation > UNITARITY_TOLERANCE:
        _LOGGER.error(f"Refusing to decompose a non-unitary matrix, {deviation=}")
        raise PhysicalityError("matrix is not unitary", deviation)

    size = work.shape[0]
    right: list[tuple[int, float, float]] = []
    left: list[tuple[int, float, float]] = []
    for from_right, row, col in _nulling_schedule(size):
        if from_right:
            theta, phi = _right_null(work[row, col], work[row, col + 1])
            block = _element_matrix(theta, phi)
            work[:, col : col + 2] = work[:, col : col + 2] @ block.conj().T
            right.append((col, theta, phi))
        else:
            theta, phi = _left_null(work[row - 1, col], work[row, col])
            block = _element_matrix(theta, phi)
            work[row - 1 : row + 1, :] = block @ work[row - 1 : row + 1, :]
            left.append((row - 1, theta, phi))

    phases = np.angle(np.diag(work)).astype(float)
    moved: list[tuple[int, float, float]] = []
    for mode, theta, phi in reversed(left):
        psi1, psi2 = phases[mode], phases[mode + 1]
        moved.append((mode, theta, math.pi + psi1 - psi2))
        phases[mode] = math.pi - phi + psi2

    mesh = ClementsMesh(size, _assign_layers(right + moved, size), phases)
    _LOGGER.debug(f"Decomposed {size}x{size} unitary into {mesh.pair_count} pairs")
    return mesh


def clements_reconstruct(mesh: ClementsMesh) -> ComplexField:
    """Multiply the mesh elements in application order, then the output phases."""
    result = np.eye(mesh.size, dtype=complex)
    for element in mesh.elements:
        k = element.mode
        result[k : k + 2, :] = _element_matrix(element.theta, element.phi) @ result[k : k + 2, :]
    return np.diag(np.exp(1j * np.asarray(mesh.output_phases))) @ result
