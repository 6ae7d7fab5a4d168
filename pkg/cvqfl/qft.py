"""Radix-2 Cooley–Tukey Fourier layer built from rotations and 50:50 beam splitters.

After the layer acts on both registers of an encoded state, the complex
cross block xx + i·xp equals λ·F_m·D·F_nᵀ.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math
from typing import Sequence

import numpy as np

from .circuit import CircuitProgram, apply_program
from .encoder import EncodedState
from .exceptions import InvalidSize, InvalidTargets
from .gates import GateOp
from .gaussian import RegisterLayout, cross_blocks
from .numerics import ComplexField, RealMatrix, bit_reversal_permutation, is_power_of_two

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectrumReadout:
    """Complex spectrum read from the cross blocks, plus the redundant p-blocks."""

    spectrum: ComplexField
    scale: float
    pp: RealMatrix
    px: RealMatrix

    def redundant_block_error(self) -> float:
        """Max deviation of pp from −λRe(D̂) and of px from λIm(D̂)."""
        scaled = self.scale * self.spectrum
        return float(
            max(
                np.max(np.abs(self.pp + scaled.real)),
                np.max(np.abs(self.px - scaled.imag)),
            )
        )


@dataclass(frozen=True)
class QftGateReport:
    """Resources of the two-register layer next to the classical FFT."""

    gate_count: int
    depth: int
    classical_butterflies: int


def butterfly_block(program: CircuitProgram, i: int, j: int, phi: float) -> None:
    """Append R(φ + π) on j and BS(π/4, 0) on (i, j): (a, b) ↦ ((a + ωb)/√2, (a − ωb)/√2)."""
    if i == j:
        raise InvalidTargets(f"butterfly needs two distinct modes, got {i}")
    program.append(GateOp.rotation(phi + math.pi, j))
    program.append(GateOp.beamsplitter(math.pi / 4, 0.0, i, j))


def build_ct_qft_1d(modes: Sequence[int], total_modes: int | None = None) -> CircuitProgram:
    """Decimation-in-time QFT on one register.

    A bit-reversal relabeling is followed by log₂N butterfly stages; stage s
    pairs t with t + 2^{s−1} inside each group of 2^s with twiddle −2πk/2^s.

    :param modes: the N register modes, in frequency order
    :param total_modes: size of the program, max(modes) + 1 by default
    :raises InvalidSize: when N is not a power of two
    """
    size = len(modes)
    if not is_power_of_two(size):
        raise InvalidSize(f"QFT register size must be a power of two, got {size}")
    program = CircuitProgram(max(modes) + 1 if total_modes is None else total_modes)

    program.begin_stage()
    program.append(GateOp.mode_permutation(bit_reversal_permutation(size), modes))

    span = 2
    while span <= size:
        half = span // 2
        program.begin_stage()
        for group in range(0, size, span):
            for k in range(half):
                butterfly_block(
                    program, modes[group + k], modes[group + k + half], -2 * math.pi * k / span
                )
        span *= 2
    return program


def qft_program_2d(
    layout: RegisterLayout, rows: bool = True, cols: bool = True
) -> CircuitProgram:
    """QFT on r₁ and/or r₂, both registers running in parallel.

    :raises InvalidSize: when a transformed register is not a power of two
    """
    total = layout.total_modes
    program = CircuitProgram(total)
    if rows:
        program = program.parallel(build_ct_qft_1d(layout.row_modes, total))
    if cols:
        program = program.parallel(build_ct_qft_1d(layout.col_modes, total))
    return program


def apply_qft2d(encoded: EncodedState) -> EncodedState:
    """Fourier transform the encoded matrix along both axes."""
    program = qft_program_2d(encoded.layout)
    _LOGGER.debug(f"Applying QFT: {program.gate_count} gates, depth {program.depth}")
    return encoded.with_state(apply_program(encoded.state, program))


def apply_inverse_qft2d(encoded: EncodedState) -> EncodedState:
    """Adjoint of apply_qft2d."""
    program = qft_program_2d(encoded.layout).inverse()
    return encoded.with_state(apply_program(encoded.state, program))


def read_spectrum(encoded: EncodedState) -> SpectrumReadout:
    """D̂ = (σ′_{x r₁, x r₂} + i·σ′_{x r₁, p r₂})/λ."""
    blocks = cross_blocks(encoded.state, encoded.layout)
    return SpectrumReadout(
        spectrum=(blocks.xx + 1j * blocks.xp) / encoded.scale,
        scale=encoded.scale,
        pp=blocks.pp,
        px=blocks.px,
    )


def classical_fft_cost(m: int, n: int) -> int:
    """Butterflies of a row–column radix-2 FFT."""
    return m * (n // 2) * int(math.log2(n)) + n * (m // 2) * int(math.log2(m))


def qft_gate_report(m: int, n: int) -> QftGateReport:
    """Exact gate count and depth of the two-register layer.

    :raises InvalidSize: for non-power-of-two registers
    """
    program = qft_program_2d(RegisterLayout(m, n))
    return QftGateReport(program.gate_count, program.depth, classical_fft_cost(m, n))
