"""Bipartite encoding of a real matrix into the x–x cross-covariance block.

D = U·Σ·Vᵀ is loaded by two-mode squeezers carrying the singular values,
followed by U on the row register and V on the column register.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math

import numpy as np
import numpy.typing as npt
from scipy.special import xlogy

from .circuit import CircuitProgram, apply_program
from .clements import clements_decompose, mesh_depth
from .const import DEFAULT_MAX_SQUEEZE, DEFAULT_SCALE_THRESHOLD, SCHMIDT_TAIL
from .exceptions import InvalidParameter, InvalidSize
from .gates import GateOp
from .gaussian import GaussianState, RegisterLayout, cross_blocks, vacuum
from .numerics import RealMatrix, SvdResult, svd

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class EncodingConfig:
    """Encoding options.

    scale is the global factor λ: the cross block holds λ·D.
    """

    scale: float
    m: int
    n: int
    max_squeeze: float = DEFAULT_MAX_SQUEEZE
    compile_interferometers: bool = False

    def __post_init__(self) -> None:
        """Validate ranges."""
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise InvalidParameter(f"lambda must be positive and finite, got {self.scale}")
        if self.m < 1 or self.n < 1:
            raise InvalidSize(f"matrix dimensions must be positive, got {self.m}x{self.n}")
        if not self.max_squeeze > 0:
            raise InvalidParameter(f"max_squeeze must be positive, got {self.max_squeeze}")


@dataclass
class EncodedState:
    """Gaussian state holding λ·D in its inter-register x–x block."""

    state: GaussianState
    layout: RegisterLayout
    config: EncodingConfig
    svd: SvdResult

    @property
    def scale(self) -> float:
        """λ used at encoding time."""
        return self.config.scale

    @property
    def squeezing(self) -> npt.NDArray[np.float64]:
        """Squeezing parameter of each TMS pair."""
        return squeezing_params(self.svd.singular_values, self.scale, self.config.max_squeeze)

    def with_state(self, state: GaussianState) -> EncodedState:
        """Same encoding metadata around another state."""
        return EncodedState(state, self.layout, self.config, self.svd)


@dataclass(frozen=True)
class EncodingGateReport:
    """Resource count of the encoding stage."""

    tms: int
    bs_ps_pairs: int
    depth: int
    svd_cost: int


def default_scale(singular_values: npt.ArrayLike) -> float:
    """λ = 1 while σ_max ≤ DEFAULT_SCALE_THRESHOLD, otherwise 1/σ_max."""
    sigma_max = float(np.max(singular_values, initial=0.0))
    return 1.0 if sigma_max <= DEFAULT_SCALE_THRESHOLD else 1.0 / sigma_max


def squeezing_params(
    singular_values: npt.ArrayLike, scale: float, max_squeeze: float = DEFAULT_MAX_SQUEEZE
) -> npt.NDArray[np.float64]:
    """r_k = ½·arcsinh(λσ_k), so that sinh(2r_k) = λσ_k.

    :raises InvalidParameter: for negative σ, λ ≤ 0, or r_k above max_squeeze
    """
    sigma = np.asarray(singular_values, dtype=float)
    if scale <= 0:
        raise InvalidParameter(f"lambda must be positive, got {scale}")
    if np.any(sigma < 0):
        raise InvalidParameter("singular values must be non-negative")
    squeezing = 0.5 * np.arcsinh(scale * sigma)
    if squeezing.size and squeezing.max() > max_squeeze:
        raise InvalidParameter(
            f"squeezing {squeezing.max():.3f} exceeds max_squeeze {max_squeeze}; "
            f"use a smaller lambda than {scale}"
        )
    return squeezing


def encoding_program(
    decomposition: SvdResult, config: EncodingConfig, layout: RegisterLayout
) -> CircuitProgram:
    """TMS stage on pairs (k, m + k), then U on r₁ and V on r₂.

    With compile_interferometers the two unitaries become Clements meshes.
    """
    total = layout.total_modes
    squeezing = squeezing_params(decomposition.singular_values, config.scale, config.max_squeeze)
    _LOGGER.debug(f"Squeezing parameters: {squeezing}")

    program = CircuitProgram(total)
    program.begin_stage()
    for k, r in enumerate(squeezing):
        program.append(GateOp.tms(float(r), layout.row_modes[k], layout.col_modes[k]))

    if config.compile_interferometers:
        rows = clements_decompose(decomposition.u).to_program(layout.row_modes, total)
        cols = clements_decompose(decomposition.v).to_program(layout.col_modes, total)
        return program + rows.parallel(cols)

    program.begin_stage()
    program.append(GateOp.interferometer(decomposition.u, layout.row_modes))
    program.append(GateOp.interferometer(decomposition.v, layout.col_modes))
    return program


def encode(
    matrix: npt.ArrayLike,
    config: EncodingConfig | None = None,
    *,
    scale: float | None = None,
) -> EncodedState:
    """Load a real m×n matrix into an (m + n)-mode Gaussian state.

    :param matrix: real finite m×n matrix D
    :param config: EncodingConfig | None: full options; built from scale when omitted
    :param scale: λ when no config is given, default_scale of D when None
    :returns: EncodedState whose x–x cross block equals λ·D
    :raises InvalidParameter: when the squeeze cap is exceeded
    :raises ConvergenceError: when the SVD does not converge
    """
    decomposition = svd(matrix)
    m, n = decomposition.shape
    if config is None:
        if scale is None:
            scale = default_scale(decomposition.singular_values)
        config = EncodingConfig(scale, m, n)
    elif (config.m, config.n) != (m, n):
        raise InvalidSize(f"config is for {config.m}x{config.n}, matrix is {m}x{n}")
    _LOGGER.debug(f"Encoding {m}x{n} matrix, lambda={config.scale}")

    layout = RegisterLayout(m, n)
    program = encoding_program(decomposition, config, layout)
    state = apply_program(vacuum(layout.total_modes), program)
    return EncodedState(state, layout, config, decomposition)


def read_encoded(encoded: EncodedState) -> RealMatrix:
    """Recover D = σ_{x r₁, x r₂}/λ."""
    return cross_blocks(encoded.state, encoded.layout).xx / encoded.scale


def entanglement_entropy(r: float) -> float:
    """E(r) = cosh²r·ln cosh²r − sinh²r·ln sinh²r, in nats."""
    ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    return float(xlogy(ch2, ch2) - xlogy(sh2, sh2))


def schmidt_entropy(r: float) -> float:
    """−Σ p_k ln p_k over the TMS Schmidt spectrum p_k = (1 − λ)λ^k, λ = tanh²r.

    The series stops once the remaining tail mass λ^K drops below SCHMIDT_TAIL.
    """
    ratio = math.tanh(r) ** 2
    if ratio == 0.0:
        return 0.0
    terms = max(1, math.ceil(math.log(SCHMIDT_TAIL) / math.log(ratio)))
    probabilities = (1.0 - ratio) * ratio ** np.arange(terms)
    return float(-np.sum(xlogy(probabilities, probabilities)))


def entanglement_spectrum(encoded: EncodedState) -> npt.NDArray[np.float64]:
    """E(r_k) of every TMS pair."""
    return np.array([entanglement_entropy(float(r)) for r in encoded.squeezing])


def svd_cost(m: int, n: int) -> int:
    """Classical preprocessing cost m·n·min(m, n)."""
    return m * n * min(m, n)


def encoding_gate_report(m: int, n: int) -> EncodingGateReport:
    """Gate resources of the encoding stage for an m×n matrix.

    The depth counts the squeezing layer, the deeper of the two meshes and
    the layer of output phases.
    """
    if m < 1 or n < 1:
        raise InvalidSize(f"matrix dimensions must be positive, got {m}x{n}")
    return EncodingGateReport(
        tms=min(m, n),
        bs_ps_pairs=m * (m - 1) // 2 + n * (n - 1) // 2,
        depth=2 + max(mesh_depth(m), mesh_depth(n)),
        svd_cost=svd_cost(m, n),
    )
