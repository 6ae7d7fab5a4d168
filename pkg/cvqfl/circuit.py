"""Gate programs: ordered gate lists with stage bookkeeping, and their execution."""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
from typing import Sequence

import numpy as np

from .const import GATE_LOSS, GATE_PERMUTATION
from .exceptions import InvalidGate, InvalidState, InvalidTargets
from .gates import GateOp, apply_loss_inplace
from .gaussian import GaussianState, apply_local_symplectic_inplace
from .numerics import ComplexField

_LOGGER = logging.getLogger(__name__)

PROGRAM_HEADER = "program"
STAGE_MARKER = "stage"


@dataclass
class CircuitProgram:
    """Gates on total_modes modes, each tagged with the stage it runs in.

    Gates of one stage act on disjoint modes; the depth is the number of
    stages holding at least one gate.
    """

    total_modes: int
    ops: list[GateOp] = field(default_factory=list)
    stages: list[int] = field(default_factory=list)
    _current_stage: int = field(default=0, init=False, repr=False)

    def __post_init__(self) -> None:
        """Pick up the stage counter from pre-filled stages."""
        if len(self.stages) != len(self.ops):
            raise InvalidState("every op needs a stage index")
        self._current_stage = max(self.stages, default=0)

    def begin_stage(self) -> int:
        """Open a new stage; subsequent gates land in it."""
        self._current_stage = self.stage_count + 1
        return self._current_stage

    @property
    def stage_count(self) -> int:
        """Highest stage index in use."""
        return max(self._current_stage, max(self.stages, default=0))

    def append(self, op: GateOp, stage: int | None = None) -> None:
        """Validate op and add it to the given or the current stage."""
        op.validate(self.total_modes)
        if stage is None:
            stage = self._current_stage or self.begin_stage()
        self.ops.append(op)
        self.stages.append(stage)

    def extend(self, ops: Sequence[GateOp]) -> None:
        """Append several gates to the current stage."""
        for op in ops:
            self.append(op)

    @property
    def support(self) -> set[int]:
        """Modes touched by any gate."""
        return {mode for op in self.ops for mode in op.targets}

    @property
    def gate_count(self) -> int:
        """Physical gates; relabelings are free."""
        return sum(1 for op in self.ops if op.kind != GATE_PERMUTATION)

    @property
    def depth(self) -> int:
        """Number of non-empty stages."""
        return len(set(self.stages))

    def _check_compatible(self, other: CircuitProgram) -> None:
        if other.total_modes != self.total_modes:
            raise InvalidState(
                f"programs on {self.total_modes} and {other.total_modes} modes do not compose"
            )

    def __add__(self, other: CircuitProgram) -> CircuitProgram:
        """Run self, then other."""
        self._check_compatible(other)
        offset = self.stage_count
        return CircuitProgram(
            self.total_modes,
            [*self.ops, *other.ops],
            [*self.stages, *(stage + offset for stage in other.stages)],
        )

    def parallel(self, other: CircuitProgram) -> CircuitProgram:
        """Merge with a program on disjoint modes, stage by stage.

        :raises InvalidTargets: when the supports overlap
        """
        self._check_compatible(other)
        shared = self.support & other.support
        if shared:
            raise InvalidTargets(f"parallel programs share modes {sorted(shared)}")
        tagged = [(stage, 0, op) for stage, op in zip(self.stages, self.ops)]
        tagged += [(stage, 1, op) for stage, op in zip(other.stages, other.ops)]
        tagged.sort(key=lambda item: (item[0], item[1]))
        return CircuitProgram(
            self.total_modes, [op for *_, op in tagged], [stage for stage, *_ in tagged]
        )

    def inverse(self) -> CircuitProgram:
        """Adjoint program: reversed order, each gate replaced by its adjoint.

        :raises InvalidGate: when the program holds a loss channel
        """
        last = self.stage_count + 1
        return CircuitProgram(
            self.total_modes,
            [op.adjoint() for op in reversed(self.ops)],
            [last - stage for stage in reversed(self.stages)],
        )

    def to_text(self) -> str:
        """Line format: `program n`, then `stage s` markers and one gate line per gate."""
        lines = [f"{PROGRAM_HEADER} {self.total_modes}"]
        previous = None
        for stage, op in zip(self.stages, self.ops):
            if stage != previous:
                lines.append(f"{STAGE_MARKER} {stage}")
                previous = stage
            lines.append(op.to_line())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CircuitProgram:
        """Parse the format written by to_text.

        :raises InvalidGate: on malformed lines
        """
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines or not lines[0].startswith(PROGRAM_HEADER):
            raise InvalidGate(f"program text must start with '{PROGRAM_HEADER} <modes>'")
        program = cls(int(lines[0].split()[1]))
        stage = 1
        for line in lines[1:]:
            if line.startswith(STAGE_MARKER):
                stage = int(line.split()[1])
                continue
            program.append(GateOp.from_line(line), stage)
        return program

    def __str__(self) -> str:
        """Return the text form."""
        return self.to_text()


def run_program(state: GaussianState, program: CircuitProgram) -> None:
    """Execute program on state in place."""
    if program.total_modes != state.num_modes:
        raise InvalidState(
            f"program on {program.total_modes} modes cannot run on a {state.num_modes}-mode state"
        )
    for op in program.ops:
        if op.kind == GATE_LOSS:
            apply_loss_inplace(state, op.targets[0], op.params[0])
        else:
            apply_local_symplectic_inplace(state, op.local_symplectic(), op.targets)


def apply_program(state: GaussianState, program: CircuitProgram) -> GaussianState:
    """Return the state after running every gate of program in order.

    :param state: GaussianState: input, left untouched
    :param program: CircuitProgram: gates to run
    :returns: evolved copy
    :raises InvalidState: when the program and state sizes differ
    """
    result = state.copy()
    run_program(result, program)
    _LOGGER.debug(
        f"Ran {program.gate_count} gates in {program.depth} stages on {state.num_modes} modes"
    )
    return result


def program_to_unitary(
    program: CircuitProgram, modes: Sequence[int] | None = None
) -> ComplexField:
    """Compose the mode maps of a passive program restricted to modes.

    :param program: CircuitProgram: passive gates only
    :param modes: register modes, all modes of the program by default
    :returns: len(modes)×len(modes) unitary
    :raises InvalidGate: for an active or non-unitary gate
    :raises InvalidTargets: when a gate leaves the given modes
    """
    modes = list(range(program.total_modes)) if modes is None else list(modes)
    position = {mode: index for index, mode in enumerate(modes)}
    result = np.eye(len(modes), dtype=complex)
    for op in program.ops:
        if not op.is_passive:
            raise InvalidGate(f"{op.kind} gate has no unitary mode map")
        try:
            index = [position[target] for target in op.targets]
        except KeyError as e:
            raise InvalidTargets(f"gate on {op.targets} leaves modes {modes}") from e
        result[index, :] = op.mode_map() @ result[index, :]
    return result
