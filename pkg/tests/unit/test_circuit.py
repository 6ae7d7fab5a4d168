"""Tests for gate programs."""
import math

import numpy as np
from numpy.testing import assert_allclose
import pytest

from cvqfl.circuit import CircuitProgram, apply_program, program_to_unitary, run_program
from cvqfl.exceptions import InvalidGate, InvalidState, InvalidTargets
from cvqfl.gates import GateOp, beamsplitter_map
from cvqfl.gaussian import check_physicality, vacuum


def _sample_program() -> CircuitProgram:
    program = CircuitProgram(4)
    program.begin_stage()
    program.append(GateOp.tms(0.4, 0, 2))
    program.append(GateOp.tms(0.2, 1, 3))
    program.begin_stage()
    program.append(GateOp.beamsplitter(0.3, 0.1, 0, 1))
    program.append(GateOp.rotation(1.2, 3))
    program.begin_stage()
    program.append(GateOp.mode_permutation((1, 0), (2, 3)))
    return program


def test_stages_and_counts():
    """Test stage bookkeeping."""
    program = _sample_program()
    assert program.stages == [1, 1, 2, 2, 3]
    assert program.stage_count == 3
    assert program.depth == 3
    assert program.gate_count == 4
    assert program.support == {0, 1, 2, 3}


def test_append_validates():
    """Test that invalid gates never enter a program."""
    program = CircuitProgram(2)
    with pytest.raises(InvalidTargets):
        program.append(GateOp.rotation(0.1, 2))
    assert program.ops == []


def test_append_explicit_stage():
    """Test gates placed in a given stage."""
    program = CircuitProgram(3)
    program.append(GateOp.rotation(0.1, 0), stage=4)
    program.append(GateOp.rotation(0.1, 1), stage=4)
    assert program.depth == 1
    assert program.begin_stage() == 5


def test_concatenation_offsets_stages():
    """Test that the second program runs after the first."""
    first = _sample_program()
    combined = first + _sample_program()
    assert combined.stages == [1, 1, 2, 2, 3, 4, 4, 5, 5, 6]
    assert combined.gate_count == 8


def test_concatenation_size_mismatch():
    """Test register size check."""
    with pytest.raises(InvalidState):
        CircuitProgram(2) + CircuitProgram(3)


def test_parallel_merges_stages():
    """Test stage-wise merge of disjoint programs."""
    left = CircuitProgram(4)
    left.extend([GateOp.rotation(0.1, 0), GateOp.beamsplitter(0.2, 0.0, 0, 1)])
    right = CircuitProgram(4)
    right.append(GateOp.rotation(0.3, 2))
    right.begin_stage()
    right.append(GateOp.rotation(0.4, 3))

    merged = left.parallel(right)
    assert merged.stages == [1, 1, 1, 2]
    assert merged.depth == 2
    assert [op.targets for op in merged.ops] == [(0,), (0, 1), (2,), (3,)]


def test_parallel_rejects_overlap():
    """Test shared-mode check."""
    left = CircuitProgram(2)
    left.append(GateOp.rotation(0.1, 0))
    right = CircuitProgram(2)
    right.append(GateOp.rotation(0.1, 0))
    with pytest.raises(InvalidTargets):
        left.parallel(right)


def test_inverse_restores_state():
    """Test that program followed by its inverse is the identity."""
    program = _sample_program()
    state = apply_program(vacuum(4), program)
    assert not np.allclose(state.cov, np.eye(8))

    restored = apply_program(state, program.inverse())
    assert_allclose(restored.cov, np.eye(8), atol=1e-12)


def test_inverse_rejects_loss():
    """Test that loss channels cannot be inverted."""
    program = CircuitProgram(1)
    program.append(GateOp.loss(0.5, 0))
    with pytest.raises(InvalidGate):
        program.inverse()


def test_run_program_in_place():
    """Test in-place execution, including loss."""
    program = CircuitProgram(2)
    program.append(GateOp.tms(0.5, 0, 1))
    program.append(GateOp.loss(0.5, 0))
    state = vacuum(2)
    run_program(state, program)

    expected = 0.5 * math.cosh(1.0) + 0.5
    assert state.cov[0, 0] == pytest.approx(expected)
    assert state.cov[0, 1] == pytest.approx(math.sqrt(0.5) * math.sinh(1.0))
    assert check_physicality(state).passed


def test_run_program_size_mismatch():
    """Test register size check."""
    with pytest.raises(InvalidState):
        run_program(vacuum(3), CircuitProgram(2))


def test_apply_program_leaves_input():
    """Test that the functional form copies."""
    state = vacuum(4)
    apply_program(state, _sample_program())
    assert_allclose(state.cov, np.eye(8))


def test_program_to_unitary():
    """Test composition of passive mode maps."""
    program = CircuitProgram(3)
    program.append(GateOp.beamsplitter(0.3, 0.5, 1, 2))
    program.append(GateOp.rotation(0.7, 1))

    expected = np.diag([math.e ** (0.7j), 1.0]) @ beamsplitter_map(0.3, 0.5)
    assert_allclose(program_to_unitary(program, (1, 2)), expected, atol=1e-15)
    assert program_to_unitary(program).shape == (3, 3)


def test_program_to_unitary_rejects():
    """Test active gates and gates outside the register."""
    active = CircuitProgram(2)
    active.append(GateOp.tms(0.1, 0, 1))
    with pytest.raises(InvalidGate):
        program_to_unitary(active)

    passive = CircuitProgram(3)
    passive.append(GateOp.rotation(0.1, 2))
    with pytest.raises(InvalidTargets):
        program_to_unitary(passive, (0, 1))


def test_text_format():
    """Test program text parsing."""
    program = _sample_program()
    text = program.to_text()
    parsed = CircuitProgram.from_text(text)

    assert text.splitlines()[:2] == ["program 4", "stage 1"]
    assert parsed.stages == program.stages
    assert [op.to_line() for op in parsed.ops] == [op.to_line() for op in program.ops]
    assert str(parsed) == text


def test_text_format_rejects():
    """Test missing header."""
    with pytest.raises(InvalidGate):
        CircuitProgram.from_text("stage 1\n")
