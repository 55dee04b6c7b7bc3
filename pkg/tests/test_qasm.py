from __future__ import annotations

import numpy as np
import pytest

from qwsearch.circuits import Circuit, Gate, circuit_unitary, export_qasm, parse_qasm, search_circuit, step_circuit, x_gate
from qwsearch.lattice import LabeledMarks, LatticeConfig, Labeling

CASES = [
    (LatticeConfig(2), LabeledMarks(((0, 0, 0),)), None),
    (LatticeConfig(2, layers=2, labeling=Labeling.STATIC), LabeledMarks(((0, 0, 0), (1, 1, 1))), None),
    (LatticeConfig(2, layers=2, labeling=Labeling.DYNAMIC), LabeledMarks(((0, 0, 0), (1, 1, 1))), None),
    (LatticeConfig(4), LabeledMarks(((1, 2, 0),)), "hadamard"),
]


@pytest.mark.parametrize("cfg, marks, variant", CASES)
def test_round_trip_is_exact(cfg, marks, variant):
    circ = search_circuit(marks, cfg, 2, variant)
    text = export_qasm(circ)
    back = parse_qasm(text)
    assert back.width == circ.width
    assert back.gates == circ.gates
    assert export_qasm(back) == text


def test_header_and_definitions():
    circ = Circuit(5, [x_gate(4, (0, 1, 2), (1, 0, 1)), Gate("CU", (3, 4), (0, 1), (0, 1)), Gate("P", (2,), param=0.25)])
    text = export_qasm(circ)
    assert text.startswith('OPENQASM 2.0;\ninclude "qelib1.inc";\n')
    assert "gate mcx_101 " in text and "gate negdiff2_c01 " in text
    assert "u1(0.25) q[2];" in text
    assert "qreg q[5];" in text


def test_parse_rejects_unknown_gate():
    with pytest.raises(ValueError, match="unknown gate"):
        parse_qasm('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\nt q[0];\n')
    with pytest.raises(ValueError):
        parse_qasm("x q[0];")


@pytest.mark.parametrize("cfg, marks, variant", CASES)
def test_external_reader_agrees(cfg, marks, variant):
    qasm2 = pytest.importorskip("qiskit.qasm2")
    quantum_info = pytest.importorskip("qiskit.quantum_info")
    circ = step_circuit(marks, cfg, variant)
    theirs = quantum_info.Operator(qasm2.loads(export_qasm(circ))).data
    ours = circuit_unitary(circ)
    # both little-endian; the exported gates carry no stray global phase
    np.testing.assert_allclose(theirs, ours, atol=1e-10)
