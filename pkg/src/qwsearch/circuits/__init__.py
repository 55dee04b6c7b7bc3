"""Circuit compilation of the walk-search operators and dense verification."""

from .builders import (
    WireLayout,
    decompose_mcx,
    decrementor,
    diffusion_circuit,
    flipflop_circuit,
    incrementor,
    oracle_circuit,
    search_circuit,
    step_circuit,
    wire_layout,
)
from .gates import Circuit, Gate, x_gate
from .qasm import export_qasm, parse_qasm
from .resources import ResourceReport, gate_counts, mcx_toffoli_estimate, shift_toffoli_estimate
from .simulate import circuit_statevector, circuit_unitary, phase_distance

__all__ = [
    "Circuit",
    "Gate",
    "ResourceReport",
    "WireLayout",
    "circuit_statevector",
    "circuit_unitary",
    "decompose_mcx",
    "decrementor",
    "diffusion_circuit",
    "export_qasm",
    "flipflop_circuit",
    "gate_counts",
    "incrementor",
    "mcx_toffoli_estimate",
    "oracle_circuit",
    "parse_qasm",
    "phase_distance",
    "search_circuit",
    "shift_toffoli_estimate",
    "step_circuit",
    "wire_layout",
    "x_gate",
]
