"""Gate and circuit containers.

Wire ``q`` carries bit ``q`` of the basis-state index (wire 0 is the least
significant bit), which lines up with the simulator's flat index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

SINGLE_QUBIT = ("H", "X", "Y", "Z", "P")
X_FAMILY = ("X", "CX", "CCX", "MCX")
GATE_NAMES = SINGLE_QUBIT + ("CX", "CCX", "MCX", "CU")

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True)
class Gate:
    """One gate.  ``ctrl_state[i]`` is 1 to fire on |1> of ``controls[i]``, 0 for |0>.

    ``CU`` applies ``I - 2|s><s|`` (minus the Grover diffusion) to its
    targets, ``|s>`` being the uniform superposition over the target wires.
    """

    name: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    ctrl_state: tuple[int, ...] | None = None
    param: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        state = (1,) * len(self.controls) if self.ctrl_state is None else tuple(int(s) for s in self.ctrl_state)
        object.__setattr__(self, "ctrl_state", state)
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")
        if len(state) != len(self.controls) or any(s not in (0, 1) for s in state):
            raise ValueError("ctrl_state must give 0/1 for every control")
        wires = self.targets + self.controls
        if len(set(wires)) != len(wires):
            raise ValueError(f"controls and targets overlap in {self}")
        if self.name == "P" and self.param is None:
            raise ValueError("P gate needs a phase parameter")
        if self.name in X_FAMILY and X_FAMILY[min(len(self.controls), 3)] != self.name:
            raise ValueError(f"{self.name} with {len(self.controls)} controls; use x_gate()")

    @property
    def wires(self) -> tuple[int, ...]:
        return self.controls + self.targets

    def matrix(self) -> np.ndarray:
        """Matrix of the target operation (index bit b <-> ``targets[b]``)."""
        if self.name in X_FAMILY:
            return _X
        if self.name == "H":
            return _H
        if self.name == "Y":
            return _Y
        if self.name == "Z":
            return _Z
        if self.name == "P":
            return np.diag([1.0, np.exp(1j * self.param)])
        d = 2 ** len(self.targets)
        return np.eye(d, dtype=np.complex128) - 2.0 / d


def x_gate(target: int, controls: Sequence[int] = (), ctrl_state: Sequence[int] | None = None) -> Gate:
    """X with any number of controls, named X/CX/CCX/MCX by control count."""
    return Gate(X_FAMILY[min(len(controls), 3)], (target,), tuple(controls), ctrl_state)


@dataclass
class Circuit:
    width: int
    gates: list[Gate] = field(default_factory=list)
    wire_map: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def append(self, gate: Gate) -> "Circuit":
        if any(not 0 <= w < self.width for w in gate.wires):
            raise ValueError(f"{gate} uses a wire outside width {self.width}")
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)
