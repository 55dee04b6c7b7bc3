"""Gate-level constructions of the walk-search operators.

Wire layout for a lattice of side ``L = 2**n`` with ``m = 2**D'`` layers
(``D = 2n`` position wires), least significant first::

    label z  : wires 0 .. D'-1
    y        : next n wires
    x        : next n wires
    coin     : 2 wires (j, i), or 3 wires (k, j, i) for dynamic labeling

so a circuit basis index equals the simulator's flat index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import CircuitError
from ..lattice import LabeledMarks, LatticeConfig, Labeling
from .gates import Circuit, Gate, x_gate


@dataclass(frozen=True)
class WireLayout:
    label: tuple[int, ...]
    y: tuple[int, ...]
    x: tuple[int, ...]
    coin: tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.label) + len(self.y) + len(self.x) + len(self.coin)

    @property
    def position_bits(self) -> int:
        """``D``: position wires over both axes."""
        return len(self.x) + len(self.y)

    def as_dict(self) -> dict[str, tuple[int, ...]]:
        return {"label": self.label, "y": self.y, "x": self.x, "coin": self.coin}


def wire_layout(config: LatticeConfig) -> WireLayout:
    if not config.circuit_compatible:
        raise CircuitError(
            f"side {config.side} and layers {config.layers} must be powers of two for circuit compilation"
        )
    n = config.side.bit_length() - 1
    dl = config.layers.bit_length() - 1
    nc = 3 if config.labeling is Labeling.DYNAMIC else 2
    start = 0
    blocks = []
    for size in (dl, n, n, nc):
        blocks.append(tuple(range(start, start + size)))
        start += size
    return WireLayout(*blocks)


def translate(
    wires: Sequence[int],
    direction: int,
    controls: Sequence[int] = (),
    ctrl_state: Sequence[int] | None = None,
) -> list[Gate]:
    """Cyclic +1 (``direction=+1``) or -1 on the register ``wires`` (LSB first).

    Bit ``i`` flips when every lower bit is 1 (increment) or 0 (decrement);
    gates run from the top bit down so the lower bits are still unmodified.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    controls = tuple(controls)
    ctrl_state = (1,) * len(controls) if ctrl_state is None else tuple(ctrl_state)
    lower_state = 1 if direction == 1 else 0
    gates = []
    for i in reversed(range(len(wires))):
        lower = tuple(wires[:i])
        gates.append(x_gate(wires[i], controls + lower, ctrl_state + (lower_state,) * len(lower)))
    return gates


def incrementor(n: int) -> Circuit:
    """``|x> -> |x + 1 mod 2**n>`` on wires ``0..n-1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Circuit(n, translate(range(n), +1), {"register": tuple(range(n))})


def decrementor(n: int) -> Circuit:
    """``|x> -> |x - 1 mod 2**n>``: the incrementor with 0-controls."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Circuit(n, translate(range(n), -1), {"register": tuple(range(n))})


def diffusion_gates(wires: Sequence[int], variant: str = "compact") -> list[Gate]:
    """Grover diffusion on ``wires``, up to a global phase.

    ``compact`` (two wires only) uses one CX and four single-qubit gates.
    ``hadamard`` conjugates ``I - 2|0..0><0..0|`` (via X-wrapped multi-controlled Z)
    with Hadamards, which equals ``-G``.
    """
    wires = tuple(wires)
    if variant == "compact":
        if len(wires) != 2:
            raise ValueError("compact diffusion is only defined on 2 wires")
        a, b = wires
        return [Gate("Z", (a,)), Gate("H", (b,)), x_gate(a, (b,)), Gate("Y", (a,)), Gate("H", (b,))]
    if variant != "hadamard":
        raise ValueError(f"unknown diffusion variant {variant!r}")
    *rest, last = wires
    layer_h = [Gate("H", (w,)) for w in wires]
    layer_x = [Gate("X", (w,)) for w in wires]
    mcz = [Gate("H", (last,)), x_gate(last, rest), Gate("H", (last,))]
    return layer_h + layer_x + mcz + layer_x + layer_h


def diffusion_circuit(coin_wires: int = 2, variant: str = "compact") -> Circuit:
    return Circuit(coin_wires, diffusion_gates(range(coin_wires), variant), {"coin": tuple(range(coin_wires))})


def _swap_extremes(wires: Sequence[int]) -> list[Gate]:
    """Exchange |0...0> and |1...1> on ``wires``; every other state is fixed."""
    head, *tail = wires
    fan = [x_gate(t, (head,)) for t in tail]
    return fan + [x_gate(head, tail, (0,) * len(tail))] + fan[::-1]


def _label_hop(k_wire: int, label: Sequence[int]) -> list[Gate]:
    """Open-boundary label move: (k=0, z) -> (1, z+1), (k=1, z) -> (0, z-1), self-loops at the ends.

    Encoding ``u = 2z + (1 - k)`` turns the move into the pairing
    (1,2), (3,4), ..., with 0 and 2m-1 fixed, i.e. ``u -> ((u - 1) ^ 1) + 1``
    followed by undoing the 0 <-> 2m-1 wrap.
    """
    u = (k_wire, *label)
    flip = [Gate("X", (k_wire,))]
    return flip + translate(u, -1) + flip + translate(u, +1) + _swap_extremes(u) + flip


def flipflop_gates(config: LatticeConfig, layout: WireLayout | None = None) -> list[Gate]:
    if not config.periodic:
        raise CircuitError("open-boundary shift circuits are not supported; use a periodic boundary")
    layout = layout or wire_layout(config)
    gates: list[Gate] = []
    if config.labeling is Labeling.DYNAMIC:
        ck, cj, ci = layout.coin
        ij = (ci, cj)
        # (i, j): (0,0) +y, (1,1) -y, (0,1) +x, (1,0) -x
        gates += translate(layout.y, +1, ij, (0, 0))
        gates += translate(layout.y, -1, ij, (1, 1))
        gates += translate(layout.x, +1, ij, (0, 1))
        gates += translate(layout.x, -1, ij, (1, 0))
        gates += [Gate("X", (ci,)), Gate("X", (cj,))]
        if layout.label:
            gates += _label_hop(ck, layout.label)
        return gates
    cj, ci = layout.coin
    ij = (ci, cj)
    # up (0,0) +y, down (1,1) -y, right (1,0) +x, left (0,1) -x
    gates += translate(layout.y, +1, ij, (0, 0))
    gates += translate(layout.y, -1, ij, (1, 1))
    gates += translate(layout.x, +1, ij, (1, 0))
    gates += translate(layout.x, -1, ij, (0, 1))
    gates += [Gate("X", (ci,)), Gate("X", (cj,))]
    return gates


def flipflop_circuit(config: LatticeConfig) -> Circuit:
    layout = wire_layout(config)
    return Circuit(layout.width, flipflop_gates(config, layout), layout.as_dict())


def _bits(value: int, nbits: int) -> list[int]:
    return [(value >> b) & 1 for b in range(nbits)]


def oracle_gates(marks: LabeledMarks, config: LatticeConfig, layout: WireLayout | None = None) -> list[Gate]:
    """Per mark: X on wires whose bit is 0, controlled ``-G`` on the coin, undo the X."""
    layout = layout or wire_layout(config)
    marks.validate(config)
    controls = layout.label + layout.y + layout.x
    gates: list[Gate] = []
    for x, y, z in marks:
        bits = _bits(z, len(layout.label)) + _bits(y, len(layout.y)) + _bits(x, len(layout.x))
        flips = [Gate("X", (w,)) for w, b in zip(controls, bits) if b == 0]
        gates += flips + [Gate("CU", layout.coin, controls)] + flips
    return gates


def oracle_circuit(marks: LabeledMarks, config: LatticeConfig) -> Circuit:
    layout = wire_layout(config)
    return Circuit(layout.width, oracle_gates(marks, config, layout), layout.as_dict())


def default_variant(config: LatticeConfig) -> str:
    return "hadamard" if config.labeling is Labeling.DYNAMIC else "compact"


def step_circuit(marks: LabeledMarks, config: LatticeConfig, variant: str | None = None) -> Circuit:
    """One walk-search step: oracle, coin diffusion, flip-flop shift."""
    layout = wire_layout(config)
    variant = variant or default_variant(config)
    gates = oracle_gates(marks, config, layout)
    gates += diffusion_gates(layout.coin, variant)
    gates += flipflop_gates(config, layout)
    return Circuit(layout.width, gates, layout.as_dict())


def search_circuit(
    marks: LabeledMarks, config: LatticeConfig, steps: int, variant: str | None = None
) -> Circuit:
    """Hadamard wall followed by ``steps`` search steps."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    layout = wire_layout(config)
    circ = Circuit(layout.width, [Gate("H", (w,)) for w in range(layout.width)], layout.as_dict())
    one = step_circuit(marks, config, variant).gates
    for _ in range(steps):
        circ.extend(one)
    return circ


def decompose_mcx(gate: Gate, ancilla: int | None = None) -> list[Gate]:
    """Rewrite an X-family gate with at most 3 controls using X, CX and CCX.

    Zero-controls are X-wrapped.  Three controls need one clean ancilla,
    which is returned to |0>.
    """
    if gate.name not in ("X", "CX", "CCX", "MCX"):
        raise ValueError(f"{gate.name} is not an X-family gate")
    k = len(gate.controls)
    if k > 3:
        raise ValueError("literal decomposition is only provided for up to 3 controls")
    wrap = [Gate("X", (c,)) for c, s in zip(gate.controls, gate.ctrl_state) if s == 0]
    (t,) = gate.targets
    c = gate.controls
    if k <= 2:
        body = [x_gate(t, c)]
    else:
        if ancilla is None or ancilla in gate.wires:
            raise ValueError("a 3-control MCX needs a distinct ancilla wire")
        body = [x_gate(ancilla, c[:2]), x_gate(t, (ancilla, c[2])), x_gate(ancilla, c[:2])]
    return wrap + body + wrap
