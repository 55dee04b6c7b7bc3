"""Gate histograms and analytic Toffoli/CNOT estimates."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..lattice import LatticeConfig, Labeling
from .builders import wire_layout
from .gates import Circuit


def shift_toffoli_estimate(position_bits: int, label_bits: int = 0) -> int:
    """Toffolis for the flip-flop shift: ``4(D^2 + D)``, plus ``8D'(D'+1)`` with label hopping."""
    D, Dl = position_bits, label_bits
    return 4 * (D * D + D) + 8 * Dl * (Dl + 1)


def mcx_toffoli_estimate(n_controls: int) -> int:
    """Roughly 16 Toffolis per control for an ancilla-assisted multi-controlled X."""
    return 16 * n_controls


@dataclass(frozen=True)
class ResourceReport:
    histogram: dict[str, int]
    toffoli_estimate: int
    cnot_estimate: int
    literal_toffoli_estimate: int
    position_bits: int
    label_bits: int
    width: int

    def as_dict(self) -> dict:
        return {
            "width": self.width,
            "position_bits": self.position_bits,
            "label_bits": self.label_bits,
            "histogram": dict(sorted(self.histogram.items())),
            "toffoli_estimate": self.toffoli_estimate,
            "cnot_estimate": self.cnot_estimate,
            "literal_toffoli_estimate": self.literal_toffoli_estimate,
        }


def gate_counts(circuit: Circuit, config: LatticeConfig) -> ResourceReport:
    """Literal gate histogram plus the shift's analytic Toffoli count.

    The label term of the Toffoli formula only applies with dynamic
    labeling, where the shift hops between layers.  ``cnot_estimate`` sums
    ``2n`` over every gate acting on ``n >= 3`` wires through controls, plus
    one per CX.  A ``CU`` on ``t`` coin wires with ``k`` controls counts as its
    lowering, a multi-controlled X with ``k + t - 1`` controls.
    """
    layout = wire_layout(config)
    D = layout.position_bits
    Dl = len(layout.label) if config.labeling is Labeling.DYNAMIC else 0
    hist = Counter(g.name for g in circuit)

    cnots = 0
    literal = 0
    for g in circuit:
        k = len(g.controls)
        if g.name == "CU":
            k += len(g.targets) - 1
        if k == 1:
            cnots += 1
        elif k >= 2:
            cnots += 2 * (k + 1)
            literal += 1 if k == 2 else mcx_toffoli_estimate(k)
    return ResourceReport(
        histogram=dict(hist),
        toffoli_estimate=shift_toffoli_estimate(D, Dl),
        cnot_estimate=cnots,
        literal_toffoli_estimate=literal,
        position_bits=D,
        label_bits=len(layout.label),
        width=circuit.width,
    )
