"""Dense simulation of circuits for verification."""

from __future__ import annotations

import numpy as np

from ..errors import SizeError
from .gates import Circuit, Gate

MAX_UNITARY_WIDTH = 12


def _apply(tensor: np.ndarray, gate: Gate, width: int) -> None:
    """Apply ``gate`` in place to ``tensor`` of shape ``(2,)*width + (batch,)``."""
    axis = {q: width - 1 - q for q in range(width)}
    index: list = [slice(None)] * tensor.ndim
    for c, s in zip(gate.controls, gate.ctrl_state):
        index[axis[c]] = s
    index = tuple(index)
    sub = tensor[index]
    # axes surviving the control selection, in original order
    remaining = [a for a in range(tensor.ndim) if not isinstance(index[a], int)]
    # matrix index is MSB-first, i.e. targets[-1] first
    t_axes = [remaining.index(axis[t]) for t in reversed(gate.targets)]
    k = len(t_axes)
    moved = np.moveaxis(sub, t_axes, list(range(k)))
    shape = moved.shape
    out = (gate.matrix() @ moved.reshape(2**k, -1)).reshape(shape)
    tensor[index] = np.moveaxis(out, list(range(k)), t_axes)


def circuit_statevector(circuit: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Run ``circuit`` on ``initial`` (default |0...0>) and return the final state."""
    w = circuit.width
    if initial is None:
        state = np.zeros(2**w, dtype=np.complex128)
        state[0] = 1.0
    else:
        state = np.array(initial, dtype=np.complex128)
        if state.shape != (2**w,):
            raise ValueError(f"initial state must have length {2**w}")
    tensor = state.reshape((2,) * w + (1,))
    for g in circuit:
        _apply(tensor, g, w)
    return tensor.reshape(-1)


def circuit_unitary(circuit: Circuit, max_width: int = MAX_UNITARY_WIDTH) -> np.ndarray:
    """Product of all gate matrices, first gate rightmost."""
    w = circuit.width
    if w > max_width:
        raise SizeError(f"circuit width {w} exceeds unitary limit {max_width}")
    tensor = np.eye(2**w, dtype=np.complex128).reshape((2,) * w + (2**w,))
    for g in circuit:
        _apply(tensor, g, w)
    return tensor.reshape(2**w, 2**w)


def phase_aligned(a: np.ndarray) -> np.ndarray:
    """Rescale by a unit phase so the largest-magnitude entry is positive real."""
    flat = a.reshape(-1)
    ref = flat[np.argmax(np.abs(flat))]
    if ref == 0:
        return a
    return a * (abs(ref) / ref)


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max entry difference between ``a`` and ``b`` after quotienting global phase.

    Both operands are aligned on the entry where ``a`` is largest.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    k = np.argmax(np.abs(a.reshape(-1)))
    ra, rb = a.reshape(-1)[k], b.reshape(-1)[k]
    if rb == 0:
        return float(np.max(np.abs(a - b)) + abs(ra))
    return float(np.max(np.abs(a * (abs(ra) / ra) - b * (abs(rb) / rb))))
