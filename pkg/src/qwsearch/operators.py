"""Coin, flip-flop shift and search-oracle operators.

The ``apply_*`` functions are vectorised and return new states.  The dense
matrices from :func:`dense_operator` are assembled independently, element by
element from the operator definitions, and serve as the verification back end
for small lattices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ModeError, SizeError
from .lattice import (
    DOWN,
    LEFT,
    RIGHT,
    UP,
    LabeledMarks,
    LatticeConfig,
    Labeling,
    StateVector,
    all_indices,
    coin_bits,
    index_of,
)

DENSE_LIMIT = 4096


def grover_coin(d: int) -> np.ndarray:
    """Grover diffusion ``2|s><s| - I`` on a ``d``-dimensional coin.

    Diagonal entries are ``2/d - 1``, off-diagonal entries ``2/d``.
    """
    if d not in (4, 8):
        raise ValueError(f"Grover coin dimension must be 4 or 8, got {d}")
    return np.full((d, d), 2.0 / d) - np.eye(d)


@dataclass(frozen=True)
class OracleSpec:
    marks: LabeledMarks
    config: LatticeConfig

    def __post_init__(self) -> None:
        self.marks.validate(self.config)


class Which(str, enum.Enum):
    COIN = "coin"
    SHIFT = "shift"
    ORACLE = "oracle"
    STEP = "step"


def _check_config(state: StateVector, config: LatticeConfig) -> None:
    if state.config != config:
        raise ModeError(f"state config {state.config} does not match oracle config {config}")


def apply_coin(state: StateVector) -> StateVector:
    """Apply ``G (x) I``: reflect every site's coin block about the uniform coin state."""
    psi = state.tensor
    out = 2.0 * psi.mean(axis=0, keepdims=True) - psi
    return StateVector.from_tensor(out, state.config)


def _hop(plus: np.ndarray, minus: np.ndarray, axis: int, periodic: bool) -> tuple[np.ndarray, np.ndarray]:
    """Flip-flop move of a pair of coin components along ``axis``.

    ``plus`` moves +1 and turns into the ``minus`` coin state; ``minus``
    moves -1 and turns into ``plus``.  With an open boundary, amplitude that
    would leave the lattice stays put with its coin unchanged.
    Returns the new ``(plus, minus)`` components.
    """
    p = np.moveaxis(plus, axis, 0)
    q = np.moveaxis(minus, axis, 0)
    if periodic:
        new_minus = np.roll(p, 1, axis=0)
        new_plus = np.roll(q, -1, axis=0)
    else:
        new_minus = np.empty_like(p)
        new_plus = np.empty_like(q)
        new_minus[1:] = p[:-1]
        new_minus[0] = q[0]
        new_plus[:-1] = q[1:]
        new_plus[-1] = p[-1]
    return np.moveaxis(new_plus, 0, axis), np.moveaxis(new_minus, 0, axis)


def _shift_2d(state: StateVector, periodic: bool) -> StateVector:
    psi = state.tensor
    out = np.empty_like(psi)
    # sub-arrays are indexed [x, y, z]
    out[UP], out[DOWN] = _hop(psi[UP], psi[DOWN], axis=1, periodic=periodic)
    out[RIGHT], out[LEFT] = _hop(psi[RIGHT], psi[LEFT], axis=0, periodic=periodic)
    return StateVector.from_tensor(out, state.config)


def apply_shift_periodic(state: StateVector) -> StateVector:
    """Flip-flop shift on the torus.

    up -> down at y+1, down -> up at y-1, right -> left at x+1,
    left -> right at x-1, all modulo the side length.
    """
    cfg = state.config
    if not cfg.periodic or cfg.labeling is Labeling.DYNAMIC:
        raise ModeError("apply_shift_periodic needs a periodic, non-dynamic configuration")
    return _shift_2d(state, periodic=True)


def apply_shift_open(state: StateVector) -> StateVector:
    """Flip-flop shift on the open grid; boundary-escaping amplitude self-loops."""
    cfg = state.config
    if cfg.periodic or cfg.labeling is Labeling.DYNAMIC:
        raise ModeError("apply_shift_open needs an open, non-dynamic configuration")
    return _shift_2d(state, periodic=False)


def apply_shift_dynamic(state: StateVector) -> StateVector:
    """Shift for the three-bit coin ``(i, j, k)``.

    All coin bits flip.  The ``(i, j)`` pair moves the walker by
    ``dx = (-1)**i * (1 - delta_ij)``, ``dy = (-1)**i * delta_ij`` under the
    configured position boundary; ``k`` moves the label by ``(-1)**k`` with an
    open label boundary (self-loop, ``k`` unchanged, at the first/last layer).
    """
    cfg = state.config
    if cfg.labeling is not Labeling.DYNAMIC:
        raise ModeError("apply_shift_dynamic needs dynamic labeling")
    L, m = cfg.side, cfg.layers
    psi = state.tensor.reshape(2, 2, 2, L, L, m)
    # position and label parts act on separate tensor factors, so they compose
    out = np.empty_like(psi)
    # (i, j) sub-arrays are indexed [k, x, y, z]: (0,0) moves +y, (0,1) moves +x
    out[0, 0], out[1, 1] = _hop(psi[0, 0], psi[1, 1], axis=2, periodic=cfg.periodic)
    out[0, 1], out[1, 0] = _hop(psi[0, 1], psi[1, 0], axis=1, periodic=cfg.periodic)
    # k sub-arrays are indexed [i, j, x, y, z]: k=0 moves +z
    final = np.empty_like(out)
    final[:, :, 0], final[:, :, 1] = _hop(out[:, :, 0], out[:, :, 1], axis=4, periodic=False)
    return StateVector.from_tensor(final.reshape(cfg.shape), cfg)


def apply_shift(state: StateVector) -> StateVector:
    cfg = state.config
    if cfg.labeling is Labeling.DYNAMIC:
        return apply_shift_dynamic(state)
    return _shift_2d(state, periodic=cfg.periodic)


def apply_oracle(state: StateVector, spec: OracleSpec) -> StateVector:
    """Replace the coin block at every marked site by ``-G`` times itself."""
    _check_config(state, spec.config)
    psi = state.tensor.copy()
    for x, y, z in spec.marks:
        block = psi[:, x, y, z]
        psi[:, x, y, z] = block - 2.0 * block.mean()
    return StateVector.from_tensor(psi, state.config)


def step(state: StateVector, spec: OracleSpec) -> StateVector:
    """One application of ``U' = S (G (x) I) R``."""
    return apply_shift(apply_coin(apply_oracle(state, spec)))


# ---------------------------------------------------------------------------
# dense verification back end


def shift_target(coin: int, x: int, y: int, z: int, config: LatticeConfig) -> tuple[int, int, int, int]:
    """Image of one basis state under the shift, evaluated from the formulas."""
    L, m = config.side, config.layers
    if config.labeling is Labeling.DYNAMIC:
        i, j, k = coin_bits(coin, 8)
        delta = 1 if i == j else 0
        nx = x + (-1) ** i * (1 - delta)
        ny = y + (-1) ** i * delta
        nz = z + (-1) ** k
        ni, nj, nk = 1 - i, 1 - j, 1 - k
        if config.periodic:
            nx, ny = nx % L, ny % L
        elif not (0 <= nx < L and 0 <= ny < L):
            ni, nj, nx, ny = i, j, x, y
        if not 0 <= nz < m:
            nk, nz = k, z
        return 4 * ni + 2 * nj + nk, nx, ny, nz

    moves = {UP: (DOWN, 0, 1), DOWN: (UP, 0, -1), RIGHT: (LEFT, 1, 0), LEFT: (RIGHT, -1, 0)}
    new_coin, dx, dy = moves[coin]
    nx, ny = x + dx, y + dy
    if config.periodic:
        return new_coin, nx % L, ny % L, z
    if 0 <= nx < L and 0 <= ny < L:
        return new_coin, nx, ny, z
    return coin, x, y, z


def dense_operator(spec: OracleSpec, which: Which | str) -> np.ndarray:
    """Dense matrix of the coin, shift, oracle or full step for ``spec.config``."""
    which = Which(which)
    cfg = spec.config
    if cfg.dim > DENSE_LIMIT:
        raise SizeError(f"dense operator of dimension {cfg.dim} exceeds limit {DENSE_LIMIT}")
    d, rest = cfg.coin_dim, cfg.n_sites * cfg.layers

    if which is Which.COIN:
        return np.kron(grover_coin(d), np.eye(rest)).astype(np.complex128)

    if which is Which.SHIFT:
        S = np.zeros((cfg.dim, cfg.dim), dtype=np.complex128)
        for c, x, y, z in all_indices(cfg):
            S[index_of(*shift_target(c, x, y, z, cfg), cfg), index_of(c, x, y, z, cfg)] = 1.0
        return S

    if which is Which.ORACLE:
        mask = np.zeros((cfg.side, cfg.side, cfg.layers))
        for x, y, z in spec.marks:
            mask[x, y, z] = 1.0
        coin_proj = np.full((d, d), 1.0 / d)
        return (np.eye(cfg.dim) - 2.0 * np.kron(coin_proj, np.diag(mask.reshape(-1)))).astype(
            np.complex128
        )

    return dense_operator(spec, Which.SHIFT) @ dense_operator(spec, Which.COIN) @ dense_operator(
        spec, Which.ORACLE
    )
