"""Hilbert space layout for a coined walk on an L x L lattice with label layers.

The flat amplitude index is coin-major::

    index = ((coin * L + x) * L + y) * m + z

so ``amplitudes.reshape(d, L, L, m)`` gives a tensor indexed by
``(coin, x, y, z)``.  Coin directions for the two-qubit coin are

    up = |00> = 0, left = |01> = 1, right = |10> = 2, down = |11> = 3

and the dynamic-labeling coin appends a third bit ``k`` (label direction),
so the eight-dimensional coin index is ``4*i + 2*j + k``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np


class Boundary(str, enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


class Labeling(str, enum.Enum):
    NONE = "none"
    STATIC = "static"
    DYNAMIC = "dynamic"


UP, LEFT, RIGHT, DOWN = 0, 1, 2, 3
DIRECTIONS = {"up": UP, "left": LEFT, "right": RIGHT, "down": DOWN}


def coin_bits(coin: int, coin_dim: int = 4) -> tuple[int, ...]:
    """Split a coin index into its bits, most significant first.

    >>> coin_bits(2)
    (1, 0)
    >>> coin_bits(5, 8)
    (1, 0, 1)
    """
    nbits = coin_dim.bit_length() - 1
    return tuple((coin >> (nbits - 1 - b)) & 1 for b in range(nbits))


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True)
class LatticeConfig:
    """Lattice side, boundary condition and label layers.

    ``labeling=NONE`` is the plain single-layer search and requires
    ``layers == 1``; it behaves exactly like static labeling with one layer.
    """

    side: int
    boundary: Boundary = Boundary.PERIODIC
    layers: int = 1
    labeling: Labeling = Labeling.NONE

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        object.__setattr__(self, "labeling", Labeling(self.labeling))
        if not isinstance(self.side, (int, np.integer)) or self.side < 2:
            raise ValueError(f"side must be an integer >= 2, got {self.side!r}")
        if not isinstance(self.layers, (int, np.integer)) or self.layers < 1:
            raise ValueError(f"layers must be an integer >= 1, got {self.layers!r}")
        if self.labeling is Labeling.NONE and self.layers != 1:
            raise ValueError("labeling 'none' requires layers == 1")

    @property
    def coin_dim(self) -> int:
        return 8 if self.labeling is Labeling.DYNAMIC else 4

    @property
    def n_sites(self) -> int:
        """Number of lattice sites N = side**2."""
        return self.side * self.side

    @property
    def dim(self) -> int:
        return self.coin_dim * self.n_sites * self.layers

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (self.coin_dim, self.side, self.side, self.layers)

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    @property
    def circuit_compatible(self) -> bool:
        return _is_power_of_two(self.side) and _is_power_of_two(self.layers)


@dataclass(frozen=True)
class LabeledMarks:
    """Marked sites as ``(x, y, z)`` triples, kept in insertion order.

    ``z`` selects the label layer the site is marked in.
    """

    triples: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self) -> None:
        triples = tuple((int(x), int(y), int(z)) for x, y, z in self.triples)
        if len(set(triples)) != len(triples):
            raise ValueError("duplicate (x, y, z) marks")
        object.__setattr__(self, "triples", triples)

    @classmethod
    def from_layers(cls, layers: Mapping[int, Iterable[tuple[int, int]]]) -> "LabeledMarks":
        """Build from ``{z: [(x, y), ...]}``."""
        return cls(tuple((x, y, z) for z in sorted(layers) for x, y in layers[z]))

    @classmethod
    def one_per_layer(cls, positions: Iterable[tuple[int, int]]) -> "LabeledMarks":
        """Mark the n-th position in layer n."""
        return cls(tuple((x, y, z) for z, (x, y) in enumerate(positions)))

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        return iter(self.triples)

    def __len__(self) -> int:
        return len(self.triples)

    def __bool__(self) -> bool:
        return bool(self.triples)

    def by_layer(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {}
        for x, y, z in self.triples:
            out.setdefault(z, []).append((x, y))
        return out

    def validate(self, config: LatticeConfig) -> None:
        for x, y, z in self.triples:
            if not (0 <= x < config.side and 0 <= y < config.side):
                raise ValueError(f"mark {(x, y, z)} is off the {config.side}x{config.side} lattice")
            if not 0 <= z < config.layers:
                raise ValueError(f"mark {(x, y, z)} has layer outside [0, {config.layers - 1}]")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Flat complex amplitudes over coin x position x label."""

    amplitudes: np.ndarray
    config: LatticeConfig

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.config.dim,):
            raise ValueError(f"expected {self.config.dim} amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def tensor(self) -> np.ndarray:
        """View of the amplitudes indexed ``[coin, x, y, z]``."""
        return self.amplitudes.reshape(self.config.shape)

    @classmethod
    def from_tensor(cls, tensor: np.ndarray, config: LatticeConfig) -> "StateVector":
        return cls(np.ascontiguousarray(tensor).reshape(-1), config)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def index_of(coin: int, x: int, y: int, z: int, config: LatticeConfig) -> int:
    L, m, d = config.side, config.layers, config.coin_dim
    for name, value, bound in (("coin", coin, d), ("x", x, L), ("y", y, L), ("z", z, m)):
        if not 0 <= value < bound:
            raise IndexError(f"{name}={value} outside [0, {bound - 1}]")
    return ((coin * L + x) * L + y) * m + z


def decode_index(index: int, config: LatticeConfig) -> tuple[int, int, int, int]:
    """Inverse of :func:`index_of`."""
    if not 0 <= index < config.dim:
        raise IndexError(f"index {index} outside [0, {config.dim - 1}]")
    L, m = config.side, config.layers
    index, z = divmod(index, m)
    index, y = divmod(index, L)
    coin, x = divmod(index, L)
    return coin, x, y, z


def all_indices(config: LatticeConfig) -> Iterator[tuple[int, int, int, int]]:
    """All ``(coin, x, y, z)`` tuples in flat-index order."""
    return itertools.product(
        range(config.coin_dim), range(config.side), range(config.side), range(config.layers)
    )


def uniform_initial_state(config: LatticeConfig) -> StateVector:
    amps = np.full(config.dim, 1.0 / np.sqrt(config.dim), dtype=np.complex128)
    return StateVector(amps, config)


def basis_state(coin: int, x: int, y: int, z: int, config: LatticeConfig) -> StateVector:
    amps = np.zeros(config.dim, dtype=np.complex128)
    amps[index_of(coin, x, y, z, config)] = 1.0
    return StateVector(amps, config)


def position_marginal(state: StateVector) -> np.ndarray:
    """Probability over sites, ``P[x, y, z] = sum_coin |amp(coin, x, y, z)|**2``."""
    return np.sum(np.abs(state.tensor) ** 2, axis=0)
