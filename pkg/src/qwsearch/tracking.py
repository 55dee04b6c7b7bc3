"""Tracking a moving particle with time-windowed, label-recycled oracles.

The particle sits at ``positions[n]`` at time ``n * delta_t``.  Its mark stays
in the oracle for a persistence window ``[n dt, n dt + T)`` and occupies layer
``n mod m`` with ``m = floor(T / dt)``.  Each epoch is amplified with a fresh
search run, the oracle held fixed for the duration of the run.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import TrackingError
from .lattice import Boundary, LabeledMarks, LatticeConfig, Labeling, position_marginal
from .search import run_search


@dataclass(frozen=True)
class Trajectory:
    positions: tuple[tuple[int, int], ...]
    delta_t: float = 1.0

    def __post_init__(self) -> None:
        pos = tuple((int(x), int(y)) for x, y in self.positions)
        if not pos:
            raise TrackingError("trajectory is empty")
        if self.delta_t <= 0:
            raise TrackingError("delta_t must be positive")
        object.__setattr__(self, "positions", pos)

    def __len__(self) -> int:
        return len(self.positions)

    def check_fits(self, side: int) -> None:
        for n, (x, y) in enumerate(self.positions):
            if not (0 <= x < side and 0 <= y < side):
                raise TrackingError(f"trajectory point {n} {(x, y)} is off the {side}x{side} lattice")


@dataclass(frozen=True)
class TrackingConfig:
    T: float
    delta_t: float
    side: int
    boundary: Boundary = Boundary.PERIODIC
    horizon: int | None = None

    def __post_init__(self) -> None:
        if self.delta_t <= 0:
            raise TrackingError("delta_t must be positive")
        if self.T < self.delta_t:
            raise TrackingError(f"T={self.T} < delta_t={self.delta_t} leaves no label layers")
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    @property
    def m(self) -> int:
        # tolerate float round-off such as T=0.3, dt=0.1
        return int(math.floor(self.T / self.delta_t + 1e-9))

    @property
    def lattice(self) -> LatticeConfig:
        labeling = Labeling.STATIC if self.m > 1 else Labeling.NONE
        return LatticeConfig(self.side, self.boundary, self.m, labeling)


@dataclass(frozen=True)
class EpochEstimate:
    epoch: int
    estimate: tuple[int, int, int] | None
    truth: tuple[int, int, int] | None
    probability: float
    amplification: float
    t_op: int
    n_active: int
    skipped: bool = False

    @property
    def correct(self) -> bool:
        return not self.skipped and self.estimate == self.truth


def active_marks(trajectory: Trajectory, t: float, cfg: TrackingConfig) -> LabeledMarks:
    """Marks whose persistence window contains ``t``.

    Point ``n`` is active for ``n dt <= t < n dt + T`` and lives in layer
    ``n mod m``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    dt, m = cfg.delta_t, cfg.m
    hi = math.floor(t / dt + 1e-12)
    lo = math.floor((t - cfg.T) / dt + 1e-12) + 1
    triples = []
    used: dict[int, int] = {}
    for n in range(max(lo, 0), min(hi, len(trajectory) - 1) + 1):
        if not (n * dt <= t < n * dt + cfg.T):
            continue
        z = n % m
        if z in used:
            raise TrackingError(
                f"label collision at t={t}: points {used[z]} and {n} both map to layer {z}"
            )
        used[z] = n
        x, y = trajectory.positions[n]
        triples.append((x, y, z))
    return LabeledMarks(tuple(triples))


def estimate_epoch(trajectory: Trajectory, n: int, cfg: TrackingConfig) -> EpochEstimate:
    """Amplify the oracle active at the middle of epoch ``n`` and read layer ``n mod m``."""
    lattice = cfg.lattice
    t = (n + 0.5) * cfg.delta_t
    marks = active_marks(trajectory, t, cfg)
    z = n % cfg.m
    truth = (*trajectory.positions[n], z) if 0 <= n < len(trajectory) else None
    if not marks:
        return EpochEstimate(n, None, truth, 0.0, 0.0, 0, 0, skipped=True)

    record = run_search(lattice, marks, cfg.horizon)
    layer = position_marginal(record.state_at_t_op)[:, :, z]
    x, y = np.unravel_index(int(np.argmax(layer)), layer.shape)
    prob = float(layer[x, y])
    baseline = 1.0 / (lattice.n_sites * lattice.layers)
    return EpochEstimate(
        epoch=n,
        estimate=(int(x), int(y), z),
        truth=truth,
        probability=prob,
        amplification=prob / baseline,
        t_op=record.t_op,
        n_active=len(marks),
    )


def track(
    trajectory: Trajectory,
    cfg: TrackingConfig,
    epochs: Iterable[int] | None = None,
    workers: int = 1,
) -> list[EpochEstimate]:
    """Estimate the particle position at every epoch (default: one per trajectory point)."""
    trajectory.check_fits(cfg.side)
    if not math.isclose(trajectory.delta_t, cfg.delta_t):
        raise TrackingError("trajectory and tracking config disagree on delta_t")
    ns = list(range(len(trajectory)) if epochs is None else epochs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda n: estimate_epoch(trajectory, n, cfg), ns))
    return [estimate_epoch(trajectory, n, cfg) for n in ns]


def reconstruct_order(estimates: Sequence[EpochEstimate], cfg: TrackingConfig) -> list[tuple[int, int]]:
    """Recovered positions in chronological order.

    Estimates are sorted by epoch; their labels must cycle as ``n mod m``.
    A broken cycle only warns, and the epoch order is kept.
    """
    kept = sorted((e for e in estimates if not e.skipped), key=lambda e: e.epoch)
    if not kept:
        raise TrackingError("no usable estimates")
    for e in kept:
        if e.estimate[2] != e.epoch % cfg.m:
            warnings.warn(
                f"epoch {e.epoch} carries label {e.estimate[2]}, expected {e.epoch % cfg.m}",
                stacklevel=2,
            )
    return [e.estimate[:2] for e in kept]


def random_walk_trajectory(
    length: int, side: int, start: tuple[int, int] = (0, 0), seed: int = 0, delta_t: float = 1.0
) -> Trajectory:
    """Nearest-neighbour random walk on the torus, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    steps = ((0, 1), (0, -1), (1, 0), (-1, 0))
    x, y = start
    pos = [(x, y)]
    for _ in range(length - 1):
        dx, dy = steps[rng.integers(4)]
        x, y = (x + dx) % side, (y + dy) % side
        pos.append((x, y))
    return Trajectory(tuple(pos), delta_t)
