"""Search runs, optimal-time detection and success-probability scaling fits."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import FitError
from .lattice import (
    LabeledMarks,
    LatticeConfig,
    Labeling,
    StateVector,
    position_marginal,
    uniform_initial_state,
)
from .operators import OracleSpec, step


@dataclass(frozen=True, eq=False)
class RunRecord:
    """Probability time series of one search run.

    Row ``t`` of ``per_mark`` holds the marked-site probabilities after ``t``
    applications of the walk operator (row 0 is the initial state).
    """

    marks: tuple[tuple[int, int, int], ...]
    per_mark: np.ndarray
    collective: np.ndarray
    t_op: int
    p_succ: float
    steps_run: int
    amplified: bool
    state_at_t_op: StateVector


def default_horizon(config: LatticeConfig) -> int:
    """``ceil(2 sqrt(n ln n))`` with ``n = N m``: twice the asymptotic optimal time."""
    n = config.n_sites * config.layers
    return max(1, math.ceil(2.0 * math.sqrt(n * math.log(n))))


def run_search(config: LatticeConfig, marks: LabeledMarks, horizon: int | None = None) -> RunRecord:
    """Iterate the search operator from the uniform state and record marked probabilities."""
    if horizon is None:
        horizon = default_horizon(config)
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    spec = OracleSpec(marks, config)
    triples = marks.triples
    xs = np.array([t[0] for t in triples], dtype=int)
    ys = np.array([t[1] for t in triples], dtype=int)
    zs = np.array([t[2] for t in triples], dtype=int)

    per_mark = np.zeros((horizon + 1, len(triples)))
    state = uniform_initial_state(config)
    best_state, best = state, -1.0
    for t in range(horizon + 1):
        if t:
            state = step(state, spec)
        probs = position_marginal(state)[xs, ys, zs]
        per_mark[t] = probs
        total = probs.sum()
        if total > best:
            best, best_state = total, state

    collective = per_mark.sum(axis=1)
    t_op, amplified = _argmax_first(collective)
    return RunRecord(
        marks=triples,
        per_mark=per_mark,
        collective=collective,
        t_op=t_op,
        p_succ=float(collective[t_op]),
        steps_run=horizon,
        amplified=amplified,
        state_at_t_op=best_state if amplified else uniform_initial_state(config),
    )


def _argmax_first(series: np.ndarray, rtol: float = 1e-9) -> tuple[int, bool]:
    """First index of the maximum, and whether it beats step 0 beyond round-off.

    A series that never rises above its initial value reports ``(0, False)``.
    """
    if len(series) == 0:
        raise ValueError("empty series")
    k = int(np.argmax(series))
    if not series[k] > series[0] * (1 + rtol):
        return 0, False
    return k, True


def find_t_op(record: RunRecord) -> int:
    """Step index of the collective maximum; the earliest step wins ties.

    Returns 0 when the collective probability never rises above its start
    (check ``record.amplified``).
    """
    return _argmax_first(record.collective)[0]


def corner_marks(config: LatticeConfig) -> LabeledMarks:
    """Two marks, (0,0) in layer 0 and (1,1) in the last available layer."""
    return LabeledMarks(((0, 0, 0), (1, 1, min(1, config.layers - 1))))


@dataclass(frozen=True)
class SweepPoint:
    side: int
    n_sites: int
    t_op: int
    per_mark: tuple[float, ...]
    collective: float


def scaling_sweep(
    sides: Sequence[int],
    template: LatticeConfig,
    marks_for: Callable[[LatticeConfig], LabeledMarks] = corner_marks,
    horizon_for: Callable[[LatticeConfig], int] | None = None,
    workers: int = 1,
) -> list[SweepPoint]:
    """Success probabilities at ``t_op`` for each lattice side.

    ``template`` supplies boundary, labeling and layers; its side is replaced.
    """
    if len(sides) < 3:
        raise ValueError("a scaling sweep needs at least 3 sizes")

    def one(side: int) -> SweepPoint:
        cfg = replace(template, side=side)
        rec = run_search(cfg, marks_for(cfg), horizon_for(cfg) if horizon_for else None)
        return SweepPoint(
            side=side,
            n_sites=cfg.n_sites,
            t_op=rec.t_op,
            per_mark=tuple(float(p) for p in rec.per_mark[rec.t_op]),
            collective=rec.p_succ,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, sides))
    return [one(s) for s in sides]


@dataclass(frozen=True)
class FitResult:
    a: float
    b: float
    rms_residual: float
    points: tuple[tuple[float, float], ...]

    def predict(self, n: np.ndarray | float) -> np.ndarray | float:
        return self.a / np.log(self.b * np.asarray(n, dtype=float))


def fit_inverse_log(points: Sequence[tuple[float, float]], b_range: tuple[float, float] = (1e-3, 1e3)) -> FitResult:
    """Least-squares fit of ``p = a / ln(b N)``.

    ``a`` is profiled out in closed form for each ``b``; the remaining 1-D
    problem in ``log b`` is bracketed on a log-spaced grid and refined by
    golden-section search.  ``b`` is kept above ``1/min(N)`` so every
    logarithm stays positive.
    """
    pts = tuple((float(n), float(p)) for n, p in points)
    if len(pts) < 3:
        raise FitError("need at least 3 points")
    n = np.array([q[0] for q in pts])
    p = np.array([q[1] for q in pts])
    if np.any(p <= 0) or np.any(n <= 0):
        raise FitError("all N and p must be positive")
    if np.ptp(n) == 0:
        raise FitError("all points share the same N; b is not identifiable")

    lo = max(math.log(b_range[0]), -math.log(n.min()) + 1e-9)
    hi = math.log(b_range[1])
    if lo >= hi:
        raise FitError("empty search interval for b")

    def profile(log_b: float) -> tuple[float, float]:
        g = 1.0 / (log_b + np.log(n))
        a = float(g @ p / (g @ g))
        return a, float(np.sum((p - a * g) ** 2))

    grid = np.linspace(lo, hi, 401)
    sse = np.array([profile(v)[1] for v in grid])
    k = int(np.argmin(sse))
    if 0 < k < len(grid) - 1:
        res = minimize_scalar(
            lambda v: profile(v)[1],
            bracket=(grid[k - 1], grid[k], grid[k + 1]),
            method="golden",
            tol=1e-12,
        )
        log_b = float(res.x)
    else:
        # optimum on the edge of the allowed interval
        log_b = float(grid[k])
    a, sse_best = profile(log_b)
    return FitResult(a=a, b=math.exp(log_b), rms_residual=math.sqrt(sse_best / len(pts)), points=pts)


def single_layer_config(config: LatticeConfig) -> LatticeConfig:
    """The one-layer configuration each static-labeled layer reduces to."""
    return replace(config, layers=1, labeling=Labeling.NONE)
