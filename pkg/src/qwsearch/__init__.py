"""Labeled quantum-walk search on 2D lattices: simulator, tracker and circuit compiler."""

from .lattice import (
    Boundary,
    LabeledMarks,
    LatticeConfig,
    Labeling,
    StateVector,
    basis_state,
    decode_index,
    index_of,
    position_marginal,
    uniform_initial_state,
)
from .operators import OracleSpec, dense_operator, grover_coin, step
from .search import RunRecord, fit_inverse_log, find_t_op, run_search, scaling_sweep
from .tracking import Trajectory, TrackingConfig, active_marks, reconstruct_order, track

__version__ = "0.1.0"

__all__ = [
    "Boundary",
    "LabeledMarks",
    "LatticeConfig",
    "Labeling",
    "OracleSpec",
    "RunRecord",
    "StateVector",
    "TrackingConfig",
    "Trajectory",
    "active_marks",
    "basis_state",
    "decode_index",
    "dense_operator",
    "find_t_op",
    "fit_inverse_log",
    "grover_coin",
    "index_of",
    "position_marginal",
    "reconstruct_order",
    "run_search",
    "scaling_sweep",
    "step",
    "track",
    "uniform_initial_state",
]
