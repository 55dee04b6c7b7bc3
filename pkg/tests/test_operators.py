from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwsearch.errors import ModeError, SizeError
from qwsearch.lattice import (
    DOWN,
    LEFT,
    RIGHT,
    UP,
    Boundary,
    LabeledMarks,
    LatticeConfig,
    Labeling,
    StateVector,
    basis_state,
    index_of,
)
from qwsearch.operators import (
    OracleSpec,
    apply_coin,
    apply_oracle,
    apply_shift,
    apply_shift_dynamic,
    apply_shift_open,
    apply_shift_periodic,
    dense_operator,
    grover_coin,
    shift_target,
    step,
)

CONFIGS = [
    LatticeConfig(L, b, m, lab)
    for L in (2, 3, 4)
    for b in Boundary
    for m, lab in ((1, Labeling.NONE), (2, Labeling.STATIC), (3, Labeling.STATIC), (2, Labeling.DYNAMIC), (3, Labeling.DYNAMIC))
]


def _random_state(cfg, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=cfg.dim) + 1j * rng.normal(size=cfg.dim)
    return StateVector(v / np.linalg.norm(v), cfg)


# ground truth written out by hand ------------------------------------------

def test_grover_coin_entries():
    G = grover_coin(4)
    expected = np.full((4, 4), 0.5) - np.eye(4)
    np.testing.assert_array_equal(G, expected)
    with pytest.raises(ValueError):
        grover_coin(3)


@pytest.mark.parametrize(
    "coin, x, y, expected",
    [
        (UP, 1, 1, (DOWN, 1, 2)),
        (DOWN, 1, 1, (UP, 1, 0)),
        (RIGHT, 1, 1, (LEFT, 2, 1)),
        (LEFT, 1, 1, (RIGHT, 0, 1)),
        (UP, 2, 3, (DOWN, 2, 0)),
        (LEFT, 0, 2, (RIGHT, 3, 2)),
    ],
)
def test_flipflop_torus_targets(coin, x, y, expected):
    cfg = LatticeConfig(4)
    assert shift_target(coin, x, y, 0, cfg) == (*expected, 0)


def test_open_boundary_self_loops_keep_coin():
    cfg = LatticeConfig(4, Boundary.OPEN)
    assert shift_target(UP, 2, 3, 0, cfg) == (UP, 2, 3, 0)
    assert shift_target(LEFT, 0, 2, 0, cfg) == (LEFT, 0, 2, 0)
    assert shift_target(DOWN, 2, 3, 0, cfg) == (UP, 2, 2, 0)


@pytest.mark.parametrize(
    "bits, pos, expected",
    [
        # (i, j, k), (x, y, z) -> (i', j', k'), (x', y', z')
        ((0, 0, 0), (1, 1, 0), ((1, 1, 1), (1, 2, 1))),
        ((1, 1, 1), (1, 1, 1), ((0, 0, 0), (1, 0, 0))),
        ((0, 1, 0), (1, 1, 0), ((1, 0, 1), (2, 1, 1))),
        ((1, 0, 0), (1, 1, 0), ((0, 1, 1), (0, 1, 1))),
        # top label: z has nowhere to go, so k stays
        ((0, 0, 0), (1, 1, 1), ((1, 1, 0), (1, 2, 1))),
    ],
)
def test_dynamic_shift_targets(bits, pos, expected):
    cfg = LatticeConfig(3, Boundary.PERIODIC, 2, Labeling.DYNAMIC)
    i, j, k = bits
    c, x, y, z = shift_target(4 * i + 2 * j + k, *pos, cfg)
    assert ((c >> 2) & 1, (c >> 1) & 1, c & 1) == expected[0]
    assert (x, y, z) == expected[1]


def test_oracle_block_on_single_mark():
    cfg = LatticeConfig(2)
    R = dense_operator(OracleSpec(LabeledMarks(((0, 0, 0),)), cfg), "oracle")
    rows = [index_of(c, 0, 0, 0, cfg) for c in range(4)]
    block = R[np.ix_(rows, rows)].real
    expected = np.array(
        [[0.5, -0.5, -0.5, -0.5], [-0.5, 0.5, -0.5, -0.5], [-0.5, -0.5, 0.5, -0.5], [-0.5, -0.5, -0.5, 0.5]]
    )
    np.testing.assert_array_equal(block, expected)
    others = [i for i in range(cfg.dim) if i not in rows]
    np.testing.assert_array_equal(R[np.ix_(others, others)], np.eye(len(others)))
    assert not R[np.ix_(others, rows)].any()


# vectorised path against the independent dense path ------------------------

@pytest.mark.parametrize("cfg", CONFIGS, ids=lambda c: f"L{c.side}-{c.boundary.value}-{c.labeling.value}{c.layers}")
def test_vectorised_matches_dense(cfg):
    marks = LabeledMarks(((0, 0, 0), (cfg.side - 1, 1, cfg.layers - 1)))
    spec = OracleSpec(marks, cfg)
    psi = _random_state(cfg, 7)
    dense = {w: dense_operator(spec, w) for w in ("coin", "shift", "oracle", "step")}
    np.testing.assert_allclose(apply_coin(psi).amplitudes, dense["coin"] @ psi.amplitudes, atol=1e-13)
    np.testing.assert_allclose(apply_shift(psi).amplitudes, dense["shift"] @ psi.amplitudes, atol=1e-13)
    np.testing.assert_allclose(apply_oracle(psi, spec).amplitudes, dense["oracle"] @ psi.amplitudes, atol=1e-13)
    np.testing.assert_allclose(step(psi, spec).amplitudes, dense["step"] @ psi.amplitudes, atol=1e-13)


def test_shift_mode_guards():
    torus = basis_state(UP, 0, 0, 0, LatticeConfig(2))
    grid = basis_state(UP, 0, 0, 0, LatticeConfig(2, Boundary.OPEN))
    dyn = basis_state(0, 0, 0, 0, LatticeConfig(2, layers=2, labeling=Labeling.DYNAMIC))
    with pytest.raises(ModeError):
        apply_shift_open(torus)
    with pytest.raises(ModeError):
        apply_shift_periodic(grid)
    with pytest.raises(ModeError):
        apply_shift_dynamic(torus)
    assert apply_shift(dyn).norm() == pytest.approx(1.0)


def test_dense_size_limit():
    spec = OracleSpec(LabeledMarks(((0, 0, 0),)), LatticeConfig(40))
    with pytest.raises(SizeError):
        dense_operator(spec, "coin")


def test_static_layers_do_not_mix():
    cfg = LatticeConfig(4, layers=3, labeling=Labeling.STATIC)
    spec = OracleSpec(LabeledMarks(((1, 2, 1),)), cfg)
    U = dense_operator(spec, "step")
    for a, b in itertools.product(range(cfg.dim), repeat=2):
        if a % 3 != b % 3:
            assert U[a, b] == 0


# properties -----------------------------------------------------------------

config_strategy = st.builds(
    lambda L, b, lab, m: LatticeConfig(L, b, 1 if lab is Labeling.NONE else m, lab),
    st.integers(2, 6),
    st.sampled_from(list(Boundary)),
    st.sampled_from(list(Labeling)),
    st.integers(1, 4),
)


@settings(max_examples=60, deadline=None)
@given(cfg=config_strategy, seed=st.integers(0, 2**32 - 1))
def test_shift_is_involution_and_norm_preserving(cfg, seed):
    psi = _random_state(cfg, seed)
    once = apply_shift(psi)
    assert once.norm() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(apply_shift(once).amplitudes, psi.amplitudes, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(cfg=config_strategy, seed=st.integers(0, 2**32 - 1), data=st.data())
def test_step_preserves_norm(cfg, seed, data):
    n = data.draw(st.integers(1, min(4, cfg.n_sites)))
    sites = data.draw(
        st.lists(
            st.tuples(st.integers(0, cfg.side - 1), st.integers(0, cfg.side - 1), st.integers(0, cfg.layers - 1)),
            min_size=n,
            max_size=n,
            unique=True,
        )
    )
    spec = OracleSpec(LabeledMarks(tuple(sites)), cfg)
    psi = _random_state(cfg, seed)
    out = step(psi, spec)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(apply_oracle(apply_oracle(psi, spec), spec).amplitudes, psi.amplitudes, atol=1e-13)


def test_oracle_rejects_bad_marks():
    with pytest.raises(ValueError):
        OracleSpec(LabeledMarks(((5, 0, 0),)), LatticeConfig(4))
