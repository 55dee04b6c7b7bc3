from __future__ import annotations

import math

import numpy as np
import pytest

from qwsearch.lattice import Boundary, LabeledMarks, LatticeConfig, Labeling, position_marginal
from qwsearch.search import (
    default_horizon,
    find_t_op,
    corner_marks,
    run_search,
    scaling_sweep,
    single_layer_config,
)


def test_record_shape_and_initial_row():
    cfg = LatticeConfig(8, layers=2, labeling=Labeling.STATIC)
    marks = LabeledMarks(((1, 2, 0), (5, 5, 1)))
    rec = run_search(cfg, marks, horizon=20)
    assert rec.per_mark.shape == (21, 2)
    np.testing.assert_allclose(rec.per_mark[0], 1.0 / (64 * 2))
    np.testing.assert_allclose(rec.collective, rec.per_mark.sum(axis=1))
    assert rec.steps_run == 20


def test_t_op_is_first_maximum_and_state_matches():
    cfg = LatticeConfig(8)
    marks = LabeledMarks(((4, 2, 0),))
    rec = run_search(cfg, marks)
    assert rec.amplified
    assert rec.collective[rec.t_op] == rec.collective.max()
    assert np.all(rec.collective[: rec.t_op] < rec.p_succ)
    assert find_t_op(rec) == rec.t_op
    assert position_marginal(rec.state_at_t_op)[4, 2, 0] == pytest.approx(rec.p_succ, abs=1e-14)


def test_amplification_beats_uniform():
    cfg = LatticeConfig(16)
    rec = run_search(cfg, LabeledMarks(((8, 5, 0),)))
    assert rec.p_succ > 30 / cfg.n_sites


def test_default_horizon():
    cfg = LatticeConfig(16)
    assert default_horizon(cfg) == math.ceil(2 * math.sqrt(256 * math.log(256)))


def test_horizon_validation():
    with pytest.raises(ValueError):
        run_search(LatticeConfig(4), LabeledMarks(((0, 0, 0),)), horizon=0)


def test_static_layers_reduce_to_single_layer_runs():
    cfg = LatticeConfig(8, Boundary.OPEN, 2, Labeling.STATIC)
    marks = LabeledMarks(((1, 1, 0), (6, 2, 1)))
    full = run_search(cfg, marks, horizon=30)
    single = single_layer_config(cfg)
    for i, (x, y, _) in enumerate(marks):
        alone = run_search(single, LabeledMarks(((x, y, 0),)), horizon=30)
        np.testing.assert_allclose(full.per_mark[:, i], alone.per_mark[:, 0] / 2, atol=1e-14)


def test_corner_marks_fall_back_to_one_layer():
    assert corner_marks(LatticeConfig(8)).triples == ((0, 0, 0), (1, 1, 0))
    assert corner_marks(LatticeConfig(8, layers=2, labeling=Labeling.DYNAMIC)).triples == ((0, 0, 0), (1, 1, 1))


def test_sweep_threads_match_serial():
    template = LatticeConfig(4, layers=2, labeling=Labeling.DYNAMIC)
    serial = scaling_sweep([4, 6, 8], template)
    threaded = scaling_sweep([4, 6, 8], template, workers=3)
    assert serial == threaded
    assert [p.n_sites for p in serial] == [16, 36, 64]


def test_sweep_needs_three_sizes():
    with pytest.raises(ValueError):
        scaling_sweep([4, 8], LatticeConfig(4))


def test_flat_series_is_not_amplified():
    # on the 2x2 torus the uniform state keeps its marked-site weight
    rec = run_search(LatticeConfig(2), LabeledMarks(((0, 0, 0),)), horizon=12)
    np.testing.assert_allclose(rec.collective, 0.25, atol=1e-14)
    assert not rec.amplified and rec.t_op == 0


def test_marked_sites_carry_the_maxima_at_t_op():
    cfg = LatticeConfig(16, layers=4, labeling=Labeling.STATIC)
    marks = LabeledMarks.one_per_layer([(6, 8), (8, 9), (12, 5), (15, 5)])
    marg = position_marginal(run_search(cfg, marks).state_at_t_op)
    for x, y, z in marks:
        layer = marg[:, :, z]
        assert layer[x, y] == pytest.approx(layer.max(), abs=1e-15)
        assert layer[x, y] > np.sort(layer.ravel())[-2]
