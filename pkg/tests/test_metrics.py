import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depthtv.grid import DepthGrid
from depthtv.metrics import EvalMask, mae, rmse


def _grid(flat, rows, cols):
    return DepthGrid(np.asarray(flat, dtype=float).reshape(rows, cols))


def test_identical_grids_zero_error():
    g = _grid(np.arange(6.0), 2, 3)
    m = EvalMask.full(2, 3)
    assert mae(g, g, m) == 0.0
    assert rmse(g, g, m) == 0.0


def test_hand_values():
    # masked pixels hold the pair (1, 2) against (2, 4)
    x = _grid([1.0, 2.0, 0.0, 0.0], 2, 2)
    truth = _grid([2.0, 4.0, 0.0, 0.0], 2, 2)
    m = EvalMask(np.array([[True, True], [False, False]]))
    assert mae(x, truth, m) == 1.5
    assert rmse(x, truth, m) == math.sqrt(2.5)


def test_empty_mask_rejected():
    with pytest.raises(ValueError):
        EvalMask(np.zeros((3, 3), dtype=bool))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        mae(_grid(np.zeros(4), 2, 2), _grid(np.zeros(6), 2, 3), EvalMask.full(2, 2))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_rmse_at_least_mae(seed):
    rng = np.random.default_rng(seed)
    rows, cols = 5, 5
    x = DepthGrid(rng.uniform(0.0, 20.0, (rows, cols)))
    t = DepthGrid(rng.uniform(0.0, 20.0, (rows, cols)))
    mask = rng.random((rows, cols)) < 0.6
    if not mask.any():
        mask[0, 0] = True
    m = EvalMask(mask)
    assert rmse(x, t, m) >= mae(x, t, m) - 1e-15


def test_permutation_invariance_and_scaling():
    rng = np.random.default_rng(0)
    x = rng.uniform(0.0, 9.0, (4, 4))
    t = rng.uniform(0.0, 9.0, (4, 4))
    m = EvalMask.full(4, 4)
    base_mae = mae(DepthGrid(x), DepthGrid(t), m)
    base_rmse = rmse(DepthGrid(x), DepthGrid(t), m)
    perm = rng.permutation(16)
    xp = x.ravel()[perm].reshape(4, 4)
    tp = t.ravel()[perm].reshape(4, 4)
    assert np.isclose(mae(DepthGrid(xp), DepthGrid(tp), m), base_mae)
    assert np.isclose(rmse(DepthGrid(xp), DepthGrid(tp), m), base_rmse)
    # metric scales with the depth unit
    assert np.isclose(mae(DepthGrid(3 * x), DepthGrid(3 * t), m), 3 * base_mae)
    assert np.isclose(rmse(DepthGrid(3 * x), DepthGrid(3 * t), m), 3 * base_rmse)


def test_sparse_truth_mask_selects_pixels():
    x = _grid([1.0, 1.0, 1.0, 1.0], 2, 2)
    truth = _grid([1.0, 9.0, 1.0, 9.0], 2, 2)
    only_matching = EvalMask(np.array([[True, False], [True, False]]))
    assert mae(x, truth, only_matching) == 0.0
