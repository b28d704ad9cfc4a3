import numpy as np
import pytest

from depthtv.simulate import (
    AcquisitionSpec,
    Box,
    SceneSpec,
    Stripe,
    generate_scene,
    random_scene_spec,
    sample_lidar,
)


def test_empty_scene_constant_fields():
    spec = SceneSpec(rows=16, cols=16, ground_plane=(5.0, 0.0), background_depth=5.0, seed=0)
    depth, intensity = generate_scene(spec)
    assert np.all(depth.values == 5.0)
    # intensity carries the deterministic shading ramp but no painted edges
    assert intensity.values.std() < 0.1


def test_box_creates_depth_edge_at_rectangle_border():
    box = Box(4, 6, 10, 12, 3.0, 0.9)
    spec = SceneSpec(rows=16, cols=16, ground_plane=(8.0, 0.0), background_depth=8.0,
                     boxes=(box,), seed=0)
    depth, _ = generate_scene(spec)
    assert np.all(depth.values[4:10, 6:12] == 3.0)
    outside = depth.values.copy()
    outside[4:10, 6:12] = 8.0
    assert np.all(outside == 8.0)
    # discontinuity exactly on the border
    assert depth.values[3, 8] != depth.values[4, 8]
    assert depth.values[4, 5] != depth.values[4, 6]


def test_stripe_changes_intensity_not_depth():
    stripe = Stripe(2, 2, 8, 8, 0.95)
    spec = SceneSpec(rows=12, cols=12, ground_plane=(6.0, 0.0), background_depth=6.0,
                     texture_stripes=(stripe,), seed=0)
    depth, intensity = generate_scene(spec)
    assert np.all(depth.values == 6.0)
    assert np.all(intensity.values[2:8, 2:8] == 0.95)
    assert intensity.values[1, 4] != 0.95


def test_ground_plane_recedes_upward():
    spec = SceneSpec(rows=20, cols=8, ground_plane=(2.0, 0.5), background_depth=100.0, seed=0)
    depth, _ = generate_scene(spec)
    col = depth.values[:, 3]
    assert col[-1] == 2.0
    assert np.all(np.diff(col) < 0)  # nearer toward the bottom row


def test_rectangle_bounds_checked():
    with pytest.raises(ValueError):
        SceneSpec(rows=8, cols=8, boxes=(Box(0, 0, 10, 4, 2.0, 0.5),))
    with pytest.raises(ValueError):
        Box(3, 3, 3, 6, 2.0, 0.5)
    with pytest.raises(ValueError):
        Box(0, 0, 2, 2, -1.0, 0.5)


def test_scene_determinism():
    a = generate_scene(random_scene_spec(32, 32, seed=5))
    b = generate_scene(random_scene_spec(32, 32, seed=5))
    assert np.array_equal(a[0].values, b[0].values)
    assert np.array_equal(a[1].values, b[1].values)


def test_sampling_rate_binomial_count():
    spec = SceneSpec(rows=128, cols=128, ground_plane=(5.0, 0.0), background_depth=5.0, seed=0)
    truth, _ = generate_scene(spec)
    acq = AcquisitionSpec(sampling_rate=0.0625, sigma0=0.0, sigma1=0.0, seed=3)
    s = sample_lidar(truth, acq)
    expected = 0.0625 * 128 * 128
    sigma = np.sqrt(128 * 128 * 0.0625 * (1 - 0.0625))
    assert abs(s.count - expected) <= 4 * sigma
    assert np.array_equal(s.values[s.mask], truth.values[s.mask])  # noiseless


def test_noise_std_grows_affinely_with_depth():
    # Monte-Carlo regression over 1e5 draws at several depths
    rows, cols = 250, 400  # 1e5 pixels
    sigma0, sigma1 = 0.02, 0.005
    depths = np.array([2.0, 6.0, 12.0, 20.0])
    measured = []
    for i, d in enumerate(depths):
        truth_vals = np.full((rows, cols), d)
        from depthtv.grid import DepthGrid

        truth = DepthGrid(truth_vals)
        acq = AcquisitionSpec(sampling_rate=1.0, sigma0=sigma0, sigma1=sigma1, seed=100 + i)
        s = sample_lidar(truth, acq)
        measured.append((s.values - d)[s.mask].std())
    slope, intercept = np.polyfit(depths, measured, 1)
    assert abs(slope - sigma1) <= 0.1 * sigma1
    assert abs(intercept - sigma0) <= 0.1 * sigma0


def test_fov_restriction():
    spec = SceneSpec(rows=32, cols=32, ground_plane=(5.0, 0.0), background_depth=5.0, seed=0)
    truth, _ = generate_scene(spec)
    acq = AcquisitionSpec(sampling_rate=0.5, fov_rows=(8, 24), seed=1)
    s = sample_lidar(truth, acq)
    assert not s.mask[:8].any()
    assert not s.mask[24:].any()
    assert s.mask[8:24].any()


def test_max_range_exclusion():
    vals = np.full((16, 16), 5.0)
    vals[:8] = 50.0
    from depthtv.grid import DepthGrid

    truth = DepthGrid(vals)
    acq = AcquisitionSpec(sampling_rate=0.5, max_range=20.0, seed=2)
    s = sample_lidar(truth, acq)
    assert not s.mask[:8].any()
    assert s.mask[8:].any()


def test_all_beyond_range_raises():
    from depthtv.grid import DepthGrid

    truth = DepthGrid(np.full((8, 8), 50.0))
    with pytest.raises(ValueError):
        sample_lidar(truth, AcquisitionSpec(sampling_rate=0.5, max_range=10.0, seed=0))


def test_acquisition_determinism():
    truth, _ = generate_scene(random_scene_spec(48, 48, seed=9))
    acq = AcquisitionSpec(sampling_rate=0.1, seed=42)
    a = sample_lidar(truth, acq)
    b = sample_lidar(truth, acq)
    assert np.array_equal(a.mask, b.mask)
    assert np.array_equal(a.values, b.values)


def test_values_clamped_at_zero():
    from depthtv.grid import DepthGrid

    truth = DepthGrid(np.full((64, 64), 0.05))
    acq = AcquisitionSpec(sampling_rate=1.0, sigma0=0.2, sigma1=0.0, seed=7)
    s = sample_lidar(truth, acq)
    assert s.values.min() >= 0.0


def test_acquisition_validation():
    with pytest.raises(ValueError):
        AcquisitionSpec(sampling_rate=0.0)
    with pytest.raises(ValueError):
        AcquisitionSpec(sampling_rate=1.5)
    with pytest.raises(ValueError):
        AcquisitionSpec(sigma0=-0.1)
    with pytest.raises(ValueError):
        AcquisitionSpec(max_range=0.0)
    with pytest.raises(ValueError):
        AcquisitionSpec(fov_rows=(5, 5))
