# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 vradar contributors

import math

import numpy as np
import pytest

import vradar


def test_resolutions_and_validation():
    cfg = vradar.WaveformConfig()
    geom = vradar.ArrayGeometry()
    assert vradar.validate(cfg, geom) == []
    assert len(geom.virtual_positions()) == 12

    rep = vradar.derive_resolutions(cfg, geom)
    assert abs(rep.range_resolution_m - 0.08) < 1e-3
    assert abs(rep.velocity_resolution_mps - 0.1) < 5e-3

    cfg.n_chirps = 128  # not divisible by 3
    codes = [v.code for v in vradar.validate(cfg, geom)]
    assert "ddma_divisibility" in codes
    with pytest.raises(vradar.ConfigError):
        vradar.derive_resolutions(cfg, geom)


def short_config():
    cfg = vradar.WaveformConfig()
    cfg.bandwidth_hz = vradar.SPEED_OF_LIGHT / (2.0 * 0.32)
    cfg.chirp_duration_s = 25.6e-6
    cfg.n_samples = 256
    cfg.sample_rate_hz = 10e6
    cfg.n_chirps = 192
    return cfg


def test_single_target_pipeline_recovery():
    cfg = short_config()
    geom = vradar.ArrayGeometry()

    scene = vradar.Scene()
    sc = vradar.Scatterer()
    az = math.radians(15.0)
    sc.position = vradar.Vec3(22.0 * math.cos(az), 22.0 * math.sin(az), 0.0)
    sc.velocity = vradar.Vec3(2.0 * math.cos(az), 2.0 * math.sin(az), 0.0)
    scene.scatterers = [sc]

    cube, stats = vradar.synthesize_cube(scene, vradar.SensorPose(), cfg, geom, 1e-5, 7)
    assert stats.contributing == 1
    assert cube.samples.shape == (192, 4, 256)

    cloud = vradar.process_frame(cube, geom)
    assert len(cloud) == 1
    p = cloud.points[0]
    rep = vradar.derive_resolutions(cfg, geom)
    assert abs(p.range_m - 22.0) <= 0.5 * rep.range_resolution_m
    assert abs(p.v_r_mps - 2.0) <= 0.5 * rep.velocity_resolution_mps
    assert abs(p.azimuth_deg - 15.0) <= 1.0


def test_cube_numpy_roundtrip(tmp_path):
    cfg = short_config()
    cube = vradar.make_cube(cfg, sensor_id=3, timestamp_s=0.05)
    rng = np.random.default_rng(5)
    samples = (rng.standard_normal((192, 4, 256)) + 1j * rng.standard_normal((192, 4, 256)))
    cube.samples = samples.astype(np.complex64)

    path = str(tmp_path / "cube.rdc")
    vradar.write_cube(cube, path)
    loaded = vradar.read_cube(path)
    assert loaded.sensor_id == 3
    np.testing.assert_array_equal(loaded.samples, cube.samples)

    with pytest.raises(vradar.DataError):
        bad = (tmp_path / "bad.rdc")
        bad.write_bytes(b"NOPE" + b"\x00" * 100)
        vradar.read_cube(str(bad))


def test_metrics_identities():
    spec = vradar.GridSpec()
    spec.origin_x = 0.0
    spec.origin_y = 0.0
    spec.extent_x = 2.0
    spec.extent_y = 2.0

    def pt(x, y):
        p = vradar.RadarPoint()
        p.x, p.y = x, y
        return p

    # counts [3,0,2,0] -> mean 5/2
    pts = [pt(0.5, 0.5)] * 3 + [pt(0.5, 1.5)] * 2
    grid = vradar.rasterize(pts, spec)
    assert vradar.mean_cell_count(grid) == pytest.approx(2.5)

    other = vradar.rasterize([pt(1.5, 0.5), pt(0.5, 1.5)], spec)
    j = vradar.jaccard(grid, other)
    assert 0.0 <= j.value <= 1.0
    assert vradar.jaccard(grid, grid).value == 1.0

    empty = vradar.rasterize([], spec)
    with pytest.raises(vradar.DataError):
        vradar.mean_cell_count(empty)

    stats = vradar.boxplot_stats([1.0, 2.0, 3.0, 4.0])
    assert stats.median == pytest.approx(2.5)


def test_fusion_transform():
    cloud = vradar.PointCloud()
    p = vradar.RadarPoint()
    p.x, p.y = 1.0, 0.0
    cloud.points = [p]
    moved = vradar.transform_cloud(cloud, vradar.SensorPose(0.0, 0.0, 0.0, 90.0))
    assert moved.points[0].x == pytest.approx(0.0, abs=1e-12)
    assert moved.points[0].y == pytest.approx(1.0)

    network = vradar.fuse([(cloud, vradar.SensorPose())], 0.025)
    assert len(network) == 1
