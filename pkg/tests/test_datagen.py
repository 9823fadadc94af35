#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

import numpy as np
import pytest

from perstd.tensor_core import Tensor3
from perstd.datagen import (
    SynthConfig, CloudConfig, generate_synthetic, blend_common, nrmse, add_noise,
    realized_snr_db, generate_cloud_map, apply_clouds, cloud_metrics,
    spatial_decimation, band_averaging, synthetic_hri, generate_fusion,
)
from perstd.internals.exceptions import PreconditionError, ShapeError

from conftest import THREE_DATASETS_COMMON, THREE_DATASETS_DIMS

def three_datasets(**kwargs):
    return SynthConfig(THREE_DATASETS_COMMON, THREE_DATASETS_DIMS, 5, (5, 5, 5), **kwargs)

def test_three_datasets_shapes():
    c, d, y, meas = generate_synthetic(three_datasets(seed=1))
    assert c.dims == (7, 11, 9)
    assert [x.dims for x in y] == [(10, 5, 7), (5, 12, 7), (5, 7, 10)]
    assert [x.dims for x in d] == [x.dims for x in y]
    assert meas.common_dims == (7, 11, 9)

def test_noiseless_model():
    inst = generate_synthetic(three_datasets(seed=2))
    for k in range(3):
        assert inst.y[k].allclose(inst.model.measurement(k, inst.meas), rtol=1e-12)

def test_seeded():
    a = generate_synthetic(three_datasets(seed=3, snr_db=20.0))
    b = generate_synthetic(three_datasets(seed=3, snr_db=20.0))
    c = generate_synthetic(three_datasets(seed=4, snr_db=20.0))
    assert a.y[0] == b.y[0]
    assert not a.y[0] == c.y[0]

@pytest.mark.parametrize("snr", [0.0, 10.0, 30.0, 60.0])
def test_exact_snr(snr):
    inst = generate_synthetic(three_datasets(seed=5, snr_db=snr))
    for k in range(3):
        clean = inst.model.measurement(k, inst.meas)
        assert np.isclose(realized_snr_db(clean, inst.y[k]), snr, atol=1e-9)

def test_noise_infinite_snr(rng):
    t = Tensor3(rng.standard_normal((2, 2, 2)))
    assert add_noise(t, float("inf"), rng) is t
    assert realized_snr_db(t, t) == float("inf")

def test_gaussian_p():
    inst = generate_synthetic(three_datasets(seed=6, p_dist="gaussian"))
    assert np.any(inst.meas.matrix(0, 0) < 0)
    uniform = generate_synthetic(three_datasets(seed=6))
    assert np.all(uniform.meas.matrix(0, 0) >= 0)

def test_config_checks():
    with pytest.raises(PreconditionError):
        SynthConfig((2, 2), [(2, 2, 2)], 1, (0,))
    with pytest.raises(PreconditionError):
        SynthConfig((2, 2, 2), [(2, 2, 2)], 1, (0, 0))
    with pytest.raises(PreconditionError):
        SynthConfig((2, 2, 2), [(2, 2, 2)], 0, (0,))
    with pytest.raises(PreconditionError):
        SynthConfig((2, 2, 2), [(2, 2, 2)], 1, (0,), p_dist="cauchy")

def test_blend():
    inst = generate_synthetic(three_datasets(seed=7))
    same = blend_common(inst.c, 0.0, 1, 3, 5)
    assert all(x == inst.c for x in same)
    other = blend_common(inst.c, 1.0, 1, 3, 5)
    assert nrmse(other[0], inst.c) > 0.5
    assert not other[0] == other[1]
    with pytest.raises(PreconditionError):
        blend_common(inst.c, 1.5, 1, 3, 5)
    blended = generate_synthetic(three_datasets(seed=7), alpha=0.4)
    assert len(blended.commons) == 3
    assert 0.0 < nrmse(blended.commons[0], blended.c) < 2.0

def test_nrmse(rng):
    t = Tensor3(rng.standard_normal((2, 3, 4)))
    assert nrmse(t, t) == 0.0
    assert np.isclose(nrmse(t * 1.1, t), 0.1)
    with pytest.raises(PreconditionError):
        nrmse(t, Tensor3.zeros(t.dims))
    with pytest.raises(ShapeError):
        nrmse(t, Tensor3.zeros((4, 3, 2)))

@pytest.mark.parametrize("coverage", [0.02, 0.05, 0.1, 0.4])
def test_cloud_map_coverage(coverage):
    s = generate_cloud_map((32, 32), coverage, 3.0, 11)
    assert s.shape == (32, 32)
    assert s.min() >= 0.0 and s.max() <= 1.0
    assert abs(s.mean() - coverage) < 1e-6
    cc, cp = cloud_metrics(s, s)
    assert np.isclose(cc, s.mean())
    assert np.isclose(cp, np.mean(s > 0.15))

def test_cloud_map_clear():
    assert not generate_cloud_map((4, 4), 0.0, 3.0, 1).any()
    with pytest.raises(PreconditionError):
        generate_cloud_map((4, 4), 1.0, 3.0, 1)

def test_apply_clouds(rng):
    c = Tensor3(rng.uniform(0, 1, (4, 4, 3)))
    s = np.zeros((4, 4))
    s[0, 0] = 1.0
    s[1, 1] = 0.5
    cfg = CloudConfig((4, 4, 3), spectrum=[0.7, 0.8, 0.9], maps=[s, np.zeros((4, 4))])
    cloudy, clear = apply_clouds(c, cfg)
    assert clear == c
    assert np.allclose(cloudy.data[0, 0], [0.7, 0.8, 0.9])
    assert np.allclose(cloudy.data[1, 1], 0.5 * c.data[1, 1] + 0.5 * np.array([0.7, 0.8, 0.9]))
    assert np.array_equal(cloudy.data[2, 2], c.data[2, 2])
    with pytest.raises(ShapeError):
        CloudConfig((4, 4, 3), spectrum=[0.7])
    with pytest.raises(PreconditionError):
        CloudConfig((4, 4, 3), spectrum=[-0.1, 0.0, 0.0])

def test_degradations():
    d = spatial_decimation(8, 4)
    assert d.shape == (2, 8)
    assert np.allclose(d.sum(axis=1), 1.0)
    b = band_averaging(10, 4)
    assert b.shape == (4, 10)
    assert np.allclose(b.sum(axis=1), 1.0)
    assert np.all((b > 0).sum(axis=0) == 1)
    with pytest.raises(PreconditionError):
        spatial_decimation(3, 4)
    with pytest.raises(PreconditionError):
        band_averaging(3, 4)

def test_fusion_instance():
    hri = synthetic_hri((16, 16, 8), 3, 1)
    assert np.isclose(hri.data.max(), 1.0)
    cfg = CloudConfig((16, 16, 8), coverage=0.05, seed=2)
    inst = generate_fusion(hri, cfg, decimation=4, msi_bands=4, snr_db=30.0, seed=3)
    assert inst.y[0].dims == (4, 4, 8)
    assert inst.y[1].dims == (16, 16, 4)
    assert len(inst.maps) == 2
    assert np.isclose(np.mean(inst.maps[0]), 0.05, atol=1e-6)
    clean = inst.meas.apply(1, inst.cloudy[1])
    assert np.isclose(realized_snr_db(clean, inst.y[1]), 30.0)
