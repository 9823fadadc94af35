#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

import numpy as np
import pytest

from perstd.tensor_core import cp_reconstruct
from perstd.cpd import CpdOptions
from perstd.model import MeasurementModel
from perstd.uniqueness import Witness
from perstd.semialg import semialg_decompose
from perstd.coupled_als import (
    CouplingSpec, objective, common_gradient_residual, _Monitor,
    coupled_als_fit, coupled_als_restarts, random_state, state_from_semialg,
)
from perstd.datagen import SynthConfig, generate_synthetic, nrmse
from perstd.internals.exceptions import PreconditionError, ShapeError, SolverError

from conftest import THREE_DATASETS_COMMON, THREE_DATASETS_DIMS

def instance(seed, snr_db=float("inf"), l=(1, 1)):
    cfg = SynthConfig((4, 5, 3), [(6, 5, 4), (5, 6, 5)], 2, l, snr_db=snr_db, seed=seed)
    return generate_synthetic(cfg)

@pytest.mark.parametrize("seed", range(5))
def test_objective_never_increases(seed):
    inst = instance(seed, snr_db=20.0)
    spec = CouplingSpec.full(2)
    init = random_state(inst.y, inst.meas, 2, (1, 1), spec, seed)
    # debug mode raises SolverError on any increase
    state = coupled_als_fit(inst.y, inst.meas, 2, (1, 1), spec, init, max_iters=40, debug=True)
    trace = state.objective_trace
    assert all(b <= a * (1 + 1e-9) for a, b in zip(trace, trace[1:]))
    assert state.block_trace
    for k in range(2):
        for j in range(3):
            assert np.array_equal(state.xc[k][j], inst.meas.matrix(k, j) @ state.c[j])

def test_monitor_catches_increase():
    inst = instance(1, snr_db=20.0)
    spec = CouplingSpec.full(2)
    state = random_state(inst.y, inst.meas, 2, (1, 1), spec, 1)
    good = coupled_als_fit(inst.y, inst.meas, 2, (1, 1), spec, state, max_iters=30)
    # as if the previous block had reached half the current objective
    monitor = _Monitor(good, inst.y, inst.meas, True)
    monitor.last = objective(good, inst.y, inst.meas) * 0.5
    with pytest.raises(SolverError):
        monitor("C_1")

@pytest.mark.parametrize("mode", [1, 2, 3])
def test_gradient_matches_finite_differences(mode):
    inst = instance(3, snr_db=10.0)
    spec = CouplingSpec.full(2)
    state = random_state(inst.y, inst.meas, 2, (1, 1), spec, 8)
    grad = 2 * common_gradient_residual(state, inst.y, inst.meas, mode).T
    j = mode - 1
    h = 1e-5
    numeric = np.zeros_like(grad)
    for idx in np.ndindex(*grad.shape):
        for sign in (1, -1):
            probe = state.copy()
            probe.c[j] = probe.c[j].copy()
            probe.c[j][idx] += sign * h
            numeric[idx] += sign * objective(probe, inst.y, inst.meas) / (2 * h)
    assert np.linalg.norm(numeric - grad) <= 1e-5 * np.linalg.norm(grad)

def test_stationary_after_fit():
    inst = instance(4, snr_db=30.0)
    spec = CouplingSpec.full(2)
    init = random_state(inst.y, inst.meas, 2, (1, 1), spec, 4)
    state = coupled_als_fit(inst.y, inst.meas, 2, (1, 1), spec, init, max_iters=2000, tol=1e-14)
    scale = sum(yk.norm() ** 2 for yk in inst.y)
    for mode in (1, 2, 3):
        res = common_gradient_residual(state, inst.y, inst.meas, mode)
        assert np.linalg.norm(res) <= 1e-4 * scale

def test_noiseless_recovery_from_semialg():
    inst = instance(5)
    spec = CouplingSpec.full(2)
    witness = Witness(0, (0, 1, 0))
    opts = CpdOptions(rank=1, restarts=5, seed=2, tol=1e-12)
    res = semialg_decompose(inst.y, inst.meas, 2, (1, 1), witness, opts, check_witness=False)
    init = state_from_semialg(res, inst.y, inst.meas, (1, 1), spec, seed=5)
    state = coupled_als_fit(inst.y, inst.meas, 2, (1, 1), spec, init, tol=1e-12)
    assert nrmse(cp_reconstruct(state.common()), inst.c) <= 1e-4

def test_partial_coupling_with_unknown_p(rng):
    inst = instance(6, snr_db=40.0)
    meas = MeasurementModel(
        [inst.meas[0], [inst.meas[1][0], inst.meas[1][1], None]], inst.meas.common_dims
    )
    spec = CouplingSpec.from_modes([(1, 2, 3), (1, 2)])
    assert (1, 2) not in spec
    assert (0, 2) in spec
    state = coupled_als_restarts(inst.y, meas, 2, (1, 1), spec, restarts=2, seed=1, max_iters=50)
    assert state.xc[1][2].shape == (5, 2)
    assert state.objective_trace[-1] <= state.objective_trace[0]

def test_coupled_mode_needs_p():
    inst = instance(6)
    meas = MeasurementModel(
        [inst.meas[0], [inst.meas[1][0], inst.meas[1][1], None]], inst.meas.common_dims
    )
    with pytest.raises(PreconditionError):
        random_state(inst.y, meas, 2, (1, 1), CouplingSpec.full(2), 0)

def test_restarts_deterministic():
    inst = instance(7, snr_db=20.0)
    spec = CouplingSpec.full(2)
    a = coupled_als_restarts(inst.y, inst.meas, 2, (1, 1), spec, restarts=3, seed=9, max_iters=20)
    b = coupled_als_restarts(inst.y, inst.meas, 2, (1, 1), spec, restarts=3, seed=9, max_iters=20)
    for x, y in zip(a.c, b.c):
        assert np.array_equal(x, y)

def test_no_distinct_part():
    inst = instance(8, l=(0, 1))
    spec = CouplingSpec.full(2)
    state = coupled_als_restarts(inst.y, inst.meas, 2, (0, 1), spec, restarts=2, seed=0, max_iters=30)
    assert state.xd[0] is None
    assert state.distinct_factors(0) is None
    assert state.distinct_factors(1).rank == 1

def test_missing_distinct_factors():
    inst = instance(9)
    spec = CouplingSpec.full(2)
    init = random_state(inst.y, inst.meas, 2, (1, 1), spec, 0)
    init.xd[1] = None
    with pytest.raises(ShapeError, match="Dataset 2 has no distinct factors"):
        coupled_als_fit(inst.y, inst.meas, 2, (1, 1), spec, init, max_iters=5)

def test_coupling_spec_litany():
    spec = CouplingSpec.from_modes([(1, 2, 3), ()])
    complaints = list(spec.litany(2))
    assert len(complaints) == 1
    assert "not coupled" in complaints[0].text
    assert list(CouplingSpec([{3}, set(), set()]).litany(2))
    with pytest.raises(PreconditionError):
        coupled_als_restarts([], MeasurementModel.identity((2, 2, 2), 1), 1, (), spec, restarts=0)

@pytest.mark.slow
def test_three_datasets_noiseless_recovery():
    hits = 0
    spec = CouplingSpec.full(3)
    witness = Witness(1, (0, 1, 2))
    for seed in range(10):
        cfg = SynthConfig(THREE_DATASETS_COMMON, THREE_DATASETS_DIMS, 5, (5, 5, 5), seed=100 + seed)
        inst = generate_synthetic(cfg)
        opts = CpdOptions(rank=1, restarts=50, seed=seed)
        try:
            res = semialg_decompose(inst.y, inst.meas, 5, (5, 5, 5), witness, opts)
            init = state_from_semialg(res, inst.y, inst.meas, (5, 5, 5), spec, seed)
        except PreconditionError:
            init = None
        state = coupled_als_restarts(
            inst.y, inst.meas, 5, (5, 5, 5), spec, restarts=50, seed=seed, init=init, tol=1e-12
        )
        hits += nrmse(cp_reconstruct(state.common()), inst.c) <= 1e-4
    assert hits >= 9
