#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

import numpy as np
import pytest

from perstd.tensor_core import Tensor3, CpdFactors, cp_reconstruct
from perstd.cpd import (
    CpdOptions, cpd_als, cpd_als_fit, derive_seed, factor_match_score, normalize,
)
from perstd.internals.exceptions import PreconditionError, ShapeError

from conftest import random_cpd

def test_exact_recovery(rng):
    truth = random_cpd(rng, (6, 7, 8), 3)
    t = cp_reconstruct(truth)
    fit = cpd_als_fit(t, CpdOptions(rank=3, restarts=5, seed=1, tol=1e-12))
    assert fit.error <= 1e-6 * t.norm()
    assert factor_match_score(fit.factors, truth) > 0.99
    assert fit.trace

@pytest.mark.parametrize("alpha", [0.25, 4.0, 1024.0])
def test_scaling_invariance(rng, alpha):
    t = cp_reconstruct(random_cpd(rng, (5, 6, 4), 3)) + Tensor3(0.05 * rng.standard_normal((5, 6, 4)))
    opts = CpdOptions(rank=3, restarts=2, seed=6, max_iters=300)
    plain = cp_reconstruct(cpd_als(t, opts))
    scaled = cp_reconstruct(cpd_als(t * alpha, opts))
    assert (scaled - plain * alpha).norm() <= 1e-8 * (plain * alpha).norm()

def test_recovery_rate():
    hits = 0
    for trial in range(50):
        rng = np.random.default_rng(60000 + trial)
        rank = int(rng.integers(2, 5))
        dims = tuple(int(x) for x in rng.integers(rank + 1, 9, size=3))
        truth = random_cpd(rng, dims, rank)
        opts = CpdOptions(rank=rank, restarts=5, seed=trial, tol=1e-12)
        fit = cpd_als_fit(cp_reconstruct(truth), opts)
        hits += factor_match_score(fit.factors, truth) >= 0.999
    assert hits >= 45

def test_deterministic_for_seed(rng):
    t = cp_reconstruct(random_cpd(rng, (4, 5, 6), 2)) + Tensor3(0.01 * rng.standard_normal((4, 5, 6)))
    opts = CpdOptions(rank=2, restarts=3, seed=42, max_iters=50)
    a = cpd_als(t, opts)
    b = cpd_als(t, opts)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)

def test_best_restart_wins(rng):
    t = Tensor3(rng.standard_normal((4, 4, 4)))
    many = cpd_als_fit(t, CpdOptions(rank=3, restarts=4, seed=9, max_iters=30))
    for restart in range(4):
        single = cpd_als_fit(t, CpdOptions(rank=3, restarts=1, seed=9 + restart, max_iters=30))
        assert many.error <= single.error + 1e-12

def test_explicit_init(rng):
    truth = random_cpd(rng, (4, 5, 6), 2)
    fit = cpd_als_fit(cp_reconstruct(truth), CpdOptions(rank=2), init=truth)
    assert fit.error <= 1e-10
    with pytest.raises(ShapeError):
        cpd_als_fit(cp_reconstruct(truth), CpdOptions(rank=3), init=truth)

def test_options_checked():
    with pytest.raises(PreconditionError):
        CpdOptions(rank=0)
    with pytest.raises(PreconditionError):
        CpdOptions(rank=1, restarts=0)
    with pytest.raises(PreconditionError):
        CpdOptions(rank=1, tol=0.0)

def test_rank_too_large():
    with pytest.raises(PreconditionError):
        cpd_als_fit(Tensor3.zeros((2, 2, 2)), CpdOptions(rank=5))

def test_normalize_keeps_tensor(rng):
    f = random_cpd(rng, (3, 4, 5), 2)
    g = normalize(f)
    assert np.allclose(np.linalg.norm(g.a, axis=0), 1.0)
    assert np.allclose(np.linalg.norm(g.b, axis=0), 1.0)
    assert cp_reconstruct(g).allclose(cp_reconstruct(f), rtol=1e-10, atol=1e-12)

def test_factor_match_score_invariances(rng):
    f = random_cpd(rng, (3, 4, 5), 3)
    scale = np.array([2.0, -1.0, 0.5])
    g = CpdFactors(f.a * scale, f.b / scale, f.c).permuted([2, 0, 1])
    assert np.isclose(factor_match_score(f, g), 1.0)
    other = random_cpd(rng, (3, 4, 5), 3)
    assert factor_match_score(f, other) < 0.9
    with pytest.raises(ShapeError):
        factor_match_score(f, random_cpd(rng, (3, 4, 5), 2))

def test_derive_seed():
    assert derive_seed(1, 2) == derive_seed(1, 2)
    assert derive_seed(1, 2) != derive_seed(1, 3)
    assert derive_seed(1, 2, 0) != derive_seed(1, 2)
    assert 0 <= derive_seed(7) < 2 ** 63
