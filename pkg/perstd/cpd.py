#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Canonical polyadic decomposition
   --------------------------------

   Multi-start alternating least squares.  Each restart r draws its
   initial factors from a standard Gaussian generator seeded with
   seed + r, the restart with the lowest reconstruction error wins
   and ties go to the lowest restart index.

   After every sweep the columns of the mode-1 and mode-2 factors are
   scaled to unit norm, the scales moved into the mode-3 factor.
'''

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .tensor_core import CpdFactors, MODES, unfold, khatri_rao_for_mode
from .numerics import pinv
from .internals.exceptions import PreconditionError, ShapeError

log = logging.getLogger(__name__)

@dataclass(frozen=True)
class CpdOptions():
    ''' How to run cpd_als() '''

    rank: int
    max_iters: int = 1000
    tol: float = 1e-9
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise PreconditionError("CPD rank must be at least 1, got %d" % self.rank)
        if self.restarts < 1:
            raise PreconditionError("CPD needs at least one restart")
        if not self.tol > 0:
            raise PreconditionError("CPD tolerance must be positive")
        if self.max_iters < 1:
            raise PreconditionError("CPD needs at least one iteration")

@dataclass
class CpdFit():
    ''' Result of one or more ALS runs '''

    factors: CpdFactors
    error: float
    iterations: int
    converged: bool
    restart: int = 0
    trace: list = field(default_factory=list)

def generator(seed):
    ''' Counter-based PRNG used for every seeded draw '''
    return np.random.Generator(np.random.Philox(seed))

def derive_seed(seed, *keys):
    ''' Independent 63-bit seed for a sub-task, keys are small integers '''
    # the key count keeps (s, k) and (s, k, 0) apart, SeedSequence pads with zeros
    seq = np.random.SeedSequence([int(seed), len(keys)] + [int(x) for x in keys])
    return int(seq.generate_state(1, np.uint64)[0] >> np.uint64(1))

def random_factors(dims, rank, rng):
    ''' Standard Gaussian factors '''
    return CpdFactors(*[rng.standard_normal((n, rank)) for n in dims])

def normalize(factors):
    ''' Unit columns in modes 1 and 2, scales absorbed by mode 3 '''
    a, b, c = [np.array(x) for x in factors]
    na = np.linalg.norm(a, axis=0)
    nb = np.linalg.norm(b, axis=0)
    na[na == 0.0] = 1.0
    nb[nb == 0.0] = 1.0
    return CpdFactors(a / na, b / nb, c * (na * nb))

def residual_norm(data, factors):
    ''' ‖t − ⟦a, b, c⟧‖_F '''
    return float(np.linalg.norm(
        (data - np.einsum("ir,jr,kr->ijk", factors.a, factors.b, factors.c)).ravel()
    ))

def als_sweep(unfoldings, factors):
    ''' One exact least-squares update per mode '''
    mats = list(factors)
    for mode in MODES:
        current = CpdFactors(*mats)
        kr = khatri_rao_for_mode(current, mode)
        gram = np.ones((current.rank, current.rank))
        for other in MODES:
            if other != mode:
                gram *= mats[other - 1].T @ mats[other - 1]
        mats[mode - 1] = unfoldings[mode - 1].T @ kr @ pinv(gram)
    return CpdFactors(*mats)

def _single_run(t, init, opts):
    unfoldings = [unfold(t, mode) for mode in MODES]
    tnorm = t.norm()
    factors = init
    error = residual_norm(t.data, factors)
    trace = []
    converged = False
    iters = 0
    for iters in range(1, opts.max_iters + 1):
        factors = normalize(als_sweep(unfoldings, factors))
        new_error = residual_norm(t.data, factors)
        trace.append(new_error ** 2)
        change = abs(error - new_error) / max(error, np.finfo(float).tiny)
        error = new_error
        if error <= 1e-14 * tnorm or change < opts.tol:
            converged = True
            break
    return CpdFit(factors, error, iters, converged, trace=trace)

def check_rank(dims, rank):
    ''' rank ≤ product of the two largest dims '''
    largest = sorted(dims)[1:]
    if rank > largest[0] * largest[1]:
        raise PreconditionError(
            "Rank %d exceeds %d for a %s tensor" % (rank, largest[0] * largest[1], dims)
        )

def cpd_als_fit(t, opts, init=None):
    '''
    Best-of-restarts ALS with diagnostics

    An explicit init replaces the random start of the first restart.
    '''
    check_rank(t.dims, opts.rank)
    best = None
    for restart in range(opts.restarts):
        if restart == 0 and init is not None:
            if init.dims != t.dims or init.rank != opts.rank:
                raise ShapeError("Initial factors do not match tensor and rank")
            start = init
        else:
            start = random_factors(t.dims, opts.rank, generator(opts.seed + restart))
        fit = _single_run(t, start, opts)
        fit.restart = restart
        log.debug(
            "CPD restart %d: error %.6g after %d sweeps", restart, fit.error, fit.iterations
        )
        if best is None or fit.error < best.error:
            best = fit
    if not best.converged:
        log.warning(
            "CPD of rank %d did not converge in %d sweeps (error %.3g)",
            opts.rank, opts.max_iters, best.error
        )
    return best

def cpd_als(t, opts, init=None):
    ''' Factors of the best restart '''
    return cpd_als_fit(t, opts, init).factors

def _congruence(x, y):
    nx = np.linalg.norm(x, axis=0)
    ny = np.linalg.norm(y, axis=0)
    dots = np.abs(x.T @ y)
    denom = np.outer(nx, ny)
    out = np.zeros_like(dots)
    np.divide(dots, denom, out=out, where=denom > 0)
    return out, nx, ny

def factor_match_score(f, g):
    '''
    Similarity of two decompositions up to permutation and scaling

    For columns r of f and s of g the score is the product over the
    modes of |cos ∠(f_r, g_s)|, times 1 − |λ_r − μ_s| / max(λ_r, μ_s)
    where λ and μ are the products of the column norms.  Columns are
    paired by an optimal assignment and the paired scores averaged.
    '''
    if f.rank != g.rank or f.dims != g.dims:
        raise ShapeError(
            "Cannot compare rank %d %s with rank %d %s" % (f.rank, f.dims, g.rank, g.dims)
        )
    score = np.ones((f.rank, g.rank))
    lam = np.ones(f.rank)
    mu = np.ones(g.rank)
    for x, y in zip(f, g):
        cong, nx, ny = _congruence(x, y)
        score *= cong
        lam *= nx
        mu *= ny
    top = np.maximum.outer(lam, mu)
    penalty = np.ones_like(score)
    np.divide(np.abs(np.subtract.outer(lam, mu)), top, out=penalty, where=top > 0)
    score *= np.where(top > 0, 1.0 - penalty, 1.0)
    rows, cols = scipy.optimize.linear_sum_assignment(score, maximize=True)
    return float(score[rows, cols].mean())
