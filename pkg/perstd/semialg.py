#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Semi-algebraic decomposition
   ----------------------------

   Recover the common tensor from separate CPDs of a few datasets:

   1. CPD of Y_η at rank R + L_η.
   2. For the first mode j with ξ_j ≠ η, CPD of Y_{ξ_j} at rank
      R + L_{ξ_j}.
   3. Map the mode-j factors of Y_{ξ_j} into the column space of Y_η
      through P_{η,j} P_{ξ_j,j}^†, score every column pair by absolute
      cosine similarity and select R pairs by a fixed-cardinality
      assignment.  The selected columns are the common components.
   4. Undo the column scaling of the ξ_j factors by a least-squares
      fit against the η factors, then solve for Ĉ_j.  Every other
      mode ℓ reuses a decomposition already computed when ξ_ℓ is η or
      ξ_j, otherwise Y_{ξ_ℓ} is decomposed and matched against the
      already selected η columns.
   5. Ĉ = ⟦Ĉ_1, Ĉ_2, Ĉ_3⟧, the distinct tensors are the residuals
      Y_k − 𝒫_k(Ĉ), optionally truncated by a rank-L_k CPD.

   The scaling of every mode follows Y_η's decomposition, so the
   per-mode scalings are consistent with each other.
'''

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .tensor_core import CpdFactors, unfold, khatri_rao, cp_reconstruct
from .numerics import pinv, numeric_rank, assign_fixed_cardinality
from .cpd import CpdOptions, cpd_als_fit, derive_seed
from .uniqueness import ProblemDims, witness_litany
from .internals.exceptions import PreconditionError, ShapeError

log = logging.getLogger(__name__)

DEGENERATE_NORM = 1e-12

@dataclass
class SemiAlgResult():
    '''
    Output of semialg_decompose()

    distinct[k] is the residual Tensor3, or CpdFactors (None for
    L_k = 0) when a rank-L_k CPD was requested.  match_scores and
    scalings are keyed by 0-based mode.
    '''

    common: CpdFactors
    distinct: list
    witness: object
    match_scores: dict = field(default_factory=dict)
    scalings: dict = field(default_factory=dict)
    cpds: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def common_tensor(self):
        ''' Ĉ '''
        return cp_reconstruct(self.common)

def similarity(u, v):
    ''' Z[n, m] = |⟨u_n, v_m⟩| / (‖u_n‖ ‖v_m‖), zero for zero columns '''
    nu = np.linalg.norm(u, axis=0)
    nv = np.linalg.norm(v, axis=0)
    denom = np.outer(nu, nv)
    z = np.zeros((u.shape[1], v.shape[1]))
    np.divide(np.abs(u.T @ v), denom, out=z, where=denom > 0)
    return z

def column_scalings(p, x, flags=None):
    '''
    λ_r = ⟨p_r, x_r⟩ / ⟨p_r, p_r⟩, the scalar least-squares fit of x_r by p_r

    Columns p_r with negligible norm get λ_r = 0 and a flag.
    '''
    lam = np.zeros(p.shape[1])
    for r in range(p.shape[1]):
        pp = float(p[:, r] @ p[:, r])
        if np.sqrt(pp) < DEGENERATE_NORM:
            log.warning("Degenerate column %d while fitting scalings", r)
            if flags is not None:
                flags.append("degenerate scaling column %d" % r)
            continue
        lam[r] = float(p[:, r] @ x[:, r]) / pp
    return lam

def hybrid_regression_mode3(y, meas, c1_hat, c2_hat, k=0, flags=None):
    '''
    argmin over C3 of ‖Y_k − ⟦P_{k,1} Ĉ_1, P_{k,2} Ĉ_2, C3⟧‖_F

    Solved on the mode-3 unfolding with a pseudoinverse; a rank
    deficient Khatri-Rao regressor is flagged.  The result lives in
    Y_k's mode-3 space.
    '''
    x1 = meas.matrix(k, 0) @ c1_hat
    x2 = meas.matrix(k, 1) @ c2_hat
    if (x1.shape[0], x2.shape[0]) != y.dims[:2]:
        raise ShapeError("Regressor %d×%d does not match tensor %s" % (
            x1.shape[0], x2.shape[0], y.dims
        ))
    regressor = khatri_rao(x2, x1)
    if numeric_rank(regressor) < regressor.shape[1]:
        log.warning("Rank deficient regressor in mode-3 regression")
        if flags is not None:
            flags.append("rank deficient mode-3 regressor")
    return (pinv(regressor) @ unfold(y, 3)).T

class _Decomposer():
    ''' Bookkeeping for one semialg_decompose() call '''

    def __init__(self, y, meas, r, l, witness, opts, cpds):
        self.y = y
        self.meas = meas
        self.r = r
        self.l = l
        self.witness = witness
        self.opts = opts
        self.cpds = dict(cpds or {})
        self.flags = []
        for k, f in self.cpds.items():
            if f.rank != r + l[k] or f.dims != y[k].dims:
                raise ShapeError(
                    "Supplied CPD of Y%d has rank %d and dims %s, expected %d and %s" % (
                        k + 1, f.rank, f.dims, r + l[k], y[k].dims
                    )
                )

    def cpd(self, k):
        ''' CPD of Y_k at rank R + L_k, computed once '''
        if k not in self.cpds:
            opts = replace(
                self.opts,
                rank=self.r + self.l[k],
                seed=derive_seed(self.opts.seed, k),
            )
            fit = cpd_als_fit(self.y[k], opts)
            if not fit.converged:
                self.flags.append("CPD of Y%d not converged" % (k + 1))
            log.info("CPD of Y%d at rank %d: error %.4g", k + 1, opts.rank, fit.error)
            self.cpds[k] = fit.factors
        return self.cpds[k]

    def mapped(self, k, j, cols):
        ''' P_{η,j} P_{k,j}^† U_{k,j}[:, cols] '''
        p_eta = self.meas.matrix(self.witness.eta, j)
        return p_eta @ pinv(self.meas.matrix(k, j)) @ self.cpd(k)[j][:, cols]

    def solve_mode(self, k, j, cols, reference):
        ''' Ĉ_j from columns of Y_k's factor, scaled against η's columns '''
        u = self.cpd(k)[j][:, cols]
        lam = column_scalings(self.mapped(k, j, cols), reference, self.flags)
        return pinv(self.meas.matrix(k, j)) @ u * lam, lam

def semialg_decompose(
    y,
    meas,
    r,
    l,
    witness,
    opts=None,
    distinct_cpd=False,
    cpds=None,
    regress_mode3=None,
    check_witness=True,
):
    '''
    Semi-algebraic recovery of Ĉ and the distinct parts

    y: measured tensors; meas: MeasurementModel; r: common rank;
    l: distinct ranks; witness: Witness (0-based); opts: CpdOptions
    for the per-dataset CPDs (rank is overridden); cpds: precomputed
    CpdFactors by dataset; regress_mode3: dataset index whose mode-3
    common factor is found by regression instead of from its CPD.
    '''
    if opts is None:
        opts = CpdOptions(rank=1)
    if not len(y) == len(meas) == len(l):
        raise ShapeError("%d tensors, %d measurement triples, %d distinct ranks" % (
            len(y), len(meas), len(l)
        ))
    eta = witness.eta
    separated = witness.separated_modes()
    if not separated:
        raise PreconditionError("Witness needs some ξ_j different from η")
    for k in range(len(meas)):
        for j in range(3):
            if not meas.known(k, j):
                raise PreconditionError("P[%d][%d] must be known" % (k + 1, j + 1))
    for j, xi in enumerate(witness.xi):
        if regress_mode3 is not None and j == 2:
            continue
        if not meas.full_column_rank(xi, j):
            raise PreconditionError(
                "P_{%d,%d} is not left invertible" % (xi + 1, j + 1)
            )
    if check_witness:
        dims = ProblemDims.from_measurements(meas, r, l)
        for err in witness_litany(dims, witness):
            raise err

    work = _Decomposer(y, meas, r, l, witness, opts, cpds)

    # Steps 1-3: match η against ξ_j in the first separated mode
    j0 = separated[0]
    xi0 = witness.xi[j0]
    u_eta = work.cpd(eta)
    z = similarity(u_eta[j0], work.mapped(xi0, j0, slice(None)))
    match = assign_fixed_cardinality(z, r)
    rows = match.rows
    cols0 = match.cols
    log.info("Mode %d matching Y%d with Y%d: score %.4f", j0 + 1, eta + 1, xi0 + 1, match.objective)

    result_scores = {j0: match.objective}
    scalings = {}
    common = [None, None, None]
    # Common components in η's measurement space
    reference = [u_eta[j][:, rows] for j in range(3)]

    for j in range(3):
        source = witness.xi[j]
        if source == eta:
            common[j] = pinv(meas.matrix(eta, j)) @ reference[j]
            scalings[j] = np.ones(r)
            continue
        if source == xi0:
            cols = cols0
        else:
            # Fresh CPD matched against the selected η columns
            z = similarity(reference[j], work.mapped(source, j, slice(None)))
            sub = assign_fixed_cardinality(z, r)
            cols = sub.cols
            result_scores[j] = sub.objective
            log.info("Mode %d matching against Y%d: score %.4f", j + 1, source + 1, sub.objective)
        common[j], scalings[j] = work.solve_mode(source, j, cols, reference[j])

    if regress_mode3 is not None:
        c3 = hybrid_regression_mode3(
            y[regress_mode3], meas, common[0], common[1], k=regress_mode3, flags=work.flags
        )
        common[2] = pinv(meas.matrix(regress_mode3, 2)) @ c3
        scalings.pop(2, None)

    c_hat = CpdFactors(*common)
    c_tensor = cp_reconstruct(c_hat)
    distinct = []
    for k, yk in enumerate(y):
        residual = yk - meas.apply(k, c_tensor)
        if not distinct_cpd:
            distinct.append(residual)
        elif l[k] == 0:
            distinct.append(None)
        else:
            fit = cpd_als_fit(
                residual,
                replace(opts, rank=l[k], seed=derive_seed(opts.seed, k, 1)),
            )
            if not fit.converged:
                work.flags.append("CPD of distinct part %d not converged" % (k + 1))
            distinct.append(fit.factors)

    return SemiAlgResult(
        common=c_hat,
        distinct=distinct,
        witness=witness,
        match_scores=result_scores,
        scalings=scalings,
        cpds=work.cpds,
        flags=work.flags,
    )
