#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Flexible coupled alternating least squares
   ------------------------------------------

   Minimizes::

	Σ_k ‖Y_k − ⟦X^C_k1, X^C_k2, X^C_k3⟧ − ⟦X^D_k1, X^D_k2, X^D_k3⟧‖²_F

   subject to X^C_kj = P_kj C_j for every k in Γ_j.  Datasets outside
   Γ_j keep a free mode-j factor.

   One sweep updates, for j = 1, 2, 3, the common factor C_j from a
   generalized Sylvester equation over the coupled datasets, then the
   free X^C_kj, and finally one ALS sweep over the distinct factors of
   every dataset against Y_k − ⟦X^C_k⟧.
'''

import copy
import logging
from dataclasses import dataclass, field

import numpy as np

from .tensor_core import CpdFactors, MODES, khatri_rao_for_mode
from .numerics import pinv, SylvesterSystem, solve_damped
from .cpd import CpdOptions, cpd_als_fit, generator, derive_seed
from .internals.exceptions import PreconditionError, ShapeError, SolverError

log = logging.getLogger(__name__)

@dataclass(frozen=True)
class CouplingSpec():
    ''' Γ_1, Γ_2, Γ_3: datasets (from 0) coupled to C_j '''

    gamma: tuple

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(frozenset(x) for x in self.gamma))
        if len(self.gamma) != 3:
            raise ShapeError("Coupling needs three sets, got %d" % len(self.gamma))

    @classmethod
    def full(cls, count):
        ''' Every dataset coupled in every mode '''
        return cls([range(count)] * 3)

    @classmethod
    def from_modes(cls, coupled):
        ''' From per-dataset lists of coupled modes (numbered 1…3) '''
        return cls([{k for k, modes in enumerate(coupled) if j in modes} for j in MODES])

    def __contains__(self, pair):
        k, j = pair
        return k in self.gamma[j]

    def litany(self, count):
        ''' Complaints for K datasets '''
        for j, members in enumerate(self.gamma):
            for k in sorted(members):
                if not 0 <= k < count:
                    yield PreconditionError("Γ_%d names dataset %d of %d" % (j + 1, k + 1, count))
        for k in range(count):
            if not any(k in x for x in self.gamma):
                yield PreconditionError("Dataset %d is not coupled in any mode" % (k + 1))

    def validate(self, count):
        ''' Raise the first complaint '''
        for i in self.litany(count):
            raise i

@dataclass
class AlsState():
    '''
    Iterate of the coupled ALS

    xd[k] is None for a dataset without distinct part.
    '''

    c: list
    xc: list
    xd: list
    spec: CouplingSpec
    objective_trace: list = field(default_factory=list)
    block_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    flags: list = field(default_factory=list)

    def copy(self):
        ''' Deep copy '''
        return copy.deepcopy(self)

    @property
    def rank(self):
        ''' R '''
        return self.c[0].shape[1]

    @property
    def count(self):
        ''' K '''
        return len(self.xc)

    def coupled_factor(self, meas, k, j):
        ''' X^C_kj with the constraint substituted '''
        if (k, j) in self.spec:
            return meas.matrix(k, j) @ self.c[j]
        return self.xc[k][j]

    def common(self):
        ''' Common factors as CpdFactors '''
        return CpdFactors(*self.c)

    def coupled_factors(self, meas, k):
        ''' ⟦X^C_k⟧ factors '''
        return CpdFactors(*[self.coupled_factor(meas, k, j) for j in range(3)])

    def distinct_factors(self, k):
        ''' ⟦X^D_k⟧ factors or None '''
        if self.xd[k] is None:
            return None
        return CpdFactors(*self.xd[k])

def _reconstruct(mats):
    return np.einsum("ir,jr,kr->ijk", *mats)

def _model_data(state, meas, k):
    data = _reconstruct([state.coupled_factor(meas, k, j) for j in range(3)])
    if state.xd[k] is not None:
        data = data + _reconstruct(state.xd[k])
    return data

def objective(state, y, meas):
    ''' Σ_k ‖Y_k − ⟦X^C_k⟧ − ⟦X^D_k⟧‖²_F '''
    total = 0.0
    for k, yk in enumerate(y):
        total += float(np.sum((yk.data - _model_data(state, meas, k)) ** 2))
    return total

def _check_shapes(state, y, meas, r, l):
    if not len(y) == len(meas) == len(l) == state.count:
        raise ShapeError("Inconsistent dataset counts")
    state.spec.validate(len(y))
    for j in range(3):
        if state.c[j].shape != (meas.common_dims[j], r):
            raise ShapeError("C_%d has shape %s" % (j + 1, state.c[j].shape))
    for k, yk in enumerate(y):
        if l[k] and state.xd[k] is None:
            raise ShapeError("Dataset %d has no distinct factors for rank %d" % (k + 1, l[k]))
        for j in range(3):
            if (k, j) in state.spec and not meas.known(k, j):
                raise PreconditionError("Dataset %d is coupled in mode %d but P is unknown" % (
                    k + 1, j + 1
                ))
            if state.coupled_factor(meas, k, j).shape != (yk.dims[j], r):
                raise ShapeError("X^C of dataset %d mode %d has the wrong shape" % (k + 1, j + 1))
            if l[k] and state.xd[k][j].shape != (yk.dims[j], l[k]):
                raise ShapeError("X^D of dataset %d mode %d has the wrong shape" % (k + 1, j + 1))
        if not l[k] and state.xd[k] is not None:
            raise ShapeError("Dataset %d has no distinct rank but distinct factors" % (k + 1))

def _unfold_data(data, mode):
    return np.moveaxis(data, mode - 1, -1).reshape(-1, data.shape[mode - 1], order="F")

def _ls_factor(target, mats, mode):
    ''' Least-squares factor for unfold(target, mode) ≈ kr · Xᵀ '''
    kr = khatri_rao_for_mode(mats, mode)
    gram = np.ones((kr.shape[1], kr.shape[1]))
    for other in MODES:
        if other != mode:
            gram *= mats[other - 1].T @ mats[other - 1]
    return (pinv(gram) @ kr.T @ _unfold_data(target, mode)).T

def _without_distinct(state, yk, k):
    if state.xd[k] is None:
        return yk.data
    return yk.data - _reconstruct(state.xd[k])

def common_gradient_residual(state, y, meas, mode):
    '''
    Σ_{k∈Γ_j} JᵀJ C_jᵀ PᵀP − Jᵀ Ỹ_(j) P,  J = Khatri-Rao of the other X^C

    Zero at a critical point; the gradient of objective() with
    respect to C_j is twice its transpose.
    '''
    j = mode - 1
    total = np.zeros((state.rank, meas.common_dims[j]))
    for k in sorted(state.spec.gamma[j]):
        mats = [state.coupled_factor(meas, k, i) for i in range(3)]
        jac = khatri_rao_for_mode(mats, mode)
        p = meas.matrix(k, j)
        target = _unfold_data(_without_distinct(state, y[k], k), mode)
        total += (jac.T @ jac) @ state.c[j].T @ (p.T @ p) - jac.T @ target @ p
    return total

def _update_common(state, y, meas, mode):
    j = mode - 1
    members = sorted(state.spec.gamma[j])
    if not members:
        return
    system = SylvesterSystem(rhs=np.zeros((state.rank, meas.common_dims[j])))
    for k in members:
        mats = [state.coupled_factor(meas, k, i) for i in range(3)]
        jac = khatri_rao_for_mode(mats, mode)
        p = meas.matrix(k, j)
        target = _unfold_data(_without_distinct(state, y[k], k), mode)
        system.add(jac.T @ jac, p.T @ p)
        system.rhs += jac.T @ target @ p
    solution, damped = solve_damped(system)
    if damped:
        state.flags.append("damped Sylvester solve, sweep %d mode %d" % (state.iterations + 1, mode))
    state.c[j] = solution.T
    for k in members:
        state.xc[k][j] = meas.matrix(k, j) @ state.c[j]

def _update_free(state, y, meas, mode):
    j = mode - 1
    for k in range(state.count):
        if (k, j) in state.spec:
            continue
        mats = [state.coupled_factor(meas, k, i) for i in range(3)]
        state.xc[k][j] = _ls_factor(_without_distinct(state, y[k], k), mats, mode)

def _update_distinct(state, y, meas, k, mode):
    target = y[k].data - _reconstruct([state.coupled_factor(meas, k, i) for i in range(3)])
    state.xd[k][mode - 1] = _ls_factor(target, state.xd[k], mode)

class _Monitor():
    ''' Records the objective after every block in debug mode '''

    def __init__(self, state, y, meas, debug):
        self.state = state
        self.y = y
        self.meas = meas
        self.debug = debug
        self.last = objective(state, y, meas) if debug else None

    def __call__(self, block):
        if not self.debug:
            return
        value = objective(self.state, self.y, self.meas)
        self.state.block_trace.append((self.state.iterations + 1, block, value))
        if value > self.last * (1 + 1e-9) + 1e-12:
            raise SolverError(
                "Objective increased from %.12g to %.12g at %s in sweep %d" % (
                    self.last, value, block, self.state.iterations + 1
                )
            )
        self.last = value

def coupled_als_fit(y, meas, r, l, spec, init, max_iters=1000, tol=1e-9, debug=False):
    '''
    Run the coupled ALS from init until the relative objective change
    drops below tol or max_iters sweeps.

    In debug mode the objective is evaluated after every block and
    SolverError is raised if it ever increases.
    '''
    state = init.copy()
    state.spec = spec
    state.objective_trace = []
    state.block_trace = []
    state.iterations = 0
    state.converged = False
    _check_shapes(state, y, meas, r, l)
    for j in range(3):
        for k in spec.gamma[j]:
            state.xc[k][j] = meas.matrix(k, j) @ state.c[j]

    scale = sum(float(np.sum(yk.data ** 2)) for yk in y)
    previous = objective(state, y, meas)
    monitor = _Monitor(state, y, meas, debug)
    while state.iterations < max_iters:
        for mode in MODES:
            _update_common(state, y, meas, mode)
            monitor("C_%d" % mode)
            _update_free(state, y, meas, mode)
            monitor("X^C_%d" % mode)
        for k in range(state.count):
            if state.xd[k] is None:
                continue
            for mode in MODES:
                _update_distinct(state, y, meas, k, mode)
            monitor("X^D of dataset %d" % (k + 1))
        state.iterations += 1
        value = objective(state, y, meas)
        state.objective_trace.append(value)
        log.debug("Coupled ALS sweep %d: objective %.10g", state.iterations, value)
        change = abs(previous - value) / max(previous, np.finfo(float).tiny)
        previous = value
        if value <= 1e-24 * scale or change < tol:
            state.converged = True
            break
    if not state.converged:
        log.warning("Coupled ALS did not converge in %d sweeps", max_iters)
        state.flags.append("not converged")
    return state

def random_state(y, meas, r, l, spec, seed):
    ''' Standard Gaussian C_j, free X^C and X^D '''
    rng = generator(seed)
    c = [rng.standard_normal((m, r)) for m in meas.common_dims]
    xc = []
    xd = []
    for k, yk in enumerate(y):
        row = []
        for j in range(3):
            if (k, j) in spec:
                row.append(meas.matrix(k, j) @ c[j])
            else:
                row.append(rng.standard_normal((yk.dims[j], r)))
        xc.append(row)
        if l[k]:
            xd.append([rng.standard_normal((n, l[k])) for n in yk.dims])
        else:
            xd.append(None)
    return AlsState(c, xc, xd, spec)

def state_from_semialg(result, y, meas, l, spec, seed=0, max_iters=100):
    '''
    Start from a semi-algebraic solution

    Free X^C use P·Ĉ where P is known, the distinct factors come from
    the semi-algebraic result or a rank-L_k CPD of the residual.
    '''
    c = [np.array(x) for x in result.common]
    r = c[0].shape[1]
    rng = generator(seed)
    xc = []
    xd = []
    for k, yk in enumerate(y):
        row = []
        for j in range(3):
            if meas.known(k, j):
                row.append(meas.matrix(k, j) @ c[j])
            else:
                row.append(rng.standard_normal((yk.dims[j], r)))
        xc.append(row)
        dist = result.distinct[k]
        if not l[k]:
            xd.append(None)
        elif isinstance(dist, CpdFactors) and dist.rank == l[k]:
            xd.append([np.array(x) for x in dist])
        else:
            residual = yk - meas.apply(k, result.common_tensor())
            opts = CpdOptions(rank=l[k], max_iters=max_iters, seed=derive_seed(seed, k))
            fit = cpd_als_fit(residual, opts)
            xd.append([np.array(x) for x in fit.factors])
    return AlsState(c, xc, xd, spec)

def coupled_als_restarts(
    y,
    meas,
    r,
    l,
    spec,
    restarts=1,
    seed=0,
    max_iters=1000,
    tol=1e-9,
    init=None,
    debug=False,
):
    '''
    Best of several runs by final objective, ties to the lowest restart

    With init given, the first restart starts from it, the others from
    random_state() with derived seeds.
    '''
    if restarts < 1:
        raise PreconditionError("Need at least one restart")
    best = None
    for restart in range(restarts):
        if restart == 0 and init is not None:
            start = init
        else:
            start = random_state(y, meas, r, l, spec, derive_seed(seed, restart))
        state = coupled_als_fit(y, meas, r, l, spec, start, max_iters, tol, debug)
        final = state.objective_trace[-1] if state.objective_trace else objective(state, y, meas)
        log.debug("Coupled ALS restart %d: objective %.6g", restart, final)
        if best is None or final < best[0]:
            best = (final, restart, state)
    log.info("Coupled ALS: best restart %d, objective %.6g", best[1], best[0])
    return best[2]
