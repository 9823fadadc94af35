#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Matrix analysis
   ---------------

   Pseudoinverse, numeric and Kruskal rank, the generalized Sylvester
   solver and the fixed-cardinality assignment.
'''

import itertools
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from .tensor_core import as_matrix
from .internals.exceptions import ShapeError, PreconditionError, NumericsError, SingularSystemError

log = logging.getLogger(__name__)

RANK_TOL = 1e-10
KRUSKAL_MAX_COLUMNS = 20

def _singular_values(m):
    try:
        return scipy.linalg.svd(m, compute_uv=False)
    except (np.linalg.LinAlgError, ValueError) as err:
        raise NumericsError("SVD failed: %s" % err) from err

def pinv(m, tol=RANK_TOL):
    ''' Moore-Penrose pseudoinverse, σ < tol·σ_max counts as zero '''
    m = as_matrix(m)
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[0]))
    try:
        return scipy.linalg.pinv(m, atol=0.0, rtol=tol)
    except (np.linalg.LinAlgError, ValueError) as err:
        raise NumericsError("SVD failed: %s" % err) from err

def numeric_rank(m, tol=RANK_TOL):
    ''' Number of singular values above tol·σ_max '''
    m = as_matrix(m)
    if m.size == 0:
        return 0
    sv = _singular_values(m)
    if sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * sv[0]))

def is_full_column_rank(m, tol=RANK_TOL):
    ''' rank(m) == number of columns '''
    m = as_matrix(m)
    return numeric_rank(m, tol) == m.shape[1]

def kruskal_rank(m, tol=RANK_TOL, limit=None):
    '''
    Largest r such that every r columns are linearly independent.

    Exhaustive over column subsets, so limited to 20 columns.  With a
    limit the search stops once the Kruskal rank is known to reach it.
    '''
    m = as_matrix(m)
    cols = m.shape[1]
    if cols > KRUSKAL_MAX_COLUMNS:
        raise PreconditionError(
            "Kruskal rank of %d columns (exhaustive limit is %d)" % (cols, KRUSKAL_MAX_COLUMNS)
        )
    norms = np.linalg.norm(m, axis=0)
    if cols == 0 or not norms.all():
        return 0
    # Column scaling does not change independence
    m = m / norms
    upper = numeric_rank(m, tol)
    if limit is not None:
        upper = min(upper, limit)
    krank = 1
    for r in range(2, upper + 1):
        for subset in itertools.combinations(range(cols), r):
            if numeric_rank(m[:, subset], tol) < r:
                return krank
        krank = r
    return krank

@dataclass
class SylvesterSystem():
    '''
    Σ_k A_k · X · B_k = rhs
    '''

    terms: list = field(default_factory=list)
    rhs: np.ndarray = None

    def __post_init__(self):
        if self.rhs is not None:
            self.rhs = as_matrix(self.rhs, "rhs")

    def add(self, a, b):
        ''' Append a term A X B '''
        self.terms.append((as_matrix(a, "A"), as_matrix(b, "B")))

    def check(self):
        ''' Raise ShapeError if the terms do not agree '''
        if not self.terms or self.rhs is None:
            raise ShapeError("Empty Sylvester system")
        rows, cols = self.rhs.shape
        for a, b in self.terms:
            if a.shape != (rows, rows) or b.shape != (cols, cols):
                raise ShapeError(
                    "Term %s·X·%s does not conform to right hand side %s" % (
                        a.shape, b.shape, self.rhs.shape
                    )
                )

    def kronecker(self):
        ''' Σ_k B_kᵀ ⊗ A_k, the matrix acting on vec(X) '''
        return sum(np.kron(b.T, a) for a, b in self.terms)

    def residual(self, x):
        ''' Σ_k A_k X B_k − rhs '''
        return sum(a @ x @ b for a, b in self.terms) - self.rhs

def solve_generalized_sylvester(s):
    '''
    Solve by Kronecker vectorization (column-major vec)

    Raises SingularSystemError if the system is singular to working
    precision.
    '''
    s.check()
    rows, cols = s.rhs.shape
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
        try:
            vec = scipy.linalg.solve(s.kronecker(), s.rhs.ravel(order="F"))
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as err:
            raise SingularSystemError("Singular Sylvester system: %s" % err) from err
        except ValueError as err:
            raise NumericsError("Sylvester system: %s" % err) from err
    if not np.all(np.isfinite(vec)):
        raise SingularSystemError("Sylvester solution not finite")
    return vec.reshape((rows, cols), order="F")

def solve_damped(s):
    '''
    Solve, retrying once with Tikhonov damping if singular.

    Returns (X, damped).
    '''
    try:
        return solve_generalized_sylvester(s), False
    except SingularSystemError:
        pass
    kron = s.kronecker()
    lam = 1e-10 * np.trace(kron) / kron.shape[0]
    if lam <= 0.0:
        lam = 1e-10
    log.warning("Singular Sylvester system, retrying with damping %g", lam)
    rows, cols = s.rhs.shape
    damped = SylvesterSystem(list(s.terms), s.rhs)
    damped.add(lam * np.eye(rows), np.eye(cols))
    return solve_generalized_sylvester(damped), True

@dataclass
class AssignmentResult():
    '''
    Chosen (row, col) pairs, sorted by row, and their total score
    '''

    pairs: list
    objective: float

    @property
    def rows(self):
        ''' Selected rows in pair order '''
        return [r for r, _c in self.pairs]

    @property
    def cols(self):
        ''' Selected columns in pair order '''
        return [c for _r, c in self.pairs]

def assign_fixed_cardinality(z, r):
    '''
    Maximize Σ Z[row, col] over exactly r pairs, no row or column twice.

    The problem is reduced to a square balanced assignment of size
    m + n − r: every row gets a dummy column and every column gets a
    dummy row at no cost, and the (n − r) × (m − r) dummy block costs
    more than any real score so exactly m − r real rows and n − r real
    columns go unused.
    '''
    z = as_matrix(z, "score matrix")
    rows, cols = z.shape
    if r < 0 or r > min(rows, cols):
        raise PreconditionError("Cannot pick %d pairs from a %d×%d score matrix" % (r, rows, cols))
    if not np.all(np.isfinite(z)) or np.any(z < 0):
        raise PreconditionError("Scores must be finite and nonnegative")
    if r == 0:
        return AssignmentResult([], 0.0)

    size = rows + cols - r
    big = float(z.max()) + 1.0
    cost = np.zeros((size, size))
    cost[:rows, :cols] = -z
    cost[rows:, cols:] = big
    row_ind, col_ind = scipy.optimize.linear_sum_assignment(cost)
    pairs = sorted(
        (int(i), int(j)) for i, j in zip(row_ind, col_ind) if i < rows and j < cols
    )
    assert len(pairs) == r, (len(pairs), r)
    return AssignmentResult(pairs, float(sum(z[i, j] for i, j in pairs)))
