#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Measurement and coupled models
   ------------------------------

   Dataset k is observed as::

	Y_k = 𝒫_k(C) + D_k + N_k,     𝒫_k(C) = C ×₁ P_{k,1} ×₂ P_{k,2} ×₃ P_{k,3}

   Datasets are numbered from 0 in the library.
'''

from dataclasses import dataclass

import numpy as np

from .tensor_core import Tensor3, CpdFactors, as_matrix, multilinear_product, cp_reconstruct
from .numerics import numeric_rank, is_full_column_rank, RANK_TOL
from .internals.exceptions import ShapeError, PreconditionError

class MeasurementModel():
    '''
    Degradation matrices P[k][j], j = 0, 1, 2

    A matrix may be None for a mode which is not coupled, where the
    operator is unknown.
    '''

    def __init__(self, p, common_dims=None):
        self.p = []
        for k, mats in enumerate(p):
            mats = list(mats)
            if len(mats) != 3:
                raise ShapeError("Dataset %d needs three P matrices" % k)
            self.p.append(
                [None if m is None else as_matrix(m, "P[%d][%d]" % (k, j)) for j, m in enumerate(mats)]
            )
        if not self.p:
            raise PreconditionError("Measurement model without datasets")
        if common_dims is None:
            common_dims = []
            for j in range(3):
                cols = {x[j].shape[1] for x in self.p if x[j] is not None}
                if len(cols) != 1:
                    raise ShapeError("Cannot infer common dimension of mode %d" % (j + 1))
                common_dims.append(cols.pop())
        self._common_dims = tuple(int(x) for x in common_dims)
        for k, mats in enumerate(self.p):
            for j, m in enumerate(mats):
                if m is not None and m.shape[1] != self._common_dims[j]:
                    raise ShapeError(
                        "P[%d][%d] has %d columns, common mode %d has size %d" % (
                            k, j, m.shape[1], j + 1, self._common_dims[j]
                        )
                    )

    def __len__(self):
        return len(self.p)

    def __getitem__(self, k):
        return self.p[k]

    @classmethod
    def identity(cls, common_dims, count):
        ''' All P identity: every dataset sees the common tensor directly '''
        return cls(
            [[np.eye(m) for m in common_dims] for _k in range(count)],
            common_dims,
        )

    @property
    def common_dims(self):
        ''' (M1, M2, M3) '''
        return self._common_dims

    def known(self, k, j):
        ''' Is P[k][j] available '''
        return self.p[k][j] is not None

    def dataset_dims(self, k):
        ''' (N_k1, N_k2, N_k3), None where P is unknown '''
        return tuple(None if m is None else m.shape[0] for m in self.p[k])

    def matrix(self, k, j):
        ''' P[k][j], PreconditionError if unknown '''
        m = self.p[k][j]
        if m is None:
            raise PreconditionError("P[%d][%d] is unknown" % (k, j))
        return m

    def rank(self, k, j, tol=RANK_TOL):
        ''' Numeric rank of P[k][j] '''
        return numeric_rank(self.matrix(k, j), tol)

    def full_column_rank(self, k, j, tol=RANK_TOL):
        ''' Is P[k][j] left invertible '''
        return is_full_column_rank(self.matrix(k, j), tol)

    def apply(self, k, t):
        ''' 𝒫_k(t) '''
        if t.dims != self._common_dims:
            raise ShapeError("Tensor %s is not of common dimensions %s" % (t.dims, self._common_dims))
        return multilinear_product(t, *[self.matrix(k, j) for j in range(3)])

    def apply_factors(self, k, f):
        ''' Factors of 𝒫_k(⟦f⟧) = ⟦P_k1 a, P_k2 b, P_k3 c⟧ '''
        return CpdFactors(*[self.matrix(k, j) @ f[j] for j in range(3)])

@dataclass(frozen=True, eq=False)
class CoupledModel():
    '''
    Common factors C_1..3 (rank R) and distinct factors D_k,1..3 (rank L_k)

    A dataset with L_k = 0 has None as distinct factors.
    '''

    common: CpdFactors
    distinct: tuple

    def __post_init__(self):
        object.__setattr__(self, "distinct", tuple(self.distinct))

    @property
    def rank(self):
        ''' R '''
        return self.common.rank

    @property
    def distinct_ranks(self):
        ''' (L_1, …, L_K) '''
        return tuple(0 if d is None else d.rank for d in self.distinct)

    def common_tensor(self):
        ''' C '''
        return cp_reconstruct(self.common)

    def distinct_tensor(self, k, dims=None):
        ''' D_k, zero of the given dims if L_k = 0 '''
        d = self.distinct[k]
        if d is None:
            if dims is None:
                raise PreconditionError("Dataset %d has no distinct part and no dims" % k)
            return Tensor3.zeros(dims)
        return cp_reconstruct(d)

    def measurement(self, k, meas):
        ''' 𝒫_k(C) + D_k, the noiseless observation of dataset k '''
        signal = meas.apply(k, self.common_tensor())
        d = self.distinct[k]
        if d is None:
            return signal
        return signal + cp_reconstruct(d)
