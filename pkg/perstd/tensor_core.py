#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Order-3 tensors and multilinear algebra
   ---------------------------------------

   Modes are numbered 1, 2, 3 as in the literature, entries are
   indexed from 0.  The linear layout of a Tensor3 is column-major:
   the first index varies fastest.

   The mode-k unfolding is an (N_l·N_m) × N_k matrix whose column n is
   the vectorized slice n of mode k, the lower numbered remaining mode
   varying fastest.  With this convention::

	unfold(⟦A, B, C⟧, 1) == khatri_rao(C, B) @ A.T
	unfold(⟦A, B, C⟧, 2) == khatri_rao(C, A) @ B.T
	unfold(⟦A, B, C⟧, 3) == khatri_rao(B, A) @ C.T

   Matrices are plain two-dimensional float64 numpy arrays.
'''

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .internals.exceptions import ShapeError, PreconditionError

MODES = (1, 2, 3)

def check_mode(mode):
    ''' Raise ShapeError unless mode is 1, 2 or 3 '''
    if mode not in MODES:
        raise ShapeError("Invalid mode %s (must be 1, 2 or 3)" % str(mode))

def as_matrix(m, what="matrix"):
    ''' float64 2-D array or ShapeError '''
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError("%s must be two-dimensional, got shape %s" % (what, arr.shape))
    return arr

class Tensor3():
    '''
    Dense real order-3 tensor
    -------------------------

    Immutable: the wrapped array is a read-only float64 copy.
    '''

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim != 3:
            raise ShapeError("Tensor3 needs three dimensions, got shape %s" % str(arr.shape))
        if min(arr.shape) < 1:
            raise ShapeError("Tensor3 dimensions must be positive, got %s" % str(arr.shape))
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def from_values(cls, dims, values):
        ''' Build from the column-major linear layout '''
        values = np.asarray(values, dtype=np.float64).ravel()
        dims = tuple(int(x) for x in dims)
        if len(dims) != 3 or values.size != dims[0] * dims[1] * dims[2]:
            raise ShapeError(
                "%d values do not fill a %s tensor" % (values.size, "×".join(map(str, dims)))
            )
        return cls(values.reshape(dims, order="F"))

    @classmethod
    def zeros(cls, dims):
        ''' All-zero tensor '''
        return cls(np.zeros(tuple(dims)))

    def __repr__(self):
        return "<Tensor3 %d×%d×%d>" % self.dims

    @property
    def dims(self):
        ''' (n1, n2, n3) '''
        return self._data.shape

    @property
    def data(self):
        ''' Read-only ndarray view, indexed [i, j, k] '''
        return self._data

    @property
    def values(self):
        ''' Entries in the column-major linear layout '''
        return self._data.ravel(order="F")

    def norm(self):
        ''' Frobenius norm '''
        return float(np.linalg.norm(self._data.ravel()))

    def _other(self, other):
        if isinstance(other, Tensor3):
            if other.dims != self.dims:
                raise ShapeError("Tensor dimensions %s and %s differ" % (self.dims, other.dims))
            return other.data
        return other

    def __add__(self, other):
        return Tensor3(self._data + self._other(other))

    def __sub__(self, other):
        return Tensor3(self._data - self._other(other))

    def __mul__(self, scalar):
        return Tensor3(self._data * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return Tensor3(-self._data)

    def __eq__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dims == other.dims and bool(np.array_equal(self._data, other.data))

    __hash__ = None

    def allclose(self, other, rtol=1e-12, atol=0.0):
        ''' Entrywise closeness '''
        return self.dims == other.dims and bool(
            np.allclose(self._data, other.data, rtol=rtol, atol=atol)
        )

@dataclass(frozen=True, eq=False)
class CpdFactors():
    '''
    Factor matrices of a polyadic decomposition ⟦a, b, c⟧
    '''

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        mats = []
        for name in ("a", "b", "c"):
            mat = as_matrix(getattr(self, name), "factor " + name)
            mat = mat.copy()
            mat.flags.writeable = False
            object.__setattr__(self, name, mat)
            mats.append(mat)
        cols = {x.shape[1] for x in mats}
        if len(cols) != 1:
            raise ShapeError("Factor matrices have different column counts %s" % (
                [x.shape[1] for x in mats],
            ))
        if mats[0].shape[1] < 1:
            raise PreconditionError("Rank must be at least 1")

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __getitem__(self, idx):
        return (self.a, self.b, self.c)[idx]

    @property
    def rank(self):
        ''' Number of rank-1 terms '''
        return self.a.shape[1]

    @property
    def dims(self):
        ''' Dimensions of the tensor they reconstruct '''
        return (self.a.shape[0], self.b.shape[0], self.c.shape[0])

    def permuted(self, perm):
        ''' Same decomposition, columns reordered '''
        perm = list(perm)
        return CpdFactors(self.a[:, perm], self.b[:, perm], self.c[:, perm])

def unfold(t, mode):
    ''' Mode-k matricization, (N_l·N_m) × N_k '''
    check_mode(mode)
    arr = np.moveaxis(t.data, mode - 1, -1)
    return arr.reshape(-1, t.dims[mode - 1], order="F")

def fold(m, mode, dims):
    ''' Inverse of unfold() '''
    check_mode(mode)
    m = as_matrix(m)
    dims = tuple(int(x) for x in dims)
    if len(dims) != 3:
        raise ShapeError("dims must have three entries")
    rest = tuple(d for i, d in enumerate(dims) if i != mode - 1)
    if m.shape != (rest[0] * rest[1], dims[mode - 1]):
        raise ShapeError(
            "Matrix %s does not unfold a %s tensor in mode %d" % (m.shape, dims, mode)
        )
    arr = m.reshape(rest + (dims[mode - 1],), order="F")
    return Tensor3(np.moveaxis(arr, -1, mode - 1))

def mode_product(t, b, mode):
    ''' t ×_k B: multiply every mode-k fiber by B '''
    check_mode(mode)
    b = as_matrix(b)
    if b.shape[1] != t.dims[mode - 1]:
        raise ShapeError(
            "Matrix with %d columns cannot multiply mode %d of size %d" % (
                b.shape[1], mode, t.dims[mode - 1]
            )
        )
    arr = np.tensordot(b, t.data, axes=(1, mode - 1))
    return Tensor3(np.moveaxis(arr, 0, mode - 1))

def multilinear_product(t, b1, b2, b3):
    ''' t ×₁ B1 ×₂ B2 ×₃ B3, None means identity '''
    for mode, b in zip(MODES, (b1, b2, b3)):
        if b is not None:
            t = mode_product(t, b, mode)
    return t

def khatri_rao(a, b):
    ''' Column-wise Kronecker product, column r is kron(a[:, r], b[:, r]) '''
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise ShapeError("Khatri-Rao of %d and %d columns" % (a.shape[1], b.shape[1]))
    return scipy.linalg.khatri_rao(a, b)

def khatri_rao_for_mode(factors, mode):
    ''' The Khatri-Rao product pairing with unfold(⟦factors⟧, mode) '''
    check_mode(mode)
    lo, hi = [factors[i - 1] for i in MODES if i != mode]
    return khatri_rao(hi, lo)

def cp_reconstruct(f):
    ''' Σ_r a_r ∘ b_r ∘ c_r '''
    return Tensor3(np.einsum("ir,jr,kr->ijk", f.a, f.b, f.c))

def cp_norm_squared(f):
    ''' ‖⟦a, b, c⟧‖²_F from the Gram matrices '''
    gram = (f.a.T @ f.a) * (f.b.T @ f.b) * (f.c.T @ f.c)
    return float(gram.sum())
