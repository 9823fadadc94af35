#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
    Dense text formats
    ==================

    Tensor::

	T3 n1 n2 n3
	v v v v v v
	…

    n1·n2·n3 values, first index fastest.

    Matrix::

	M rows cols
	row 1
	…

    Values are written with 17 significant digits.
'''

import numpy as np

from ..tensor_core import Tensor3, as_matrix
from ..internals.exceptions import FileFormatError

PER_LINE = 6

class DenseFile():
    ''' Base class, subclasses set MAGIC and NDIMS '''

    MAGIC = None
    NDIMS = None

    def __init__(self, filename):
        self.filename = filename
        self.dims = None
        self.values = None

    def complaint(self, why):
        ''' FileFormatError naming the file '''
        return FileFormatError(why, where=str(self.filename))

    def validate(self, **_kwargs):
        ''' Yield complaints while loading dims and values '''
        try:
            with open(self.filename, encoding="utf8") as file:
                tokens = file.read().split()
        except OSError as err:
            yield self.complaint("Cannot read: %s" % err.strerror)
            return
        if not tokens or tokens[0] != self.MAGIC:
            yield self.complaint("Missing '%s' header" % self.MAGIC)
            return
        header = tokens[1:1 + self.NDIMS]
        try:
            dims = tuple(int(x, 10) for x in header)
        except ValueError:
            yield self.complaint("Dimensions are not integers")
            return
        if len(dims) != self.NDIMS or min(dims) < 1:
            yield self.complaint("Need %d positive dimensions" % self.NDIMS)
            return
        body = tokens[1 + self.NDIMS:]
        want = int(np.prod(dims))
        if len(body) != want:
            yield self.complaint("Expected %d values, found %d" % (want, len(body)))
            return
        try:
            values = np.array([float(x) for x in body])
        except ValueError:
            yield self.complaint("Values are not numbers")
            return
        if not np.all(np.isfinite(values)):
            yield self.complaint("Values must be finite")
            return
        self.dims = dims
        self.values = values

    def litany(self, **kwargs):
        ''' Yield the litany of faults found '''
        yield from self.validate(**kwargs)

    def read(self):
        ''' Load, raising the first complaint '''
        for err in self.litany():
            raise err
        return self.build()

    def build(self):
        ''' Object from dims and values '''
        raise NotImplementedError

class TensorFile(DenseFile):
    ''' T3 file '''

    MAGIC = "T3"
    NDIMS = 3

    def build(self):
        return Tensor3.from_values(self.dims, self.values)

class MatrixFile(DenseFile):
    ''' M file '''

    MAGIC = "M"
    NDIMS = 2

    def build(self):
        return self.values.reshape(self.dims)

def read_tensor(filename):
    ''' Tensor3 from a T3 file '''
    return TensorFile(filename).read()

def read_matrix(filename):
    ''' ndarray from an M file '''
    return MatrixFile(filename).read()

def write_tensor(filename, t):
    ''' Write a T3 file '''
    values = t.values
    with open(filename, "w", encoding="utf8") as file:
        file.write("T3 %d %d %d\n" % t.dims)
        for i in range(0, values.size, PER_LINE):
            file.write(" ".join("%.17g" % x for x in values[i:i + PER_LINE]) + "\n")

def write_matrix(filename, m):
    ''' Write an M file '''
    m = as_matrix(m)
    with open(filename, "w", encoding="utf8") as file:
        file.write("M %d %d\n" % m.shape)
        for row in m:
            file.write(" ".join("%.17g" % x for x in row) + "\n")
