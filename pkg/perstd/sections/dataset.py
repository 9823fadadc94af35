#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
    Dataset sections
    ================

    ``Dataset[k]`` describes measured tensor k (1-based): its
    dimensions, distinct rank, what is known about the degradation
    matrices, and optionally the files holding the data.
'''

from ..internals.fields import IntField, IntListField, BoolListField, PathField, PathListField
from ..internals.section import Section

class Coupled(IntListField):
    ''' Modes whose factors are tied to the common factor '''

    def __init__(self, name, **kwargs):
        super().__init__(name, minimum=1, default=(1, 2, 3), **kwargs)

    def convert(self):
        modes = super().convert()
        if max(modes) > 3:
            raise ValueError("Modes are 1, 2 or 3")
        if len(set(modes)) != len(modes):
            raise ValueError("Duplicate mode")
        return tuple(sorted(modes))

class MatrixPaths(PathListField):
    ''' P_{k,1} P_{k,2} P_{k,3}, "-" only for uncoupled modes '''

    def validate(self, **kwargs):
        yield from super().validate(**kwargs)
        try:
            paths = self.convert()
            coupled = self.sect.Coupled.value
        except ValueError:
            return
        for mode, path in enumerate(paths, start=1):
            if path is None and mode in coupled:
                yield self.complaint("Coupled mode %d needs a P matrix" % mode)

class Dataset(Section):
    '''
        Dataset[k] sections
    '''

    indexed = True

    def build(self):
        self += IntListField("Dims", length=3, minimum=1, mandatory=True)
        self += IntField("Rank", minimum=0, mandatory=True)
        self += IntListField("P_rank", length=3, minimum=0)
        self += BoolListField("P_full_column", length=3)
        self += Coupled("Coupled")
        self += PathField("Tensor")
        self += MatrixPaths("P", length=3)

    def p_rank(self, common_dims):
        ''' Declared ranks, generic min(N, M) when not given '''
        if self.P_rank:
            return self.P_rank.value
        return tuple(min(n, m) for n, m in zip(self.Dims.value, common_dims))

    def p_full_column(self, common_dims):
        ''' Declared full column rank flags, generic N >= M when not given '''
        if self.P_full_column:
            return self.P_full_column.value
        return tuple(r == m for r, m in zip(self.p_rank(common_dims), common_dims))
