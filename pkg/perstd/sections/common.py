#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
    Common tensor section
    =====================
'''

from ..internals.fields import IntField, IntListField, PathField
from ..internals.section import Section

class Common(Section):
    '''
        Dimensions M1 M2 M3 and CP rank R of the common tensor, and
        optionally the true tensor for decompose to compare against
    '''

    def build(self):
        self += IntListField("Dims", length=3, minimum=1, mandatory=True)
        self += IntField("Rank", minimum=1, mandatory=True)
        self += PathField("Truth", doc="Known common tensor, NRMSE is reported against it")
