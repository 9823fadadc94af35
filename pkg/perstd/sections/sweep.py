#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
    Sweep section
    =============

    Grids for the alpha-blend and rank-misspecification ablations.
'''

from ..internals.fields import FloatListField, IntListField
from ..internals.section import Section

class Alpha(FloatListField):
    ''' Blend weights in [0, 1] '''

    def validate(self, **kwargs):
        yield from super().validate(**kwargs)
        try:
            alphas = self.convert()
        except ValueError:
            return
        if min(alphas) < 0.0 or max(alphas) > 1.0:
            yield self.complaint("Alpha must be in [0, 1]")

class Sweep(Section):
    '''
        Sweep section
    '''

    def build(self):
        self += Alpha("Alpha", default=(0.0, 0.2, 0.4, 0.6, 0.8, 1.0))
        self += IntListField("Common_ranks", minimum=1, default=(3, 4, 5, 6, 7))
        self += IntListField("Distinct_ranks", minimum=0, default=(3, 4, 5, 6, 7))
