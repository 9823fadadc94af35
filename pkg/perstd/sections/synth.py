#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
    Synthetic data section
    ======================
'''

from ..internals.fields import EnumField, FloatListField
from ..internals.section import Section

class Synth(Section):
    '''
        SNR grid in dB ("inf" for noiseless) and the law of P entries
    '''

    def build(self):
        self += FloatListField("Snr_db", default=(float("inf"),))
        self += EnumField(
            "P_distribution",
            legal_values={"uniform01", "gaussian"},
            default="uniform01",
        )
