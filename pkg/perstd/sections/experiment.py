#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
    Experiment section
    ==================

    Which command the configuration drives and the Monte Carlo setup.
'''

from ..internals.fields import EnumField, IntField, PathField
from ..internals.section import Section

MODES = {
    "synth-snr",
    "ablate-alpha",
    "ablate-rank",
    "fuse",
    "check-uniqueness",
    "decompose",
    "generate",
}

class Experiment(Section):
    '''
        Experiment section
    '''

    def build(self):
        self += EnumField("Mode", legal_values=MODES, mandatory=True)
        self += IntField("Seed", minimum=0, default=0)
        self += IntField("Runs", minimum=1, default=20)
        self += PathField("Output", must_exist=False)
        self += IntField("Jobs", minimum=1, default=1)
