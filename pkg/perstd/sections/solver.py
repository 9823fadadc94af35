#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
    Solver section
    ==============
'''

from ..internals.fields import EnumField, IntField, FloatField, IntListField
from ..internals.section import Section

class YesNo(EnumField):
    ''' yes or no '''

    def __init__(self, name, **kwargs):
        super().__init__(name, legal_values={"yes", "no"}, **kwargs)

    def convert(self):
        return super().convert() == "yes"

class Solver(Section):
    '''
        Solver section
    '''

    def build(self):
        self += EnumField("Method", legal_values={"als", "semialg"}, default="als")
        self += EnumField("Init", legal_values={"random", "semialg"}, default="random")
        self += IntField("Restarts", minimum=1, default=50)
        self += IntField("Max_iters", minimum=1, default=1000)
        self += FloatField("Tol", minimum=0.0, default=1e-9)
        self += IntField("Cpd_restarts", minimum=1, default=50)
        self += IntListField("Witness", length=4, minimum=1)
        self += YesNo("Distinct_cpd", default=False)
