#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
    Cloud section
    =============

    Cloud-contaminated image fusion: the high resolution image, the
    cloud cover maps and the two sensors degrading it.
'''

from ..internals.fields import IntField, FloatField, IntListField, FloatListField
from ..internals.fields import PathField, PathListField
from ..internals.section import Section

class Coverage(FloatListField):
    ''' Target mean cloud cover per pixel, fractions in [0, 1) '''

    def validate(self, **kwargs):
        yield from super().validate(**kwargs)
        try:
            cover = self.convert()
        except ValueError:
            return
        if min(cover) < 0.0 or max(cover) >= 1.0:
            yield self.complaint("Coverage must be in [0, 1)")

class Spectrum(FloatListField):
    ''' Cloud reflectance per band '''

    def validate(self, **kwargs):
        yield from super().validate(**kwargs)
        try:
            spectrum = self.convert()
            bands = self.sect.Image_dims.value[2]
        except ValueError:
            return
        if min(spectrum) < 0.0:
            yield self.complaint("Cloud reflectance cannot be negative")
        if len(spectrum) != bands:
            yield self.complaint("Expected %d bands, got %d" % (bands, len(spectrum)))

class Cloud(Section):
    '''
        Cloud section
    '''

    def build(self):
        self += IntListField("Image_dims", length=3, minimum=1, default=(32, 32, 16))
        self += IntField("Common_rank", minimum=1, default=6)
        self += IntField("Distinct_rank", minimum=0, default=2)
        self += Coverage("Coverage", default=(0.0, 0.02, 0.05, 0.1))
        self += FloatField("Smoothing", minimum=0.0, default=3.0)
        self += Spectrum("Spectrum")
        self += PathListField("Maps", length=2)
        self += PathField("Hri")
        self += IntField("Decimation", minimum=1, default=4)
        self += IntField("Msi_bands", minimum=1, default=4)
        self += FloatField("Snr_db", default=30.0)
        self += IntField("Max_iters", minimum=1, default=50)

    def spectrum(self):
        ''' Cloud reflectance, flat 0.7 when not given '''
        if self.Spectrum:
            return self.Spectrum.value
        return (0.7,) * self.Image_dims.value[2]
