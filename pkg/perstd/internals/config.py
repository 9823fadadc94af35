#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Experiment configuration
   ------------------------
'''

import os

from ..internals import section
from ..internals import syntax
from ..internals.exceptions import ConfigSemanticError

# Sections and fields each mode cannot do without
MODE_NEEDS = {
    "synth-snr": {"Common": (), "Dataset": ()},
    "ablate-alpha": {"Common": (), "Dataset": ()},
    "ablate-rank": {"Common": (), "Dataset": ()},
    "fuse": {},
    "check-uniqueness": {"Common": (), "Dataset": ()},
    "decompose": {"Common": (), "Dataset": ("Tensor", "P")},
    "generate": {"Common": (), "Dataset": ()},
}

OVERRIDABLE = {
    "seed": ("Experiment", "Seed"),
    "runs": ("Experiment", "Runs"),
    "out": ("Experiment", "Output"),
    "jobs": ("Experiment", "Jobs"),
    "restarts": ("Solver", "Restarts"),
}

class ExperimentConfigBase():
    '''
    Experiment configuration
    ------------------------

    Syntax errors raise while parsing, semantic errors are collected
    by ``litany()``.
    '''

    def __init__(self, text=None, basedir="."):
        self.sections = {}
        self.basedir = basedir
        self.overrides = {}

        for stanza in syntax.ConfigSyntax(text):
            full_sect = stanza.section
            if stanza.index is not None:
                full_sect += "[%d]" % stanza.index
            sect = self.sections.get(full_sect)
            if sect is None:
                try:
                    sect = section.get_section(self, stanza.section, stanza.index)
                except section.SectionError as err:
                    stanza.complain(str(err))
                self.sections[full_sect] = sect
            sect.add_field(stanza)

    def __str__(self):
        return "<ExperimentConfig %s>" % self.mode

    def __getattr__(self, key):
        retval = self.__dict__["sections"].get(key)
        if retval is None:
            raise AttributeError(key)
        return retval

    def section(self, name):
        ''' Named section, an all-defaults one if absent '''
        sect = self.sections.get(name)
        if sect is None:
            sect = section.get_section(self, name, None)
        return sect

    @property
    def mode(self):
        ''' The command this configuration drives '''
        sect = self.sections.get("Experiment")
        if sect is None or not sect.Mode:
            return None
        return sect.Mode.val

    @property
    def datasets(self):
        ''' Dataset sections in index order '''
        return [
            sect for _name, sect in sorted(
                (x.index, x) for x in self.sections.values() if x.name == "Dataset"
            )
        ]

    def override(self, **kwargs):
        ''' Command line values take precedence over the file '''
        for key, val in kwargs.items():
            assert key in OVERRIDABLE, key
            if val is not None:
                self.overrides[key] = val

    def get(self, key):
        ''' Value of an overridable setting '''
        if key in self.overrides:
            return self.overrides[key]
        sect_name, fld_name = OVERRIDABLE[key]
        return getattr(self.section(sect_name), fld_name).value

    def validate(self, **kwargs):
        ''' Raise the first complaint '''
        for i in self.litany(**kwargs):
            raise i

    def litany(self, **kwargs):
        ''' Yield a litany of exceptions '''
        if "Experiment" not in self.sections:
            yield ConfigSemanticError("No Experiment section")
            return
        for sect in self.sections.values():
            yield from sect.litany(**kwargs)
        if self.mode not in MODE_NEEDS:
            return
        yield from self.mode_litany()
        if self.datasets and "Common" in self.sections:
            yield from self.dataset_litany()

    def mode_litany(self):
        ''' Complain about what the mode needs but did not get '''
        for sect_name, fld_names in MODE_NEEDS[self.mode].items():
            if sect_name == "Dataset":
                if not self.datasets:
                    yield ConfigSemanticError(
                        "Mode %s needs at least one Dataset[k] section" % self.mode
                    )
                for sect in self.datasets:
                    yield from sect.require(*fld_names)
            elif sect_name not in self.sections:
                yield ConfigSemanticError(
                    "Mode %s needs a %s section" % (self.mode, sect_name)
                )
            else:
                yield from self.sections[sect_name].require(*fld_names)

    def dataset_litany(self):
        ''' Cross-section consistency of the datasets '''
        indices = [x.index for x in self.datasets]
        if indices != list(range(1, len(indices) + 1)):
            yield ConfigSemanticError(
                "Dataset indices must be 1…%d without gaps" % len(indices)
            )
        try:
            common = self.Common.Dims.value
        except ValueError:
            return
        for sect in self.datasets:
            if not sect.Dims or not sect.P_rank:
                continue
            try:
                dims = sect.Dims.value
                ranks = sect.P_rank.value
            except ValueError:
                continue
            for mode, (rnk, n, m) in enumerate(zip(ranks, dims, common), start=1):
                if rnk > min(n, m):
                    yield sect.P_rank.complaint(
                        "Rank of P in mode %d exceeds min(%d, %d)" % (mode, n, m)
                    )
        witness = self.section("Solver").Witness
        if witness:
            try:
                values = witness.value
            except ValueError:
                return
            if max(values) > len(self.datasets):
                yield witness.complaint("Witness names a Dataset which does not exist")

class ExperimentConfig(ExperimentConfigBase):
    '''
    Convenience wrapper reading from a file
    '''

    def __init__(self, *args, filename=None, **kwargs):
        if filename is not None:
            with open(filename, encoding="utf8") as file:
                text = file.read()
            super().__init__(
                text,
                *args,
                basedir=os.path.dirname(os.path.abspath(filename)),
                **kwargs
            )
        else:
            super().__init__(*args, **kwargs)
