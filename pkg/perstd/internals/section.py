#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Configuration sections
   ----------------------

   ``Foo.Bar:`` in a configuration file is field ``Bar`` of the class
   ``Foo`` in module ``perstd.sections.foo``, imported on first use.
'''

import functools
import importlib

from ..internals import fields

class SectionError(Exception):
    ''' A stanza header names a section which cannot be made '''

@functools.lru_cache(maxsize=None)
def section_class(sect_name):
    ''' The Section subclass implementing sect_name '''
    path = "perstd.sections." + sect_name.lower()
    try:
        module = importlib.import_module(path)
    except ModuleNotFoundError as err:
        if err.name == path:
            raise SectionError("Unknown section") from err
        raise
    sect_class = getattr(module, sect_name, None)
    if not isinstance(sect_class, type) or not issubclass(sect_class, Section):
        raise SectionError("Unknown section")
    return sect_class

def get_section(config, sect_name, index):
    ''' New, empty, section of config '''
    sect_class = section_class(sect_name)
    if index is not None and not sect_class.indexed:
        raise SectionError("Section cannot be indexed")
    if index is None and sect_class.indexed:
        raise SectionError("Section must be indexed")
    return sect_class(config, index)

class Section():
    '''
    One section of an experiment configuration

    Subclasses declare their fields in build() and set ``indexed``
    if they are written ``Name[k].Field:``.
    '''

    indexed = False

    def __init__(self, config, index=None):
        self.config = config
        self.name = type(self).__name__
        self.index = index
        if index is None:
            self.full_name = self.name
        else:
            self.full_name = "%s[%d]" % (self.name, index)
        self.fields = {}
        self.build()

    def __repr__(self):
        return "<Section %s>" % self.full_name

    def __iadd__(self, fld):
        assert isinstance(fld, fields.Field)
        assert fld.name not in self.fields, fld.name
        fld.sect = self
        fld.full_name = self.full_name + "." + fld.name
        self.fields[fld.name] = fld
        return self

    def __getattr__(self, key):
        try:
            return self.__dict__["fields"][key]
        except KeyError:
            raise AttributeError(key) from None

    def build(self):
        ''' Declare the fields '''
        raise NotImplementedError(type(self).__name__ + ".build()")

    def add_field(self, stanza):
        ''' Give a parsed stanza to its field '''
        fld = self.fields.get(stanza.field)
        if fld is None:
            stanza.complain("No field %s in section %s" % (stanza.field, self.name))
        fld.create(stanza)

    def require(self, *names):
        ''' Complaints for absent fields the current mode needs '''
        for name in names:
            fld = self.fields[name]
            if not fld and fld.default is None:
                yield fld.complaint("Mode %s needs %s" % (self.config.mode, fld.full_name))

    def litany(self, **kwargs):
        ''' Complaints from every field '''
        for fld in self.fields.values():
            yield from fld.litany(**kwargs)

    def serialize(self):
        ''' Canonical text of the fields given '''
        for fld in self.fields.values():
            yield from fld.serialize()
