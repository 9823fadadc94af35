#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Field classes
   -------------

   A field holds the raw text of one stanza in ``.val`` and converts
   it to a typed value on demand through ``.value``.  Conversion
   problems are reported through the litany, never raised from
   ``create()``.
'''

import math
import os

from ..internals.syntax import ConfigLine
from ..internals.exceptions import ConfigSemanticError

class Field():
    ''' A field in a configuration section '''

    def __init__(self, name, single=True, mandatory=False, default=None, doc=""):
        assert name[:1].isupper(), name
        self.name = name
        self.single = bool(single)
        self.mandatory = bool(mandatory)
        self.default = default
        self.doc = doc
        # set by Section.__iadd__
        self.sect = None
        self.full_name = name
        # set by create()
        self.stanza = None
        self.val = None

    def __bool__(self):
        return self.stanza is not None

    def __repr__(self):
        return "<%s %s>" % (type(self).__name__, self.full_name)

    def complaint(self, why, where=None):
        ''' ConfigSemanticError pointing at `where`, the header by default '''
        if where is None and self.stanza is not None:
            where = self.stanza.stanza_line
        if where is None:
            return ConfigSemanticError("%s (%s)" % (why, self.full_name))
        assert isinstance(where, ConfigLine)
        return ConfigSemanticError(why, where="line %d" % where.lineno, line=where.text)

    def _trailing_space(self):
        for line in [self.stanza.stanza_line] + list(self.stanza):
            if line.text.strip("\t") and line.text[-1].isspace():
                yield line

    def litany(self, **kwargs):
        ''' Yield a litany of exceptions '''
        if self.stanza is None:
            if self.mandatory:
                yield self.complaint("Missing mandatory field " + self.full_name)
            return
        for line in self._trailing_space():
            yield self.complaint("Trailing white space", line)
        yield from self.validate(**kwargs)

    def validate(self, **_kwargs):
        ''' Valid if it converts '''
        try:
            self.convert()
        except ValueError as err:
            yield self.complaint(str(err))

    def create(self, stanza):
        ''' Take the text of stanza, once '''
        if self.stanza is not None:
            stanza.complain("Field already defined at line %d" % self.stanza.stanza_line.lineno)
        if self.single and len(stanza) > 1:
            stanza[1].complain(self.full_name + " only allows a single line")
        self.stanza = stanza
        values = [text for _line, text in stanza.iterlines()]
        self.val = values[0] if self.single else values

    def convert(self):
        ''' Typed value of .val, raises ValueError '''
        return self.val

    @property
    def value(self):
        ''' Typed value, or the default if the field was not given '''
        if self.stanza is None:
            return self.default
        return self.convert()

    def serialize(self):
        ''' Stanza text for this field, nothing if not given '''
        if self.stanza is None:
            return
        yield self.full_name + ":"
        values = [self.val] if self.single else self.val
        yield from ("\t" + str(x) for x in values)
        yield ""

class EnumField(Field):
    ''' Field which takes its value from a limited enumerated set '''

    def __init__(self, name, legal_values, **kwargs):
        super().__init__(name, **kwargs)
        self.legal_values = legal_values

    def convert(self):
        if self.val not in self.legal_values:
            raise ValueError(
                "Illegal value (%s), expected one of: %s" % (
                    self.val, ", ".join(sorted(self.legal_values))
                )
            )
        return self.val

class IntField(Field):
    ''' A single integer '''

    def __init__(self, name, minimum=None, **kwargs):
        super().__init__(name, **kwargs)
        self.minimum = minimum

    def convert(self):
        try:
            i = int(self.val, 10)
        except ValueError:
            raise ValueError("Not an integer (%s)" % self.val) from None
        if self.minimum is not None and i < self.minimum:
            raise ValueError("Must be at least %d" % self.minimum)
        return i

def _float(text):
    ''' float() which also accepts inf/-inf but not nan '''
    i = float(text)
    if math.isnan(i):
        raise ValueError("NaN not allowed")
    return i

class FloatField(Field):
    ''' A single real number, "inf" allowed '''

    def __init__(self, name, minimum=None, maximum=None, **kwargs):
        super().__init__(name, **kwargs)
        self.minimum = minimum
        self.maximum = maximum

    def convert(self):
        try:
            i = _float(self.val)
        except ValueError:
            raise ValueError("Not a number (%s)" % self.val) from None
        if self.minimum is not None and i < self.minimum:
            raise ValueError("Must be at least %g" % self.minimum)
        if self.maximum is not None and i > self.maximum:
            raise ValueError("Must be at most %g" % self.maximum)
        return i

class ListField(Field):
    ''' White-space separated values on a single line '''

    def __init__(self, name, length=None, **kwargs):
        super().__init__(name, **kwargs)
        self.length = length

    def convert_item(self, text):
        ''' Convert one item, raises ValueError '''
        return text

    def convert(self):
        items = self.val.split()
        if self.length is not None and len(items) != self.length:
            raise ValueError("Expected %d values, got %d" % (self.length, len(items)))
        if not items:
            raise ValueError("Empty list")
        return tuple(self.convert_item(x) for x in items)

class IntListField(ListField):
    ''' Integers on one line '''

    def __init__(self, name, minimum=None, **kwargs):
        super().__init__(name, **kwargs)
        self.minimum = minimum

    def convert_item(self, text):
        try:
            i = int(text, 10)
        except ValueError:
            raise ValueError("Not an integer (%s)" % text) from None
        if self.minimum is not None and i < self.minimum:
            raise ValueError("Values must be at least %d" % self.minimum)
        return i

class FloatListField(ListField):
    ''' Reals on one line, "inf" allowed '''

    def convert_item(self, text):
        try:
            return _float(text)
        except ValueError:
            raise ValueError("Not a number (%s)" % text) from None

class BoolListField(ListField):
    ''' yes/no flags on one line '''

    def convert_item(self, text):
        if text not in ("yes", "no"):
            raise ValueError("Expected yes or no (%s)" % text)
        return text == "yes"

class PathField(Field):
    ''' A file or directory, relative to the configuration file '''

    def __init__(self, name, must_exist=True, **kwargs):
        super().__init__(name, **kwargs)
        self.must_exist = must_exist

    def resolve(self, text):
        ''' Make relative paths relative to the config file '''
        return os.path.join(self.sect.config.basedir, text)

    def convert(self):
        return self.resolve(self.val)

    def validate(self, **kwargs):
        yield from super().validate(**kwargs)
        if self.must_exist and not os.path.exists(self.convert()):
            yield self.complaint("No such file: %s" % self.convert())

class PathListField(PathField):
    ''' One path per line, "-" for an absent file '''

    def __init__(self, name, length=None, **kwargs):
        super().__init__(name, single=False, **kwargs)
        self.length = length

    def convert(self):
        if self.length is not None and len(self.val) != self.length:
            raise ValueError("Expected %d paths, got %d" % (self.length, len(self.val)))
        return tuple(None if x == "-" else self.resolve(x) for x in self.val)

    def validate(self, **kwargs):
        try:
            paths = self.convert()
        except ValueError as err:
            yield self.complaint(str(err))
            return
        if not self.must_exist:
            return
        for line, path in zip(self.stanza, paths):
            if path is not None and not os.path.exists(path):
                yield self.complaint("No such file: %s" % path, line)
