#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Syntax-checking and lexing of experiment configuration files
   ------------------------------------------------------------

   A configuration is a sequence of stanzas::

	Section.Field:
		value line
		value line

   terminated by a line reading ``*END*``.  Indexed sections are
   written ``Dataset[2].Field:``.  Lines starting with ``#`` in header
   position are comments.

   The first syntax error raises ConfigSyntaxError with the number
   and text of the offending line.
'''

import re

from ..internals.exceptions import ConfigSyntaxError

END = "*END*"

HEADER = re.compile(
    r"(?P<section>[A-Za-z_]\w*)(?:\[(?P<index>[^\]\[]*)\])?\.(?P<field>[A-Za-z_]\w*)",
    re.ASCII,
)

class ConfigLine():
    ''' A line of configuration, knows its own line number '''

    def __init__(self, lineno, text):
        self.lineno = lineno
        self.text = text
        if text.startswith(" "):
            self.complain("Leading SP (only TAB allowed)")

    def __repr__(self):
        return "<ConfigLine %d: %s>" % (self.lineno, self.text)

    def __len__(self):
        return len(self.text)

    def is_comment(self):
        return self.text.startswith("#")

    def is_value(self):
        return self.text.startswith("\t")

    def complain(self, why):
        ''' raise a syntax error on this line '''
        raise ConfigSyntaxError(why, line=self.text, where="line %d" % self.lineno)

class ConfigStanza():
    '''
    A stanza header and the TAB-indented value lines under it

    The header is checked as soon as it is seen, the body when the
    blank line closing the stanza arrives.
    '''

    def __init__(self, header):
        self.stanza_line = header
        self.lines = []
        text = header.text
        if not text.endswith(":"):
            self.complain("Stanza header does not end in ':'")
        match = HEADER.fullmatch(text[:-1])
        if match is None:
            self.complain(self._why_malformed(text[:-1]))
        self.section = match.group("section")
        self.field = match.group("field")
        self.name = self.section + "." + self.field
        self.index = self._parse_index(match.group("index"))

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        yield from self.lines

    def __repr__(self):
        return "<ConfigStanza %s>" % self.name

    def __getitem__(self, idx):
        return self.lines[idx]

    @staticmethod
    def _why_malformed(text):
        dots = text.count(".")
        if dots == 0:
            return "No '.' in stanza header"
        if dots > 1:
            return "Too many '.' in stanza header"
        sect, fld = text.split(".")
        if "[" in fld or "]" in fld:
            return "Index '[…]' must come after section name"
        if not sect:
            return "Missing section name"
        if HEADER.fullmatch(sect + ".x"):
            return "Illegal field name"
        if "[" in sect or "]" in sect:
            return "Malformed section index"
        return "Illegal section name"

    def _parse_index(self, text):
        if text is None:
            return None
        if not text.isascii() or not text.isdigit():
            self.complain("Index is not a number")
        if text[0] == "0":
            self.complain("Index has leading zeros")
        return int(text, 10)

    def append(self, line):
        ''' Add a value line '''
        if not line.is_value():
            line.complain("Line does not start with TAB")
        self.lines.append(line)

    def close(self):
        ''' The blank line ending the stanza was seen '''
        if not self.lines:
            self.complain("Empty stanza")
        return self

    def iterlines(self):
        ''' Iterate the lines without the leading TAB '''
        for i in self.lines:
            yield i, i.text[1:]

    def complain(self, why):
        ''' raise a syntax error on the header '''
        self.stanza_line.complain(why)

class ConfigSyntax():
    ''' Check syntax and split configuration into stanzas '''

    def __init__(self, text):
        lines = [ConfigLine(num, x) for num, x in enumerate(text.split("\n"), start=1)]
        if len(lines) <= 1:
            raise ConfigSyntaxError("Empty")
        if lines[-1].text:
            lines[-1].complain("Missing NL on last line")
        self.stanzas = list(self.lexer(lines[:-1]))

    def __iter__(self):
        yield from self.stanzas

    @staticmethod
    def lexer(lines):
        ''' Yield the stanzas, stop at *END* '''
        stanza = None
        for line in lines:
            if stanza is not None:
                if not line.text:
                    yield stanza.close()
                    stanza = None
                elif line.text == END:
                    line.complain("Missing blank line before *END*")
                else:
                    stanza.append(line)
            elif line.is_comment():
                continue
            elif line.text == END:
                if line.lineno != len(lines):
                    lines[line.lineno].complain("*END* is not final line")
                return
            elif not line.text:
                line.complain("Blank line not allowed, stanza or *END* expected")
            elif line.is_value():
                line.complain("Stanza header expected, not TAB-indented line")
            else:
                stanza = ConfigStanza(line)
        lines[-1].complain("Unexpected end of file (no *END*)")
