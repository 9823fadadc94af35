#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Common exceptions
   -----------------
'''

class PerstdError(Exception):
    ''' Base class, knows where in a file it happened if applicable '''

    kind = "Error"

    def __init__(self, text, line="", where=""):
        super().__init__(text)
        self.text = text
        self.line = line
        self.where = where

    def __str__(self):
        text = self.kind + ": " + self.text
        if self.where:
            text += "\n  " + self.where
        if self.line:
            text += "\n  ⎣" + self.line + "⎤"
        return text

class ConfigSyntaxError(PerstdError):
    ''' Syntax error in configuration file '''
    kind = "Config Syntax Error"

class ConfigSemanticError(PerstdError):
    ''' Semantic error in configuration file '''
    kind = "Config Semantic Error"

class FileFormatError(PerstdError):
    ''' Malformed tensor or matrix file '''
    kind = "FileFormat Error"

class ShapeError(PerstdError):
    ''' Dimensions do not agree '''
    kind = "Shape Error"

class PreconditionError(PerstdError):
    ''' Arguments outside the domain of the operation '''
    kind = "Precondition Error"

class NumericsError(PerstdError):
    ''' Factorization failed '''
    kind = "Numerics Error"

class SingularSystemError(NumericsError):
    ''' Linear system is singular to working precision '''
    kind = "Singular System"

class SolverError(PerstdError):
    ''' Iterative solver misbehaved '''
    kind = "Solver Error"
