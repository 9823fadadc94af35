#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Minimal export
'''

__version__ = "1.0"

from perstd.internals import ExperimentConfig
from perstd.internals.exceptions import (
    PerstdError, ConfigSyntaxError, ConfigSemanticError, FileFormatError,
    ShapeError, PreconditionError, NumericsError, SingularSystemError, SolverError,
)
from perstd.tensor_core import Tensor3, CpdFactors
from perstd.model import MeasurementModel, CoupledModel
