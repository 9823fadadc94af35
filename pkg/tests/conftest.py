#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

''' Shared fixtures, and --runslow for the Monte Carlo runs '''

import numpy as np
import pytest

from perstd.tensor_core import CpdFactors

THREE_DATASETS_COMMON = (7, 11, 9)
THREE_DATASETS_DIMS = ((10, 5, 7), (5, 12, 7), (5, 7, 10))

def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")

def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte Carlo runs, minutes each")

def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)

@pytest.fixture
def rng():
    return np.random.default_rng(1234)

def random_cpd(rng, dims, rank):
    ''' Gaussian CpdFactors '''
    return CpdFactors(*[rng.standard_normal((n, rank)) for n in dims])

def three_datasets_text(mode="check-uniqueness", rank=5, distinct=(5, 5, 5), extra=""):
    ''' Configuration text for the three dataset problem '''
    lines = ["Experiment.Mode:", "\t" + mode, ""]
    lines += ["Common.Dims:", "\t7 11 9", "", "Common.Rank:", "\t%d" % rank, ""]
    for k, (dims, l) in enumerate(zip(THREE_DATASETS_DIMS, distinct), start=1):
        lines += ["Dataset[%d].Dims:" % k, "\t%d %d %d" % dims, ""]
        lines += ["Dataset[%d].Rank:" % k, "\t%d" % l, ""]
    text = "\n".join(lines) + "\n" + extra
    return text + "*END*\n"
