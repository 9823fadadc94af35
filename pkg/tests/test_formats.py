#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

import numpy as np
import pytest

from perstd.tensor_core import Tensor3
from perstd.formats.dense import (
    TensorFile, read_tensor, read_matrix, write_tensor, write_matrix,
)
from perstd.internals.exceptions import FileFormatError

def test_tensor_file(tmp_path, rng):
    t = Tensor3(rng.standard_normal((2, 3, 4)))
    path = tmp_path / "t.t3"
    write_tensor(path, t)
    text = path.read_text()
    assert text.startswith("T3 2 3 4\n")
    assert len(text.splitlines()) == 1 + 4
    assert read_tensor(path) == t

def test_tensor_layout(tmp_path):
    path = tmp_path / "t.t3"
    path.write_text("T3 2 1 2\n1 2\n3 4\n")
    t = read_tensor(path)
    assert t.data[1, 0, 0] == 2
    assert t.data[0, 0, 1] == 3

def test_matrix_file(tmp_path):
    path = tmp_path / "p.m"
    write_matrix(path, np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]))
    assert path.read_text().splitlines() == ["M 2 3", "1 2 3", "4 5 6"]
    assert read_matrix(path)[1, 0] == 4.0

@pytest.mark.parametrize("text,why", [
    ("", "Missing 'T3' header"),
    ("M 2 2\n1 2 3 4\n", "Missing 'T3' header"),
    ("T3 2 x 2\n", "Dimensions are not integers"),
    ("T3 2 0 2\n", "Need 3 positive dimensions"),
    ("T3 1 1 2\n1\n", "Expected 2 values, found 1"),
    ("T3 1 1 2\n1 y\n", "Values are not numbers"),
    ("T3 1 1 2\n1 nan\n", "Values must be finite"),
])
def test_tensor_litany(tmp_path, text, why):
    path = tmp_path / "bad.t3"
    path.write_text(text)
    complaints = list(TensorFile(path).litany())
    assert [x.text for x in complaints] == [why]
    assert complaints[0].where == str(path)
    with pytest.raises(FileFormatError):
        read_tensor(path)

def test_missing_file(tmp_path):
    with pytest.raises(FileFormatError) as err:
        read_matrix(tmp_path / "nowhere.m")
    assert "nowhere.m" in err.value.where
