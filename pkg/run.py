#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

''' Small wrapper to run uninstalled '''

import perstd.__main__ as main

main.main_exit()
